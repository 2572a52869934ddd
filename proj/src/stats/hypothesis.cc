// Copyright 2026 The VQA Robustness Harness Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqaeval/stats/hypothesis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "vqaeval/common/error.h"

namespace vqaeval::stats {
namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double var = 0.0;  // Sample variance (n - 1).
};

Moments ComputeMoments(const std::vector<double>& values) {
  Moments m;
  m.n = static_cast<double>(values.size());
  for (double v : values) m.mean += v;
  m.mean /= m.n;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.var = ss / (m.n - 1.0);
  return m;
}

}  // namespace

WelchResult WelchTTest(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "Welch t-test needs at least two values per sample");
  }
  const Moments ma = ComputeMoments(a);
  const Moments mb = ComputeMoments(b);
  const double sa = ma.var / ma.n;
  const double sb = mb.var / mb.n;
  if (sa + sb == 0.0) {
    throw Error(ErrorCode::kDegenerate,
                "Welch t-test with zero variance in both samples");
  }
  WelchResult result;
  result.t = (ma.mean - mb.mean) / std::sqrt(sa + sb);
  result.df = (sa + sb) * (sa + sb) /
              (sa * sa / (ma.n - 1.0) + sb * sb / (mb.n - 1.0));
  if (result.t == 0.0) {
    result.p = 1.0;
    return result;
  }
  const boost::math::students_t dist(result.df);
  result.p = std::min(
      1.0, 2.0 * boost::math::cdf(boost::math::complement(dist,
                                                          std::fabs(result.t))));
  return result;
}

AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "ANOVA needs at least two groups");
  }
  std::vector<Moments> moments;
  double total_n = 0.0;
  double grand_sum = 0.0;
  for (const std::vector<double>& group : groups) {
    if (group.size() < 2) {
      throw Error(ErrorCode::kInsufficientData,
                  "ANOVA needs at least two values per group");
    }
    moments.push_back(ComputeMoments(group));
    total_n += group.size();
    for (double v : group) grand_sum += v;
  }
  double ss_within = 0.0;
  for (const Moments& m : moments) ss_within += m.var * (m.n - 1.0);
  AnovaResult result;
  result.df_between = static_cast<double>(groups.size()) - 1.0;
  result.df_within = total_n - static_cast<double>(groups.size());
  if (ss_within == 0.0) {
    throw Error(ErrorCode::kDegenerate,
                "ANOVA with zero within-group variance (F undefined)");
  }
  const bool equal_means =
      std::all_of(moments.begin(), moments.end(),
                  [&](const Moments& m) { return m.mean == moments[0].mean; });
  if (equal_means) return result;  // F = 0, p = 1.
  const double grand_mean = grand_sum / total_n;
  double ss_between = 0.0;
  for (const Moments& m : moments) {
    ss_between += m.n * (m.mean - grand_mean) * (m.mean - grand_mean);
  }
  result.f = (ss_between / result.df_between) / (ss_within / result.df_within);
  const boost::math::fisher_f dist(result.df_between, result.df_within);
  result.p = boost::math::cdf(boost::math::complement(dist, result.f));
  return result;
}

std::string_view CorrectionName(Correction correction) {
  switch (correction) {
    case Correction::kHolm: return "holm";
    case Correction::kBonferroni: return "bonferroni";
    case Correction::kNone: return "none";
  }
  return "holm";
}

Correction ParseCorrection(std::string_view name) {
  if (name == "holm") return Correction::kHolm;
  if (name == "bonferroni") return Correction::kBonferroni;
  if (name == "none") return Correction::kNone;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown correction '" + std::string(name) + "'");
}

std::vector<double> AdjustPValues(const std::vector<double>& p,
                                  Correction correction) {
  const size_t m = p.size();
  std::vector<double> adjusted(p);
  if (correction == Correction::kNone || m == 0) return adjusted;
  if (correction == Correction::kBonferroni) {
    for (double& v : adjusted) v = std::min(1.0, v * m);
    return adjusted;
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return p[a] < p[b]; });
  double running = 0.0;
  for (size_t rank = 0; rank < m; ++rank) {
    const size_t i = order[rank];
    running = std::max(running, std::min(1.0, (m - rank) * p[i]));
    adjusted[i] = running;
  }
  return adjusted;
}

namespace {

bool IsConstant(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return v == values.front(); });
}

}  // namespace

SignificanceMatrix WinLossMatrix(
    const std::map<std::string, std::map<std::string, std::vector<double>>>& rr,
    double alpha, Correction correction) {
  SignificanceMatrix matrix;
  matrix.alpha = alpha;
  matrix.correction = correction;
  matrix.shifts = rr.size();
  if (rr.empty()) return matrix;
  for (const auto& [method, values] : rr.begin()->second) {
    matrix.methods.push_back(method);
  }
  const size_t k = matrix.methods.size();
  matrix.wins.assign(k, std::vector<int>(k, 0));
  for (const auto& [shift, by_method] : rr) {
    if (by_method.size() != k) {
      throw Error(ErrorCode::kMisaligned,
                  "shift '" + shift + "' does not list every method");
    }
    for (size_t i = 0; i < k; ++i) {
      if (by_method.count(matrix.methods[i]) == 0) {
        throw Error(ErrorCode::kMisaligned, "shift '" + shift +
                                                "' lacks method '" +
                                                matrix.methods[i] + "'");
      }
    }
    std::vector<PairTest> family;
    std::vector<std::pair<size_t, size_t>> index;
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = i + 1; j < k; ++j) {
        const std::vector<double>& a = by_method.at(matrix.methods[i]);
        const std::vector<double>& b = by_method.at(matrix.methods[j]);
        PairTest test;
        test.shift = shift;
        test.method_a = matrix.methods[i];
        test.method_b = matrix.methods[j];
        if (a.size() < 2 || b.size() < 2) {
          throw Error(ErrorCode::kInsufficientData,
                      "win/loss needs at least two RR values per method");
        }
        test.mean_a = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
        test.mean_b = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
        if (IsConstant(a) && IsConstant(b)) {
          test.welch.t = 0.0;
          test.welch.df = 0.0;
          test.welch.p = a.front() == b.front() ? 1.0 : 0.0;
        } else {
          test.welch = WelchTTest(a, b);
        }
        family.push_back(test);
        index.emplace_back(i, j);
      }
    }
    std::vector<double> p;
    for (const PairTest& test : family) p.push_back(test.welch.p);
    const std::vector<double> adjusted = AdjustPValues(p, correction);
    for (size_t f = 0; f < family.size(); ++f) {
      PairTest& test = family[f];
      test.p_adjusted = adjusted[f];
      test.significant =
          test.p_adjusted < alpha && test.mean_a != test.mean_b;
      if (test.significant) {
        const auto [i, j] = index[f];
        if (test.mean_a > test.mean_b) {
          test.winner = test.method_a;
          ++matrix.wins[i][j];
        } else {
          test.winner = test.method_b;
          ++matrix.wins[j][i];
        }
      }
      matrix.tests.push_back(std::move(test));
    }
  }
  return matrix;
}

Json SignificanceMatrixToJson(const SignificanceMatrix& matrix) {
  Json tests = Json::array();
  for (const PairTest& t : matrix.tests) {
    tests.push_back({{"shift", t.shift},
                     {"method_a", t.method_a},
                     {"method_b", t.method_b},
                     {"mean_a", t.mean_a},
                     {"mean_b", t.mean_b},
                     {"t", t.welch.t},
                     {"df", t.welch.df},
                     {"p", t.welch.p},
                     {"p_adjusted", t.p_adjusted},
                     {"significant", t.significant},
                     {"winner", t.winner}});
  }
  return Json{{"methods", matrix.methods},
              {"wins", matrix.wins},
              {"alpha", matrix.alpha},
              {"correction", CorrectionName(matrix.correction)},
              {"shifts", matrix.shifts},
              {"tests", tests}};
}

}  // namespace vqaeval::stats
