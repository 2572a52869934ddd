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

#include "vqaeval/rater/correlation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vqaeval/common/error.h"

namespace vqaeval::rater {
namespace {

void CheckPair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kMisaligned, "correlation inputs differ in length");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "correlation needs at least two observations");
  }
}

// Sum of t(t-1)/2 over runs of equal values in a sorted sequence.
template <typename Equal>
int64_t TiedPairs(size_t n, Equal equal) {
  int64_t total = 0;
  int64_t run = 1;
  for (size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

// Sorts `values` ascending and returns the number of inversions.
int64_t MergeSortSwaps(std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<double> buffer(n);
  int64_t swaps = 0;
  for (size_t width = 1; width < n; width *= 2) {
    for (size_t lo = 0; lo < n; lo += 2 * width) {
      const size_t mid = std::min(lo + width, n);
      const size_t hi = std::min(lo + 2 * width, n);
      size_t i = lo;
      size_t j = mid;
      size_t k = lo;
      while (i < mid && j < hi) {
        if (values[j] < values[i]) {
          swaps += static_cast<int64_t>(mid - i);
          buffer[k++] = values[j++];
        } else {
          buffer[k++] = values[i++];
        }
      }
      while (i < mid) buffer[k++] = values[i++];
      while (j < hi) buffer[k++] = values[j++];
    }
    values.swap(buffer);
  }
  return swaps;
}

}  // namespace

TauCounts KendallCounts(const std::vector<double>& x,
                        const std::vector<double>& y) {
  CheckPair(x, y);
  const size_t n = x.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });
  std::vector<double> ys(n);
  for (size_t i = 0; i < n; ++i) ys[i] = y[order[i]];

  TauCounts counts;
  counts.n0 = static_cast<int64_t>(n) * static_cast<int64_t>(n - 1) / 2;
  counts.n1 = TiedPairs(n, [&](size_t a, size_t b) {
    return x[order[a]] == x[order[b]];
  });
  const int64_t joint = TiedPairs(n, [&](size_t a, size_t b) {
    return x[order[a]] == x[order[b]] && ys[a] == ys[b];
  });
  const int64_t swaps = MergeSortSwaps(ys);
  counts.n2 = TiedPairs(n, [&](size_t a, size_t b) { return ys[a] == ys[b]; });
  counts.s = counts.n0 - counts.n1 - counts.n2 + joint - 2 * swaps;
  return counts;
}

double TauBFromCounts(const TauCounts& counts) {
  const int64_t dx = counts.n0 - counts.n1;
  const int64_t dy = counts.n0 - counts.n2;
  if (dx == 0 || dy == 0) {
    throw Error(ErrorCode::kDegenerate,
                "Kendall tau-b undefined: an input is constant");
  }
  return static_cast<double>(counts.s) /
         std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

double KendallTauB(const std::vector<double>& x, const std::vector<double>& y) {
  return TauBFromCounts(KendallCounts(x, y));
}

std::vector<double> AverageRanks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  CheckPair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDegenerate, "correlation of a constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double SpearmanRho(const std::vector<double>& x, const std::vector<double>& y) {
  CheckPair(x, y);
  return Pearson(AverageRanks(x), AverageRanks(y));
}

}  // namespace vqaeval::rater
