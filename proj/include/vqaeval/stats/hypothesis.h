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

#ifndef VQAEVAL_STATS_HYPOTHESIS_H_
#define VQAEVAL_STATS_HYPOTHESIS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/common/io.h"

namespace vqaeval::stats {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // Two-sided.
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Needs >= 2 values per sample; throws Error(kDegenerate) when both
// sample variances are zero.
WelchResult WelchTTest(const std::vector<double>& a,
                       const std::vector<double>& b);

struct AnovaResult {
  double f = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double p = 1.0;
};

// Classic one-way ANOVA. Needs >= 2 groups with >= 2 values each. Zero
// within-group variance raises Error(kDegenerate); equal group means give
// exactly F = 0, p = 1.
AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups);

enum class Correction { kHolm, kBonferroni, kNone };

std::string_view CorrectionName(Correction correction);
Correction ParseCorrection(std::string_view name);

// Family-wise adjusted p-values, in input order.
std::vector<double> AdjustPValues(const std::vector<double>& p,
                                  Correction correction);

struct PairTest {
  std::string shift;
  std::string method_a;
  std::string method_b;
  double mean_a = 0.0;
  double mean_b = 0.0;
  WelchResult welch;
  double p_adjusted = 1.0;
  bool significant = false;
  std::string winner;  // Empty when not significant.
};

struct SignificanceMatrix {
  std::vector<std::string> methods;  // Sorted.
  // wins[i][j]: shifts where methods[i] significantly beats methods[j].
  std::vector<std::vector<int>> wins;
  double alpha = 0.05;
  Correction correction = Correction::kHolm;
  size_t shifts = 0;
  std::vector<PairTest> tests;
};

// rr[shift][method] = bootstrapped RR values. Every shift must list the same
// methods (Error(kMisaligned) otherwise). Each shift is one family: all
// method pairs are Welch-tested and corrected together. Pairs whose values
// are constant within both methods are decided directly: p = 1 when the
// constants agree, p = 0 otherwise.
SignificanceMatrix WinLossMatrix(
    const std::map<std::string, std::map<std::string, std::vector<double>>>& rr,
    double alpha = 0.05, Correction correction = Correction::kHolm);

Json SignificanceMatrixToJson(const SignificanceMatrix& matrix);

}  // namespace vqaeval::stats

#endif  // VQAEVAL_STATS_HYPOTHESIS_H_
