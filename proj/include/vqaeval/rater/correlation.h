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

#ifndef VQAEVAL_RATER_CORRELATION_H_
#define VQAEVAL_RATER_CORRELATION_H_

#include <cstdint>
#include <vector>

namespace vqaeval::rater {

// Pair counts behind tau-b. s = concordant - discordant; n1/n2 are the tied
// pairs in x/y.
struct TauCounts {
  int64_t n0 = 0;
  int64_t n1 = 0;
  int64_t n2 = 0;
  int64_t s = 0;
};

// O(n log n) (Knight's merge-sort scheme).
TauCounts KendallCounts(const std::vector<double>& x,
                        const std::vector<double>& y);

// s / sqrt((n0 - n1) (n0 - n2)). Throws Error(kDegenerate) when the
// denominator is zero.
double TauBFromCounts(const TauCounts& counts);

// Kendall tau-b. Needs equal lengths >= 2.
double KendallTauB(const std::vector<double>& x, const std::vector<double>& y);

// Ranks 1..n with ties sharing their average rank.
std::vector<double> AverageRanks(const std::vector<double>& values);

// Pearson correlation; Error(kDegenerate) on zero variance.
double Pearson(const std::vector<double>& x, const std::vector<double>& y);

// Pearson correlation of average ranks.
double SpearmanRho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vqaeval::rater

#endif  // VQAEVAL_RATER_CORRELATION_H_
