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

#ifndef VQAEVAL_STATS_ROBUSTNESS_H_
#define VQAEVAL_STATS_ROBUSTNESS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/metrics/score.h"

namespace vqaeval::stats {

// RR = p_ood / p_iid. Throws Error(kUndefined) for p_iid == 0 and
// Error(kDomain) for negative or non-finite inputs.
double RelativeRobustness(double p_iid, double p_ood);

struct SeedRobustness {
  std::string seed;  // "n/a" when unseeded.
  double p_iid = 0.0;
  double p_ood = 0.0;
  double rr = 0.0;
  std::vector<double> iid_values;  // Per-sample scores behind p_iid.
  std::vector<double> ood_values;
};

struct RobustnessCell {
  std::string dataset;
  std::string shift;
  std::string method;
  std::string base_model;
  bool uses_image = true;
  std::string answer_class;  // "closed" or "open".
  std::vector<SeedRobustness> seeds;
  double p_iid = 0.0;  // Means across seeds.
  double p_ood = 0.0;
  double rr = 0.0;     // Mean of per-seed RR.
  std::optional<double> p_iid_std;
  std::optional<double> p_ood_std;
  std::optional<double> rr_std;
};

// Groups scores by (dataset, shift, method, base_model, uses_image, coarse
// answer class) and seed. Records whose split equals `iid_split` form P_I;
// every other split except "validate" forms P_O. Judge failures are skipped.
// Seeds lacking either side are left out of the cell; cells with no complete
// seed are dropped. A seed with P_I = 0 has no RR; it is left out and, when
// `undefined` is given, listed there as "dataset/shift/method/base_model/
// image|no_image/class/seed".
std::vector<RobustnessCell> ComputeCells(
    const std::vector<metrics::ScoreRecord>& scores,
    const std::string& iid_split = "test_iid",
    std::vector<std::string>* undefined = nullptr);

struct RankEntry {
  std::string dataset;
  std::string shift;
  std::string base_model;
  bool uses_image = true;
  std::string answer_class;
  std::string method;
  double rr = 0.0;
  int rank = 0;
};

// Dense ranks by descending RR within each (dataset, shift, base_model,
// uses_image, answer_class) group; equal RR values share the better rank.
// Groups with a single method are skipped.
std::vector<RankEntry> RankMethods(const std::vector<RobustnessCell>& cells);

// method -> rank -> count.
std::map<std::string, std::map<int, int>> RankDistribution(
    const std::vector<RankEntry>& ranks);

struct VarianceRow {
  std::string dataset;
  std::string base_model;
  bool uses_image = true;
  std::string answer_class;
  size_t shifts = 0;
  size_t methods = 0;
  // Sample std of the per-shift means (methods averaged) and of the
  // per-method means (shifts averaged). nullopt with fewer than two levels.
  std::optional<double> std_between_shifts;
  std::optional<double> std_between_methods;
};

// One row per (dataset, base_model, uses_image, answer_class). The
// shift x method grid must be complete (Error(kInsufficientData) otherwise).
std::vector<VarianceRow> VarianceDecomposition(
    const std::vector<RobustnessCell>& cells);

struct WtlRow {
  std::string answer_class;  // "closed" or "open".
  std::string split;
  size_t win = 0;
  size_t tie = 0;
  size_t lose = 0;
  size_t skipped = 0;  // Pairs where either side failed judging.
};

// Per-sample comparison of A against B (closed: correct beats incorrect;
// open: higher score wins). Both lists must cover the same (sample_id, split)
// set exactly once each; Error(kMisaligned) otherwise.
std::vector<WtlRow> PairwiseWtl(const std::vector<metrics::ScoreRecord>& a,
                                const std::vector<metrics::ScoreRecord>& b);

Json CellsToJson(const std::vector<RobustnessCell>& cells);
Json RanksToJson(const std::vector<RankEntry>& ranks);
Json VarianceToJson(const std::vector<VarianceRow>& rows);
Json WtlToJson(const std::vector<WtlRow>& rows);

}  // namespace vqaeval::stats

#endif  // VQAEVAL_STATS_ROBUSTNESS_H_
