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

#ifndef VQAEVAL_STATS_BOOTSTRAP_H_
#define VQAEVAL_STATS_BOOTSTRAP_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace vqaeval::stats {

struct BootstrapResult {
  std::vector<double> rr;
  // Resamples discarded because their i.i.d. performance was zero.
  size_t redraws = 0;
};

// Resamples the i.i.d. and OoD per-sample scores independently with
// replacement (same sizes) and recomputes RR = mean(ood) / mean(iid).
// Resample k draws from DeriveSeed(seed, k); a resample with zero i.i.d.
// mean is redrawn from the same stream, at most `max_redraws` times per
// resample (Error(kRetryExhausted) beyond that). n_resamples = 0 gives an
// empty list.
BootstrapResult BootstrapRr(const std::vector<double>& iid,
                            const std::vector<double>& ood,
                            size_t n_resamples, uint64_t seed,
                            size_t max_redraws = 1000);

// Same, for a cell with several training seeds: each resample resamples every
// seed's i.i.d./OoD sets and reports the mean RR across seeds.
BootstrapResult BootstrapCellRr(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>&
        per_seed,
    size_t n_resamples, uint64_t seed, size_t max_redraws = 1000);

}  // namespace vqaeval::stats

#endif  // VQAEVAL_STATS_BOOTSTRAP_H_
