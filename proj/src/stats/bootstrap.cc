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

#include "vqaeval/stats/bootstrap.h"

#include "vqaeval/common/error.h"
#include "vqaeval/common/rng.h"

namespace vqaeval::stats {
namespace {

double ResampleMean(const std::vector<double>& values, Rng& rng) {
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    sum += values[rng.UniformIndex(values.size())];
  }
  return sum / values.size();
}

// RR of one resample drawn from `rng`, redrawing while P_I is zero.
double ResampleRr(const std::vector<double>& iid,
                  const std::vector<double>& ood, Rng& rng,
                  size_t max_redraws, size_t& redraws) {
  for (size_t attempt = 0; attempt <= max_redraws; ++attempt) {
    const double p_iid = ResampleMean(iid, rng);
    const double p_ood = ResampleMean(ood, rng);
    if (p_iid > 0.0) return p_ood / p_iid;
    ++redraws;
  }
  throw Error(ErrorCode::kRetryExhausted,
              "bootstrap resample kept producing zero i.i.d. performance");
}

void CheckInputs(const std::vector<double>& iid,
                 const std::vector<double>& ood) {
  if (iid.empty() || ood.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "bootstrap needs non-empty i.i.d. and OoD score sets");
  }
  for (const std::vector<double>* values : {&iid, &ood}) {
    for (double v : *values) {
      if (v < 0.0) {
        throw Error(ErrorCode::kDomain, "bootstrap scores must be >= 0");
      }
    }
  }
}

}  // namespace

BootstrapResult BootstrapRr(const std::vector<double>& iid,
                            const std::vector<double>& ood,
                            size_t n_resamples, uint64_t seed,
                            size_t max_redraws) {
  BootstrapResult result;
  if (n_resamples == 0) return result;
  CheckInputs(iid, ood);
  result.rr.reserve(n_resamples);
  for (size_t k = 0; k < n_resamples; ++k) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(k)));
    result.rr.push_back(ResampleRr(iid, ood, rng, max_redraws, result.redraws));
  }
  return result;
}

BootstrapResult BootstrapCellRr(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>&
        per_seed,
    size_t n_resamples, uint64_t seed, size_t max_redraws) {
  BootstrapResult result;
  if (n_resamples == 0) return result;
  if (per_seed.empty()) {
    throw Error(ErrorCode::kInsufficientData, "bootstrap cell without seeds");
  }
  for (const auto& [iid, ood] : per_seed) CheckInputs(iid, ood);
  result.rr.reserve(n_resamples);
  for (size_t k = 0; k < n_resamples; ++k) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(k)));
    double sum = 0.0;
    for (const auto& [iid, ood] : per_seed) {
      sum += ResampleRr(iid, ood, rng, max_redraws, result.redraws);
    }
    result.rr.push_back(sum / per_seed.size());
  }
  return result;
}

}  // namespace vqaeval::stats
