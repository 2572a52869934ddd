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

#ifndef VQAEVAL_COMMON_RNG_H_
#define VQAEVAL_COMMON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace vqaeval {

// Deterministic random stream. The engine (mt19937_64) is fully specified by
// the standard; the distributions are implemented here rather than taken from
// <random> because the standard library distributions are allowed to differ
// between implementations, and golden files depend on exact draws.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform in [lo, hi]; returns lo when lo == hi.
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  size_t UniformIndex(size_t n);
  // Standard normal (Marsaglia polar method).
  double Normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

uint64_t SplitMix64(uint64_t x);
uint64_t Fnv1a64(std::string_view text);

// Independent child streams: order-independent per-item seeding.
uint64_t DeriveSeed(uint64_t base, std::string_view key);
uint64_t DeriveSeed(uint64_t base, uint64_t index);

}  // namespace vqaeval

#endif  // VQAEVAL_COMMON_RNG_H_
