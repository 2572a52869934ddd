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

#ifndef VQAEVAL_CORRUPTION_CORRUPTION_H_
#define VQAEVAL_CORRUPTION_CORRUPTION_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

#include "vqaeval/common/io.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/dataset/manifest.h"

namespace vqaeval::corruption {

enum class Severity { kLow, kMedium, kHigh };

std::string_view SeverityName(Severity severity);
Severity ParseSeverity(std::string_view name);

enum class Op { kBlur = 0, kNoise = 1, kBrightness = 2 };
inline constexpr size_t kNumOps = 3;
std::string_view OpName(Op op);

struct CorruptionConfig {
  Severity severity = Severity::kLow;
  int blur_kernel = 5;
  double noise_mean_lo = 0.0;
  double noise_mean_hi = 0.06;
  double brightness_alpha_lo = 1.1;
  double brightness_alpha_hi = 2.0;
  double per_corruption_probability = 0.5;
  uint64_t rng_seed = 0;
  // Ops that may be selected; disabled ops are never applied or forced.
  std::array<bool, kNumOps> enabled = {true, true, true};
};

// Settings of the three severity levels.
CorruptionConfig ConfigForSeverity(Severity severity, uint64_t seed);
void ValidateConfig(const CorruptionConfig& config);

// Gaussian sigma for a square kernel of size k.
double BlurSigma(int kernel);

struct AppliedOp {
  Op op = Op::kBlur;
  std::map<std::string, double> params;
};

struct CorruptionResult {
  cv::Mat image;
  std::vector<AppliedOp> applied_ops;
  // Independent Bernoulli selections before any forcing.
  std::array<bool, kNumOps> selected = {false, false, false};
  // True when no op was selected and one was forced.
  bool rescued = false;
};

// Applies blur -> noise -> brightness, each with the configured probability
// and at least one per image. Accepts 8- or 16-bit images with 1 or 3
// channels; noise means are fractions of the full intensity scale and the
// noise standard deviation equals the drawn mean. Throws
// Error(kInvalidArgument) for an empty image or one smaller than the kernel.
CorruptionResult CorruptImage(const cv::Mat& image,
                              const CorruptionConfig& config, Rng& rng);

Json AppliedOpsToJson(const CorruptionResult& result);

struct CorruptionBatch {
  dataset::DatasetManifest manifest;
  std::vector<Json> log;  // One entry per corrupted sample.
  std::vector<Json> errors;  // One entry per unreadable or failed image.
};

// Corrupts the image of every sample. Source images resolve against
// `image_root`; outputs are written to `out_dir`/images and referenced
// relative to `out_dir`. Sample ids become "<id>#corrupt-<severity>".
// Each sample draws from DeriveSeed(config.rng_seed, sample_id), so results
// do not depend on order or parallelism.
CorruptionBatch BuildCorruptionOod(const std::vector<dataset::VqaSample>& samples,
                                   const std::filesystem::path& image_root,
                                   const std::filesystem::path& out_dir,
                                   const CorruptionConfig& config,
                                   int parallelism = 1);

// Corrupts every PNG in `in_dir` (sorted by name, sample id = file stem)
// into `out_dir` and writes the applied-ops log as JSONL. Returns the number
// of failures.
size_t CorruptDirectory(const std::filesystem::path& in_dir,
                        const std::filesystem::path& out_dir,
                        const std::filesystem::path& log_path,
                        const CorruptionConfig& config);

std::string CorruptedSampleId(const std::string& sample_id, Severity severity);

}  // namespace vqaeval::corruption

#endif  // VQAEVAL_CORRUPTION_CORRUPTION_H_
