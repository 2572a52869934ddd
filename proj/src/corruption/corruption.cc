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

#include "vqaeval/corruption/corruption.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "vqaeval/common/error.h"

namespace vqaeval::corruption {
namespace fs = std::filesystem;

std::string_view SeverityName(Severity severity) {
  switch (severity) {
    case Severity::kLow: return "low";
    case Severity::kMedium: return "medium";
    case Severity::kHigh: return "high";
  }
  return "low";
}

Severity ParseSeverity(std::string_view name) {
  if (name == "low") return Severity::kLow;
  if (name == "medium") return Severity::kMedium;
  if (name == "high") return Severity::kHigh;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown severity '" + std::string(name) + "'");
}

std::string_view OpName(Op op) {
  switch (op) {
    case Op::kBlur: return "blur";
    case Op::kNoise: return "gaussian_noise";
    case Op::kBrightness: return "brightness";
  }
  return "blur";
}

CorruptionConfig ConfigForSeverity(Severity severity, uint64_t seed) {
  CorruptionConfig config;
  config.severity = severity;
  config.rng_seed = seed;
  switch (severity) {
    case Severity::kLow:
      config.blur_kernel = 5;
      config.noise_mean_lo = 0.0;
      config.noise_mean_hi = 0.06;
      config.brightness_alpha_lo = 1.1;
      config.brightness_alpha_hi = 2.0;
      break;
    case Severity::kMedium:
      config.blur_kernel = 7;
      config.noise_mean_lo = 0.09;
      config.noise_mean_hi = 0.15;
      config.brightness_alpha_lo = 2.5;
      config.brightness_alpha_hi = 4.0;
      break;
    case Severity::kHigh:
      config.blur_kernel = 11;
      config.noise_mean_lo = 0.18;
      config.noise_mean_hi = 0.25;
      config.brightness_alpha_lo = 4.5;
      config.brightness_alpha_hi = 6.0;
      break;
  }
  return config;
}

void ValidateConfig(const CorruptionConfig& config) {
  if (config.blur_kernel < 3 || config.blur_kernel % 2 == 0) {
    throw Error(ErrorCode::kValidation, "blur kernel must be odd and >= 3");
  }
  if (config.noise_mean_lo > config.noise_mean_hi ||
      config.brightness_alpha_lo > config.brightness_alpha_hi) {
    throw Error(ErrorCode::kValidation, "corruption range with lo > hi");
  }
  if (config.noise_mean_lo < 0.0 || config.brightness_alpha_lo < 0.0) {
    throw Error(ErrorCode::kValidation, "negative corruption parameter");
  }
  if (!(config.per_corruption_probability > 0.0 &&
        config.per_corruption_probability <= 1.0)) {
    throw Error(ErrorCode::kValidation,
                "per-corruption probability must be in (0, 1]");
  }
  if (std::none_of(config.enabled.begin(), config.enabled.end(),
                   [](bool b) { return b; })) {
    throw Error(ErrorCode::kValidation, "no corruption enabled");
  }
}

double BlurSigma(int kernel) {
  return 0.3 * ((kernel - 1) * 0.5 - 1.0) + 0.8;
}

CorruptionResult CorruptImage(const cv::Mat& image,
                              const CorruptionConfig& config, Rng& rng) {
  ValidateConfig(config);
  if (image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty image");
  }
  if (image.depth() != CV_8U && image.depth() != CV_16U) {
    throw Error(ErrorCode::kInvalidArgument, "image must be 8- or 16-bit");
  }
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "image must have 1 or 3 channels");
  }
  if (image.rows < config.blur_kernel || image.cols < config.blur_kernel) {
    throw Error(ErrorCode::kInvalidArgument,
                "image " + std::to_string(image.cols) + "x" +
                    std::to_string(image.rows) + " is smaller than the " +
                    std::to_string(config.blur_kernel) + "px blur kernel");
  }
  const double full_scale = image.depth() == CV_8U ? 255.0 : 65535.0;

  CorruptionResult result;
  std::vector<size_t> enabled;
  for (size_t i = 0; i < kNumOps; ++i) {
    // Always draw so the stream layout does not depend on the enabled mask.
    const bool hit = rng.Uniform() < config.per_corruption_probability;
    result.selected[i] = config.enabled[i] && hit;
    if (config.enabled[i]) enabled.push_back(i);
  }
  std::array<bool, kNumOps> apply = result.selected;
  if (std::none_of(apply.begin(), apply.end(), [](bool b) { return b; })) {
    apply[enabled[rng.UniformIndex(enabled.size())]] = true;
    result.rescued = true;
  }

  cv::Mat work;
  image.convertTo(work, CV_MAKETYPE(CV_32F, image.channels()));
  if (apply[static_cast<size_t>(Op::kBlur)]) {
    const double sigma = BlurSigma(config.blur_kernel);
    cv::Mat blurred;
    cv::GaussianBlur(work, blurred,
                     cv::Size(config.blur_kernel, config.blur_kernel), sigma,
                     sigma, cv::BORDER_REFLECT_101);
    work = blurred;
    result.applied_ops.push_back(
        {Op::kBlur,
         {{"kernel", static_cast<double>(config.blur_kernel)},
          {"sigma", sigma}}});
  }
  if (apply[static_cast<size_t>(Op::kNoise)]) {
    const double mean = rng.Uniform(config.noise_mean_lo, config.noise_mean_hi);
    const double std_dev = mean;
    const int values_per_row = work.cols * work.channels();
    for (int r = 0; r < work.rows; ++r) {
      float* row = work.ptr<float>(r);
      for (int c = 0; c < values_per_row; ++c) {
        const double noise = (mean + std_dev * rng.Normal()) * full_scale;
        row[c] = static_cast<float>(row[c] + noise);
      }
    }
    result.applied_ops.push_back(
        {Op::kNoise, {{"mean", mean}, {"std", std_dev}}});
  }
  if (apply[static_cast<size_t>(Op::kBrightness)]) {
    const double alpha =
        rng.Uniform(config.brightness_alpha_lo, config.brightness_alpha_hi);
    work *= alpha;
    result.applied_ops.push_back({Op::kBrightness, {{"alpha", alpha}}});
  }
  cv::min(work, full_scale, work);
  cv::max(work, 0.0, work);
  work.convertTo(result.image, image.type());
  return result;
}

Json AppliedOpsToJson(const CorruptionResult& result) {
  Json ops = Json::array();
  for (const AppliedOp& op : result.applied_ops) {
    Json entry{{"op", OpName(op.op)}};
    for (const auto& [key, value] : op.params) entry[key] = value;
    ops.push_back(entry);
  }
  return ops;
}

std::string CorruptedSampleId(const std::string& sample_id, Severity severity) {
  return sample_id + "#corrupt-" + std::string(SeverityName(severity));
}

namespace {

std::string SafeFileStem(const std::string& id) {
  std::string stem = id;
  for (char& c : stem) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (stem != id) {
    char suffix[20];
    std::snprintf(suffix, sizeof(suffix), "-%08llx",
                  static_cast<unsigned long long>(Fnv1a64(id) & 0xffffffffu));
    stem += suffix;
  }
  return stem;
}

struct ItemOutcome {
  bool ok = false;
  Json log;
  Json error;
};

ItemOutcome CorruptOne(const std::string& sample_id, const fs::path& source,
                       const fs::path& target, const CorruptionConfig& config) {
  ItemOutcome outcome;
  const cv::Mat image = cv::imread(source.string(), cv::IMREAD_UNCHANGED);
  if (image.empty()) {
    outcome.error = {{"sample_id", sample_id},
                     {"source", source.generic_string()},
                     {"error", "unreadable image"}};
    return outcome;
  }
  try {
    const uint64_t seed = DeriveSeed(config.rng_seed, sample_id);
    Rng rng(seed);
    cv::Mat input = image;
    if (image.channels() == 4) cv::cvtColor(image, input, cv::COLOR_BGRA2BGR);
    const CorruptionResult result = CorruptImage(input, config, rng);
    fs::create_directories(target.parent_path());
    if (!cv::imwrite(target.string(), result.image)) {
      throw Error(ErrorCode::kIo, "cannot write " + target.string());
    }
    Json selected = Json::array();
    for (bool s : result.selected) selected.push_back(s);
    outcome.log = {{"sample_id", sample_id},
                   {"severity", SeverityName(config.severity)},
                   {"seed", seed},
                   {"selected", selected},
                   {"rescued", result.rescued},
                   {"ops", AppliedOpsToJson(result)}};
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.error = {{"sample_id", sample_id},
                     {"source", source.generic_string()},
                     {"error", e.what()}};
  }
  return outcome;
}

template <typename Fn>
void ParallelFor(size_t count, int parallelism, Fn fn) {
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(count, std::max(parallelism, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& thread : threads) thread.join();
}

}  // namespace

CorruptionBatch BuildCorruptionOod(
    const std::vector<dataset::VqaSample>& samples, const fs::path& image_root,
    const fs::path& out_dir, const CorruptionConfig& config, int parallelism) {
  ValidateConfig(config);
  std::vector<ItemOutcome> outcomes(samples.size());
  std::vector<std::string> refs(samples.size());
  ParallelFor(samples.size(), parallelism, [&](size_t i) {
    refs[i] = "images/" + SafeFileStem(samples[i].sample_id) + ".png";
    outcomes[i] = CorruptOne(samples[i].sample_id,
                             image_root / samples[i].image_ref,
                             out_dir / refs[i], config);
  });

  CorruptionBatch batch;
  batch.manifest.dataset =
      samples.empty() ? dataset::DatasetId::kFixture : samples.front().dataset;
  batch.manifest.load_report.raw = samples.size();
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!outcomes[i].ok) {
      batch.errors.push_back(outcomes[i].error);
      batch.manifest.load_report.Drop(
          {"", i, samples[i].sample_id, "corruption_failed",
           outcomes[i].error.value("error", "")});
      continue;
    }
    dataset::VqaSample corrupted = samples[i];
    corrupted.sample_id = CorruptedSampleId(samples[i].sample_id,
                                            config.severity);
    corrupted.image_ref = refs[i];
    batch.manifest.base_split[corrupted.sample_id] = dataset::BaseSplit::kTest;
    batch.manifest.samples.push_back(std::move(corrupted));
    ++batch.manifest.load_report.loaded;
    Json log = outcomes[i].log;
    log["output_image"] = refs[i];
    batch.log.push_back(std::move(log));
  }
  return batch;
}

size_t CorruptDirectory(const fs::path& in_dir, const fs::path& out_dir,
                        const fs::path& log_path,
                        const CorruptionConfig& config) {
  ValidateConfig(config);
  if (!fs::is_directory(in_dir)) {
    throw Error(ErrorCode::kNotFound, "input directory " + in_dir.string());
  }
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  std::vector<Json> lines;
  size_t failures = 0;
  for (const fs::path& input : inputs) {
    const std::string id = input.stem().string();
    ItemOutcome outcome =
        CorruptOne(id, input, out_dir / input.filename(), config);
    if (outcome.ok) {
      outcome.log["output_image"] = input.filename().string();
      lines.push_back(std::move(outcome.log));
    } else {
      ++failures;
      lines.push_back(std::move(outcome.error));
    }
  }
  WriteFileAtomic(log_path, DumpJsonl(lines));
  return failures;
}

}  // namespace vqaeval::corruption
