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

#include <opencv2/imgcodecs.hpp>

#include <cmath>

#include "test_util.h"
#include "vqaeval/corruption/corruption.h"
#include "vqaeval/dataset/ingest.h"

namespace vqaeval::corruption {
namespace {

using ::vqaeval::testing::DataPath;
using ::vqaeval::testing::TempDir;

cv::Mat Gradient(int rows, int cols, int type) {
  cv::Mat image(rows, cols, type);
  const int channels = image.channels();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols * channels; ++c) {
      const int v = (r * 13 + c * 7) % 251;
      if (image.depth() == CV_8U) {
        image.ptr<uint8_t>(r)[c] = static_cast<uint8_t>(v);
      } else {
        image.ptr<uint16_t>(r)[c] = static_cast<uint16_t>(v * 257);
      }
    }
  }
  return image;
}

CorruptionConfig OnlyOp(Op op) {
  CorruptionConfig config = ConfigForSeverity(Severity::kLow, 1);
  config.enabled = {false, false, false};
  config.enabled[static_cast<size_t>(op)] = true;
  return config;
}

bool SameImage(const cv::Mat& a, const cv::Mat& b) {
  return a.size() == b.size() && a.type() == b.type() &&
         cv::norm(a, b, cv::NORM_INF) == 0.0;
}

TEST(SeverityTest, ParameterTable) {
  const CorruptionConfig low = ConfigForSeverity(Severity::kLow, 0);
  EXPECT_EQ(low.blur_kernel, 5);
  EXPECT_EQ(low.noise_mean_hi, 0.06);
  EXPECT_EQ(low.brightness_alpha_lo, 1.1);
  const CorruptionConfig medium = ConfigForSeverity(Severity::kMedium, 0);
  EXPECT_EQ(medium.blur_kernel, 7);
  EXPECT_EQ(medium.noise_mean_lo, 0.09);
  EXPECT_EQ(medium.brightness_alpha_hi, 4.0);
  const CorruptionConfig high = ConfigForSeverity(Severity::kHigh, 0);
  EXPECT_EQ(high.blur_kernel, 11);
  EXPECT_EQ(high.noise_mean_hi, 0.25);
  EXPECT_EQ(high.brightness_alpha_lo, 4.5);
  EXPECT_EQ(ParseSeverity("medium"), Severity::kMedium);
  EXPECT_ERROR_CODE(ParseSeverity("extreme"), ErrorCode::kInvalidArgument);
  EXPECT_DOUBLE_EQ(BlurSigma(5), 1.1);
}

TEST(ConfigTest, Validation) {
  CorruptionConfig config = ConfigForSeverity(Severity::kLow, 0);
  config.blur_kernel = 4;
  EXPECT_ERROR_CODE(ValidateConfig(config), ErrorCode::kValidation);
  config = ConfigForSeverity(Severity::kLow, 0);
  config.per_corruption_probability = 0.0;
  EXPECT_ERROR_CODE(ValidateConfig(config), ErrorCode::kValidation);
  config = ConfigForSeverity(Severity::kLow, 0);
  config.enabled = {false, false, false};
  EXPECT_ERROR_CODE(ValidateConfig(config), ErrorCode::kValidation);
}

TEST(CorruptImageTest, RejectsBadImages) {
  Rng rng(1);
  const CorruptionConfig config = ConfigForSeverity(Severity::kHigh, 0);
  EXPECT_ERROR_CODE(CorruptImage(cv::Mat(), config, rng),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(CorruptImage(cv::Mat(8, 8, CV_8UC1, cv::Scalar(0)), config, rng),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(CorruptImage(cv::Mat(16, 16, CV_32FC1, cv::Scalar(0)),
                                 config, rng),
                    ErrorCode::kInvalidArgument);
}

TEST(CorruptImageTest, DeterministicForSeed) {
  const cv::Mat image = Gradient(24, 20, CV_8UC3);
  const CorruptionConfig config = ConfigForSeverity(Severity::kMedium, 0);
  Rng a(42);
  Rng b(42);
  const CorruptionResult ra = CorruptImage(image, config, a);
  const CorruptionResult rb = CorruptImage(image, config, b);
  EXPECT_TRUE(SameImage(ra.image, rb.image));
  EXPECT_EQ(AppliedOpsToJson(ra), AppliedOpsToJson(rb));
  EXPECT_EQ(ra.image.type(), image.type());
}

TEST(CorruptImageTest, AtLeastOneOpAndSelectionFrequency) {
  const cv::Mat image = Gradient(12, 12, CV_8UC1);
  const CorruptionConfig config = ConfigForSeverity(Severity::kLow, 0);
  constexpr int kTrials = 4000;
  std::array<int, kNumOps> selected{};
  std::array<int, kNumOps> applied{};
  int rescued = 0;
  Rng rng(2024);
  for (int t = 0; t < kTrials; ++t) {
    const CorruptionResult r = CorruptImage(image, config, rng);
    ASSERT_FALSE(r.applied_ops.empty());
    rescued += r.rescued;
    for (size_t i = 0; i < kNumOps; ++i) selected[i] += r.selected[i];
    for (const AppliedOp& op : r.applied_ops) {
      ++applied[static_cast<size_t>(op.op)];
    }
    // Order is blur, noise, brightness.
    for (size_t i = 1; i < r.applied_ops.size(); ++i) {
      EXPECT_LT(r.applied_ops[i - 1].op, r.applied_ops[i].op);
    }
  }
  // Binomial standard error at n = 4000 is about 0.008; allow 4 sigma.
  for (size_t i = 0; i < kNumOps; ++i) {
    EXPECT_NEAR(selected[i] / double(kTrials), 0.5, 0.032);
    EXPECT_NEAR(applied[i] / double(kTrials), 0.5 + 0.125 / 3, 0.032);
  }
  EXPECT_NEAR(rescued / double(kTrials), 0.125, 0.021);
}

TEST(CorruptImageTest, BrightnessAlphaOneIsIdentity) {
  CorruptionConfig config = OnlyOp(Op::kBrightness);
  config.brightness_alpha_lo = 1.0;
  config.brightness_alpha_hi = 1.0;
  for (int type : {CV_8UC1, CV_8UC3, CV_16UC1}) {
    const cv::Mat image = Gradient(16, 16, type);
    Rng rng(5);
    const CorruptionResult r = CorruptImage(image, config, rng);
    EXPECT_TRUE(SameImage(r.image, image)) << type;
    ASSERT_EQ(r.applied_ops.size(), 1u);
    EXPECT_EQ(r.applied_ops[0].params.at("alpha"), 1.0);
  }
}

TEST(CorruptImageTest, BrightnessScalesAndSaturates) {
  CorruptionConfig config = OnlyOp(Op::kBrightness);
  config.brightness_alpha_lo = 2.0;
  config.brightness_alpha_hi = 2.0;
  const cv::Mat image = Gradient(16, 16, CV_8UC1);
  Rng rng(5);
  const cv::Mat out = CorruptImage(image, config, rng).image;
  for (int r = 0; r < image.rows; ++r) {
    for (int c = 0; c < image.cols; ++c) {
      EXPECT_EQ(out.at<uint8_t>(r, c),
                std::min(255, 2 * image.at<uint8_t>(r, c)));
    }
  }
}

// Direct 2-D convolution with reflect-101 borders, independent of OpenCV.
double ReferenceBlurAt(const cv::Mat& image, int row, int col, int k) {
  const double sigma = BlurSigma(k);
  const int half = k / 2;
  std::vector<double> w(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    w[i] = std::exp(-((i - half) * (i - half)) / (2 * sigma * sigma));
    sum += w[i];
  }
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
  };
  double value = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const int y = reflect(row + dy, image.rows);
      const int x = reflect(col + dx, image.cols);
      value += w[dy + half] * w[dx + half] / (sum * sum) *
               image.at<uint8_t>(y, x);
    }
  }
  return value;
}

TEST(CorruptImageTest, BlurMatchesDirectConvolution) {
  const cv::Mat image = Gradient(20, 24, CV_8UC1);
  for (int kernel : {5, 7, 11}) {
    CorruptionConfig config = OnlyOp(Op::kBlur);
    config.blur_kernel = kernel;
    Rng rng(9);
    const CorruptionResult r = CorruptImage(image, config, rng);
    ASSERT_EQ(r.applied_ops.size(), 1u);
    EXPECT_EQ(r.applied_ops[0].params.at("kernel"), kernel);
    for (int y = 0; y < image.rows; ++y) {
      for (int x = 0; x < image.cols; ++x) {
        EXPECT_NEAR(r.image.at<uint8_t>(y, x),
                    ReferenceBlurAt(image, y, x, kernel), 0.51)
            << "k=" << kernel << " at " << y << "," << x;
      }
    }
  }
}

TEST(CorruptImageTest, NoiseMomentsFollowDrawnMean) {
  CorruptionConfig config = OnlyOp(Op::kNoise);
  config.noise_mean_lo = 0.1;
  config.noise_mean_hi = 0.1;
  const cv::Mat image(200, 200, CV_16UC1, cv::Scalar(20000));
  Rng rng(77);
  const CorruptionResult r = CorruptImage(image, config, rng);
  ASSERT_EQ(r.applied_ops.size(), 1u);
  EXPECT_EQ(r.applied_ops[0].params.at("std"), 0.1);
  cv::Mat diff;
  r.image.convertTo(diff, CV_64F);
  diff -= 20000.0;
  cv::Scalar mean, stddev;
  cv::meanStdDev(diff, mean, stddev);
  EXPECT_NEAR(mean[0], 0.1 * 65535, 0.01 * 6553.5);
  EXPECT_NEAR(stddev[0], 0.1 * 65535, 0.02 * 6553.5);
}

TEST(BuildCorruptionOodTest, FixtureBatchIsOrderAndThreadIndependent) {
  const dataset::DatasetManifest manifest = dataset::LoadDataset(
      dataset::Adapter::kNative, DataPath("fixture/corpus"));
  const CorruptionConfig config = ConfigForSeverity(Severity::kLow, 7);
  TempDir serial_dir;
  TempDir parallel_dir;
  const CorruptionBatch serial = BuildCorruptionOod(
      manifest.samples, DataPath("fixture/corpus"), serial_dir.path(), config, 1);
  std::vector<dataset::VqaSample> reversed(manifest.samples.rbegin(),
                                           manifest.samples.rend());
  const CorruptionBatch parallel = BuildCorruptionOod(
      reversed, DataPath("fixture/corpus"), parallel_dir.path(), config, 4);
  ASSERT_EQ(serial.log.size(), 12u);
  EXPECT_TRUE(serial.errors.empty());
  for (size_t i = 0; i < serial.log.size(); ++i) {
    EXPECT_EQ(serial.log[i], parallel.log[serial.log.size() - 1 - i]);
    const std::string ref = serial.log[i]["output_image"];
    EXPECT_EQ(ReadFile(serial_dir / ref), ReadFile(parallel_dir / ref));
  }
  EXPECT_EQ(serial.manifest.samples[0].sample_id, "f01#corrupt-low");
  EXPECT_EQ(serial.manifest.samples[0].question,
            manifest.samples[0].question);
  EXPECT_EQ(serial.manifest.base_split.at("f01#corrupt-low"),
            dataset::BaseSplit::kTest);
  const cv::Mat original = cv::imread(
      DataPath("fixture/corpus/images/f04.png").string(), cv::IMREAD_UNCHANGED);
  const cv::Mat corrupted = cv::imread(
      (serial_dir / "images/f04.png").string(), cv::IMREAD_UNCHANGED);
  EXPECT_EQ(original.size(), corrupted.size());
  EXPECT_EQ(original.type(), corrupted.type());
}

TEST(BuildCorruptionOodTest, UnreadableImagesAreReported) {
  dataset::VqaSample sample;
  sample.sample_id = "a/b";
  sample.image_ref = "missing.png";
  TempDir dir;
  const CorruptionBatch batch = BuildCorruptionOod(
      {sample}, dir.path(), dir.path(), ConfigForSeverity(Severity::kLow, 1));
  EXPECT_TRUE(batch.manifest.samples.empty());
  ASSERT_EQ(batch.errors.size(), 1u);
  EXPECT_EQ(batch.errors[0]["sample_id"], "a/b");
  EXPECT_EQ(batch.manifest.load_report.dropped, 1u);
}

TEST(CorruptDirectoryTest, WritesImagesAndLog) {
  TempDir in;
  TempDir out;
  cv::imwrite((in / "b.png").string(), Gradient(16, 16, CV_8UC3));
  cv::imwrite((in / "a.png").string(), Gradient(16, 16, CV_8UC1));
  WriteFileAtomic(in / "c.png", "not a png");
  const size_t failures = CorruptDirectory(
      in.path(), out / "imgs", out / "log.jsonl",
      ConfigForSeverity(Severity::kHigh, 3));
  EXPECT_EQ(failures, 1u);
  const std::vector<JsonlLine> log = ReadJsonl(out / "log.jsonl");
  ASSERT_EQ(log.size(), 3u);
  EXPECT_EQ(log[0].value["sample_id"], "a");
  EXPECT_EQ(log[1].value["sample_id"], "b");
  EXPECT_TRUE(log[2].value.contains("error"));
  EXPECT_TRUE(std::filesystem::exists(out / "imgs/a.png"));
}

}  // namespace
}  // namespace vqaeval::corruption
