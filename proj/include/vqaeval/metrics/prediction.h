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

#ifndef VQAEVAL_METRICS_PREDICTION_H_
#define VQAEVAL_METRICS_PREDICTION_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/common/io.h"

namespace vqaeval::metrics {

enum class Method {
  kNoFt,
  kFullFt,
  kPromptTuning,
  kLora,
  kIa3,
  kMostFrequent,
  kRandom,
  kExternal,
};

enum class BaseModel { kMedical, kGeneral, kNotApplicable };

std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
std::string_view BaseModelName(BaseModel base_model);
BaseModel ParseBaseModel(std::string_view name);

struct PredictionRecord {
  std::string sample_id;
  std::string model_id;
  Method method = Method::kExternal;
  BaseModel base_model = BaseModel::kNotApplicable;
  bool uses_image = true;
  std::optional<int> seed;
  std::string prediction;  // May be empty.

  friend bool operator==(const PredictionRecord&,
                         const PredictionRecord&) = default;
};

Json PredictionToJson(const PredictionRecord& record);
PredictionRecord PredictionFromJson(const Json& value);

// JSONL with one PredictionRecord per line. Malformed lines raise
// Error(kParse) naming the line.
std::vector<PredictionRecord> ReadPredictions(const std::filesystem::path& path);
void WritePredictions(const std::filesystem::path& path,
                      const std::vector<PredictionRecord>& records);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_PREDICTION_H_
