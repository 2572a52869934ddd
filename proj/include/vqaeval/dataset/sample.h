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

#ifndef VQAEVAL_DATASET_SAMPLE_H_
#define VQAEVAL_DATASET_SAMPLE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/common/io.h"

namespace vqaeval::dataset {

enum class DatasetId { kSlake, kOvqa, kMimic, kFixture };
enum class AnswerClass { kOpen, kClosedBinary, kClosedMultilabel };
enum class BaseSplit { kTrain, kValidate, kTest };

std::string_view DatasetName(DatasetId id);
DatasetId ParseDatasetId(std::string_view name);
std::string_view AnswerClassName(AnswerClass answer_class);
AnswerClass ParseAnswerClass(std::string_view name);
bool IsClosed(AnswerClass answer_class);
std::string_view BaseSplitName(BaseSplit split);
BaseSplit ParseBaseSplit(std::string_view name);

// Sentinel for unknown or conflicting metadata.
inline constexpr std::string_view kNone = "none";

struct VqaSample {
  std::string sample_id;
  DatasetId dataset = DatasetId::kFixture;
  std::string image_ref;
  std::string question;
  std::string answer;
  AnswerClass answer_class = AnswerClass::kOpen;
  std::map<std::string, std::string> metadata;

  // Metadata value, or "none" when the key is absent.
  std::string Meta(std::string_view key) const;

  friend bool operator==(const VqaSample&, const VqaSample&) = default;
};

Json SampleToJson(const VqaSample& sample);
// Throws Error(kValidation) when a field is missing or violates an invariant.
VqaSample SampleFromJson(const Json& value);
// Checks the per-sample invariants (non-empty text, age format, class rule).
void ValidateSample(const VqaSample& sample);

std::optional<int> ParseAge(std::string_view text);

}  // namespace vqaeval::dataset

#endif  // VQAEVAL_DATASET_SAMPLE_H_
