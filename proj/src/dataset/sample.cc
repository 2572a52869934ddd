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

#include "vqaeval/dataset/sample.h"

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"
#include "vqaeval/metrics/text_metrics.h"

namespace vqaeval::dataset {

std::string_view DatasetName(DatasetId id) {
  switch (id) {
    case DatasetId::kSlake: return "slake";
    case DatasetId::kOvqa: return "ovqa";
    case DatasetId::kMimic: return "mimic";
    case DatasetId::kFixture: return "fixture";
  }
  return "fixture";
}

DatasetId ParseDatasetId(std::string_view name) {
  if (name == "slake") return DatasetId::kSlake;
  if (name == "ovqa") return DatasetId::kOvqa;
  if (name == "mimic") return DatasetId::kMimic;
  if (name == "fixture") return DatasetId::kFixture;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown dataset '" + std::string(name) + "'");
}

std::string_view AnswerClassName(AnswerClass answer_class) {
  switch (answer_class) {
    case AnswerClass::kOpen: return "open";
    case AnswerClass::kClosedBinary: return "closed_binary";
    case AnswerClass::kClosedMultilabel: return "closed_multilabel";
  }
  return "open";
}

AnswerClass ParseAnswerClass(std::string_view name) {
  if (name == "open") return AnswerClass::kOpen;
  if (name == "closed_binary") return AnswerClass::kClosedBinary;
  if (name == "closed_multilabel") return AnswerClass::kClosedMultilabel;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown answer_class '" + std::string(name) + "'");
}

bool IsClosed(AnswerClass answer_class) {
  return answer_class != AnswerClass::kOpen;
}

std::string_view BaseSplitName(BaseSplit split) {
  switch (split) {
    case BaseSplit::kTrain: return "train";
    case BaseSplit::kValidate: return "validate";
    case BaseSplit::kTest: return "test";
  }
  return "train";
}

BaseSplit ParseBaseSplit(std::string_view name) {
  if (name == "train") return BaseSplit::kTrain;
  if (name == "validate") return BaseSplit::kValidate;
  if (name == "test") return BaseSplit::kTest;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown base split '" + std::string(name) + "'");
}

std::string VqaSample::Meta(std::string_view key) const {
  auto it = metadata.find(std::string(key));
  return it == metadata.end() ? std::string(kNone) : it->second;
}

std::optional<int> ParseAge(std::string_view text) {
  const std::optional<long long> value = ParseInteger(text);
  if (!value || *value < 0 || *value > 200) return std::nullopt;
  return static_cast<int>(*value);
}

void ValidateSample(const VqaSample& sample) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kValidation,
                "sample '" + sample.sample_id + "': " + what);
  };
  if (sample.sample_id.empty()) fail("empty sample_id");
  if (metrics::NormalizeAnswer(sample.question).empty()) fail("empty question");
  if (metrics::NormalizeAnswer(sample.answer).empty()) fail("empty answer");
  if (sample.answer_class == AnswerClass::kClosedMultilabel &&
      sample.dataset != DatasetId::kMimic) {
    fail("closed_multilabel is reserved for mimic samples");
  }
  if (sample.dataset == DatasetId::kMimic) {
    const std::string type = sample.Meta("semantic_type");
    if (type == "verify" && sample.answer_class != AnswerClass::kClosedBinary) {
      fail("verify questions must be closed_binary");
    }
    if (sample.answer_class == AnswerClass::kClosedMultilabel &&
        type != "choose") {
      fail("closed_multilabel requires semantic_type choose");
    }
  }
  auto age = sample.metadata.find("age");
  if (age != sample.metadata.end() && !ParseAge(age->second)) {
    fail("age '" + age->second + "' is not a non-negative integer");
  }
}

Json SampleToJson(const VqaSample& sample) {
  Json metadata = Json::object();
  for (const auto& [key, value] : sample.metadata) metadata[key] = value;
  return Json{{"sample_id", sample.sample_id},
              {"dataset", DatasetName(sample.dataset)},
              {"image_ref", sample.image_ref},
              {"question", sample.question},
              {"answer", sample.answer},
              {"answer_class", AnswerClassName(sample.answer_class)},
              {"metadata", metadata}};
}

VqaSample SampleFromJson(const Json& value) {
  if (!value.is_object()) {
    throw Error(ErrorCode::kValidation, "sample record is not an object");
  }
  auto text = [&](const char* key) -> std::string {
    auto it = value.find(key);
    if (it == value.end() || !it->is_string()) {
      throw Error(ErrorCode::kValidation,
                  std::string("missing string field '") + key + "'");
    }
    return it->get<std::string>();
  };
  VqaSample sample;
  sample.sample_id = text("sample_id");
  try {
    sample.dataset = ParseDatasetId(text("dataset"));
    sample.answer_class = ParseAnswerClass(text("answer_class"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidation, e.what());
  }
  sample.image_ref = text("image_ref");
  sample.question = text("question");
  sample.answer = text("answer");
  if (auto it = value.find("metadata"); it != value.end()) {
    if (!it->is_object()) {
      throw Error(ErrorCode::kValidation, "metadata must be an object");
    }
    for (const auto& [key, meta] : it->items()) {
      if (meta.is_string()) {
        sample.metadata[key] = meta.get<std::string>();
      } else if (meta.is_number_integer()) {
        sample.metadata[key] = std::to_string(meta.get<long long>());
      } else {
        throw Error(ErrorCode::kValidation,
                    "metadata '" + key + "' must be a string or integer");
      }
    }
  }
  ValidateSample(sample);
  return sample;
}

}  // namespace vqaeval::dataset
