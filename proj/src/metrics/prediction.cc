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

#include "vqaeval/metrics/prediction.h"

#include "vqaeval/common/error.h"

namespace vqaeval::metrics {

namespace {

constexpr Method kMethods[] = {
    Method::kNoFt,         Method::kFullFt, Method::kPromptTuning,
    Method::kLora,         Method::kIa3,    Method::kMostFrequent,
    Method::kRandom,       Method::kExternal};

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kNoFt: return "no_ft";
    case Method::kFullFt: return "full_ft";
    case Method::kPromptTuning: return "prompt_tuning";
    case Method::kLora: return "lora";
    case Method::kIa3: return "ia3";
    case Method::kMostFrequent: return "most_frequent";
    case Method::kRandom: return "random";
    case Method::kExternal: return "external";
  }
  return "external";
}

Method ParseMethod(std::string_view name) {
  for (Method method : kMethods) {
    if (MethodName(method) == name) return method;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) + "'");
}

std::string_view BaseModelName(BaseModel base_model) {
  switch (base_model) {
    case BaseModel::kMedical: return "medical";
    case BaseModel::kGeneral: return "general";
    case BaseModel::kNotApplicable: return "n/a";
  }
  return "n/a";
}

BaseModel ParseBaseModel(std::string_view name) {
  if (name == "medical") return BaseModel::kMedical;
  if (name == "general") return BaseModel::kGeneral;
  if (name == "n/a" || name.empty()) return BaseModel::kNotApplicable;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown base model '" + std::string(name) + "'");
}

Json PredictionToJson(const PredictionRecord& record) {
  Json out{{"sample_id", record.sample_id},
           {"model_id", record.model_id},
           {"method", MethodName(record.method)},
           {"base_model", BaseModelName(record.base_model)},
           {"uses_image", record.uses_image}};
  out["seed"] = record.seed ? Json(*record.seed) : Json(nullptr);
  out["prediction"] = record.prediction;
  return out;
}

PredictionRecord PredictionFromJson(const Json& value) {
  PredictionRecord record;
  try {
    record.sample_id = value.at("sample_id").get<std::string>();
    record.model_id = value.value("model_id", std::string());
    record.method = ParseMethod(value.at("method").get<std::string>());
    record.base_model =
        ParseBaseModel(value.value("base_model", std::string("n/a")));
    record.uses_image = value.value("uses_image", true);
    if (auto it = value.find("seed"); it != value.end() && !it->is_null()) {
      record.seed = it->get<int>();
    }
    const Json& prediction = value.at("prediction");
    record.prediction =
        prediction.is_null() ? std::string() : prediction.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed prediction record: ") + e.what());
  }
  if (record.sample_id.empty()) {
    throw Error(ErrorCode::kParse, "prediction record with empty sample_id");
  }
  return record;
}

std::vector<PredictionRecord> ReadPredictions(
    const std::filesystem::path& path) {
  std::vector<PredictionRecord> records;
  for (const JsonlLine& line : ReadJsonl(path)) {
    const std::string where =
        path.string() + ":" + std::to_string(line.line_number);
    if (!line.error.empty()) {
      throw Error(ErrorCode::kParse, where + ": " + line.error);
    }
    try {
      records.push_back(PredictionFromJson(line.value));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return records;
}

void WritePredictions(const std::filesystem::path& path,
                      const std::vector<PredictionRecord>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const PredictionRecord& record : records) {
    lines.push_back(PredictionToJson(record));
  }
  WriteFileAtomic(path, DumpJsonl(lines));
}

}  // namespace vqaeval::metrics
