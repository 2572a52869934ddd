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

#include "vqaeval/metrics/score.h"

#include "vqaeval/common/error.h"

namespace vqaeval::metrics {

std::string_view JudgePathName(JudgePath path) {
  return path == JudgePath::kShortcut ? "shortcut" : "llm";
}

double ScoreRecord::Value() const {
  if (Failed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score '" + sample_id + "' failed evaluation");
  }
  if (dataset::IsClosed(answer_class)) return judge_correct.value() ? 1.0 : 0.0;
  return static_cast<double>(judge_score.value());
}

namespace {

template <typename T>
Json Optional(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

Json ScoreToJson(const ScoreRecord& r) {
  return Json{{"sample_id", r.sample_id},
              {"answer_class", dataset::AnswerClassName(r.answer_class)},
              {"dataset", r.context.dataset},
              {"shift", r.context.shift},
              {"split", r.context.split},
              {"model_id", r.context.model_id},
              {"method", MethodName(r.context.method)},
              {"base_model", BaseModelName(r.context.base_model)},
              {"uses_image", r.context.uses_image},
              {"seed", Optional(r.context.seed)},
              {"ground_truth", r.ground_truth},
              {"prediction", r.prediction},
              {"exact_match", r.exact_match},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"bleu", r.bleu},
              {"judge_score", Optional(r.judge_score)},
              {"judge_correct", Optional(r.judge_correct)},
              {"judge_path", JudgePathName(r.judge_path)},
              {"judge_raw", Optional(r.judge_raw)},
              {"judge_calls", r.judge_calls},
              {"evaluation_error", r.evaluation_error}};
}

ScoreRecord ScoreFromJson(const Json& v) {
  ScoreRecord r;
  try {
    r.sample_id = v.at("sample_id").get<std::string>();
    r.answer_class =
        dataset::ParseAnswerClass(v.at("answer_class").get<std::string>());
    r.context.dataset = v.value("dataset", std::string());
    r.context.shift = v.value("shift", std::string());
    r.context.split = v.value("split", std::string());
    r.context.model_id = v.value("model_id", std::string());
    r.context.method = ParseMethod(v.at("method").get<std::string>());
    r.context.base_model =
        ParseBaseModel(v.value("base_model", std::string("n/a")));
    r.context.uses_image = v.value("uses_image", true);
    if (!v.at("seed").is_null()) r.context.seed = v.at("seed").get<int>();
    r.ground_truth = v.at("ground_truth").get<std::string>();
    r.prediction = v.at("prediction").get<std::string>();
    r.exact_match = v.at("exact_match").get<bool>();
    r.precision = v.at("precision").get<double>();
    r.recall = v.at("recall").get<double>();
    r.f1 = v.at("f1").get<double>();
    r.bleu = v.at("bleu").get<double>();
    if (!v.at("judge_score").is_null()) {
      r.judge_score = v.at("judge_score").get<int>();
    }
    if (!v.at("judge_correct").is_null()) {
      r.judge_correct = v.at("judge_correct").get<bool>();
    }
    r.judge_path = v.at("judge_path").get<std::string>() == "llm"
                       ? JudgePath::kLlm
                       : JudgePath::kShortcut;
    if (!v.at("judge_raw").is_null()) {
      r.judge_raw = v.at("judge_raw").get<std::string>();
    }
    r.judge_calls = v.value("judge_calls", 0);
    r.evaluation_error = v.value("evaluation_error", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed score record: ") + e.what());
  }
  return r;
}

std::vector<ScoreRecord> ReadScores(const std::filesystem::path& path) {
  std::vector<ScoreRecord> records;
  for (const JsonlLine& line : ReadJsonl(path)) {
    if (!line.error.empty()) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(line.line_number) +
                                         ": " + line.error);
    }
    records.push_back(ScoreFromJson(line.value));
  }
  return records;
}

void WriteScores(const std::filesystem::path& path,
                 const std::vector<ScoreRecord>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const ScoreRecord& record : records) lines.push_back(ScoreToJson(record));
  WriteFileAtomic(path, DumpJsonl(lines));
}

}  // namespace vqaeval::metrics
