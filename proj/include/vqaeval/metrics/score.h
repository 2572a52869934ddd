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

#ifndef VQAEVAL_METRICS_SCORE_H_
#define VQAEVAL_METRICS_SCORE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/sample.h"
#include "vqaeval/metrics/prediction.h"

namespace vqaeval::metrics {

enum class JudgePath { kShortcut, kLlm };

std::string_view JudgePathName(JudgePath path);

// Where a score came from; used for grouping.
struct ScoreContext {
  std::string dataset;
  std::string shift;
  std::string split;  // test_iid, test_ood, corruption_<severity>, ...
  std::string model_id;
  Method method = Method::kExternal;
  BaseModel base_model = BaseModel::kNotApplicable;
  bool uses_image = true;
  std::optional<int> seed;

  friend bool operator==(const ScoreContext&, const ScoreContext&) = default;
};

struct ScoreRecord {
  std::string sample_id;
  dataset::AnswerClass answer_class = dataset::AnswerClass::kOpen;
  ScoreContext context;
  std::string ground_truth;
  std::string prediction;

  bool exact_match = false;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double bleu = 0.0;

  // Set on success: judge_score for open questions (1..5), judge_correct for
  // closed questions.
  std::optional<int> judge_score;
  std::optional<bool> judge_correct;
  JudgePath judge_path = JudgePath::kShortcut;
  std::optional<std::string> judge_raw;
  int judge_calls = 0;
  // Non-empty when judging failed; the record is then excluded from
  // aggregates and counted as a failure.
  std::string evaluation_error;

  bool Failed() const { return !evaluation_error.empty(); }
  // 1/0 for closed, 1..5 for open. Requires !Failed().
  double Value() const;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

Json ScoreToJson(const ScoreRecord& record);
ScoreRecord ScoreFromJson(const Json& value);
std::vector<ScoreRecord> ReadScores(const std::filesystem::path& path);
void WriteScores(const std::filesystem::path& path,
                 const std::vector<ScoreRecord>& records);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_SCORE_H_
