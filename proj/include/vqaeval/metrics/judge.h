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

#ifndef VQAEVAL_METRICS_JUDGE_H_
#define VQAEVAL_METRICS_JUDGE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/sample.h"
#include "vqaeval/metrics/prediction.h"
#include "vqaeval/metrics/prompts.h"
#include "vqaeval/metrics/score.h"

namespace vqaeval::metrics {

struct JudgeRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 32;
};

// Text-generation endpoint used as the judge. Implementations must be safe to
// call from several threads. Transport failures raise Error(kTransport).
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual std::string Complete(const JudgeRequest& request) = 0;
};

enum class ParserId {
  // "Score: N" / "Verdict: correct|incorrect", or the bare value alone.
  kLabelled,
  // Only the labelled forms.
  kStrict,
};

ParserId ParseParserId(std::string_view name);
std::string_view ParserName(ParserId id);

struct JudgeConfig {
  std::string mode = "mock";  // "mock" or "http".
  std::string endpoint;
  std::string model_name = "judge";
  std::string api_style = "native";  // "native" or "chat".
  double temperature = 0.0;
  int max_tokens = 32;
  int max_attempts = 3;
  int backoff_ms = 200;
  double backoff_multiplier = 2.0;
  int timeout_ms = 30000;
  int parallelism = 4;
  ParserId parser = ParserId::kLabelled;
};

// Throws Error(kValidation) for a nonzero temperature, max_attempts < 1,
// http mode without endpoint and similar.
void ValidateJudgeConfig(const JudgeConfig& config);
Json JudgeConfigToJson(const JudgeConfig& config);

// Integer 1..5 for open responses; anything else (including out-of-range
// integers) is nullopt.
std::optional<int> ParseOpenScore(std::string_view response, ParserId parser);
// true = correct, false = incorrect.
std::optional<bool> ParseClosedVerdict(std::string_view response,
                                       ParserId parser);

struct JudgeItem {
  const dataset::VqaSample* sample = nullptr;
  PredictionRecord prediction;
  ScoreContext context;
};

// Traditional metrics plus the hybrid judge: an exact match takes the
// shortcut (score 5 / correct) without calling `client`; otherwise the prompt
// is rendered and the client queried up to max_attempts times. Exhausted
// retries are recorded in ScoreRecord::evaluation_error.
ScoreRecord JudgeEvaluate(const JudgeItem& item, const JudgeConfig& config,
                          JudgeClient& client);

// Runs JudgeEvaluate with config.parallelism workers; output is ordered by
// (sample_id, model_id, seed) regardless of completion order.
std::vector<ScoreRecord> EvaluateBatch(const std::vector<JudgeItem>& items,
                                       const JudgeConfig& config,
                                       JudgeClient& client);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_JUDGE_H_
