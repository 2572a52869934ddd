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

#include "vqaeval/metrics/judge.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"
#include "vqaeval/metrics/text_metrics.h"

namespace vqaeval::metrics {

ParserId ParseParserId(std::string_view name) {
  if (name == "labelled") return ParserId::kLabelled;
  if (name == "strict") return ParserId::kStrict;
  throw Error(ErrorCode::kValidation,
              "unknown judge parser '" + std::string(name) + "'");
}

std::string_view ParserName(ParserId id) {
  return id == ParserId::kStrict ? "strict" : "labelled";
}

void ValidateJudgeConfig(const JudgeConfig& config) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kValidation, "judge: " + what);
  };
  if (config.mode != "mock" && config.mode != "http") {
    fail("mode must be mock or http");
  }
  if (config.mode == "http" && config.endpoint.empty()) {
    fail("http mode requires an endpoint");
  }
  if (config.api_style != "native" && config.api_style != "chat") {
    fail("api_style must be native or chat");
  }
  if (config.temperature != 0.0) fail("temperature must be 0");
  if (config.max_tokens < 1) fail("max_tokens must be positive");
  if (config.max_attempts < 1) fail("max_attempts must be at least 1");
  if (config.backoff_ms < 0 || config.backoff_multiplier < 1.0) {
    fail("backoff must be non-negative and non-shrinking");
  }
  if (config.timeout_ms < 1) fail("timeout_ms must be positive");
  if (config.parallelism < 1) fail("parallelism must be at least 1");
}

Json JudgeConfigToJson(const JudgeConfig& config) {
  return Json{{"mode", config.mode},
              {"endpoint", config.endpoint},
              {"model_name", config.model_name},
              {"api_style", config.api_style},
              {"temperature", config.temperature},
              {"max_tokens", config.max_tokens},
              {"max_attempts", config.max_attempts},
              {"parser", ParserName(config.parser)}};
}

namespace {

// Text following the last case-insensitive occurrence of `label`, trimmed.
std::optional<std::string> AfterLabel(std::string_view response,
                                      std::string_view label) {
  const std::string lower = ToLowerAscii(response);
  const size_t pos = lower.rfind(label);
  if (pos == std::string::npos) return std::nullopt;
  std::string rest(response.substr(pos + label.size()));
  const size_t newline = rest.find('\n');
  if (newline != std::string::npos) rest.resize(newline);
  return Trim(rest);
}

std::string StripTrailingPeriod(std::string text) {
  while (!text.empty() && (text.back() == '.' || text.back() == '*')) {
    text.pop_back();
  }
  while (!text.empty() && text.front() == '*') text.erase(0, 1);
  return Trim(text);
}

}  // namespace

std::optional<int> ParseOpenScore(std::string_view response, ParserId parser) {
  std::optional<std::string> value = AfterLabel(response, "score:");
  if (!value && parser == ParserId::kLabelled) value = Trim(response);
  if (!value) return std::nullopt;
  std::string token = StripTrailingPeriod(*value);
  // Accept "4/5"-style answers only when the denominator is 5.
  if (EndsWith(token, "/5")) token.resize(token.size() - 2);
  const std::optional<long long> score = ParseInteger(token);
  if (!score || *score < 1 || *score > 5) return std::nullopt;
  return static_cast<int>(*score);
}

std::optional<bool> ParseClosedVerdict(std::string_view response,
                                       ParserId parser) {
  std::optional<std::string> value = AfterLabel(response, "verdict:");
  if (!value && parser == ParserId::kLabelled) value = Trim(response);
  if (!value) return std::nullopt;
  const std::string token = ToLowerAscii(StripTrailingPeriod(*value));
  if (token == "correct") return true;
  if (token == "incorrect") return false;
  return std::nullopt;
}

ScoreRecord JudgeEvaluate(const JudgeItem& item, const JudgeConfig& config,
                          JudgeClient& client) {
  const dataset::VqaSample& sample = *item.sample;
  ScoreRecord record;
  record.sample_id = sample.sample_id;
  record.answer_class = sample.answer_class;
  record.context = item.context;
  record.ground_truth = sample.answer;
  record.prediction = item.prediction.prediction;
  const TokenPrf prf = ComputeTokenPrf(record.prediction, record.ground_truth);
  record.precision = prf.precision;
  record.recall = prf.recall;
  record.f1 = prf.f1;
  record.bleu = Bleu(record.prediction, record.ground_truth);
  record.exact_match = ExactMatch(record.prediction, record.ground_truth);
  const bool closed = dataset::IsClosed(sample.answer_class);

  if (record.exact_match) {
    record.judge_path = JudgePath::kShortcut;
    if (closed) {
      record.judge_correct = true;
    } else {
      record.judge_score = 5;
    }
    return record;
  }

  record.judge_path = JudgePath::kLlm;
  PromptInputs inputs{sample.question, sample.answer, record.prediction,
                      OptionsText(sample)};
  std::string prompt;
  try {
    prompt = RenderPrompt(TemplateFor(sample.answer_class), inputs);
  } catch (const Error& e) {
    record.evaluation_error = std::string("prompt: ") + e.what();
    return record;
  }
  JudgeRequest request{config.model_name, prompt, config.temperature,
                       config.max_tokens};
  std::string last_problem;
  double delay_ms = config.backoff_ms;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    if (attempt > 0 && delay_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(delay_ms)));
      delay_ms *= config.backoff_multiplier;
    }
    ++record.judge_calls;
    std::string response;
    try {
      response = client.Complete(request);
    } catch (const Error& e) {
      last_problem = e.what();
      continue;
    }
    record.judge_raw = response;
    if (closed) {
      if (auto verdict = ParseClosedVerdict(response, config.parser)) {
        record.judge_correct = *verdict;
        return record;
      }
    } else if (auto score = ParseOpenScore(response, config.parser)) {
      record.judge_score = *score;
      return record;
    }
    last_problem = "unparseable judge response";
  }
  record.evaluation_error = "retry_exhausted: " + last_problem;
  return record;
}

std::vector<ScoreRecord> EvaluateBatch(const std::vector<JudgeItem>& items,
                                       const JudgeConfig& config,
                                       JudgeClient& client) {
  ValidateJudgeConfig(config);
  std::vector<ScoreRecord> out(items.size());
  const size_t workers = std::max<size_t>(
      1, std::min<size_t>(items.size(), static_cast<size_t>(config.parallelism)));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < items.size(); i = next++) {
      out[i] = JudgeEvaluate(items[i], config, client);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& thread : threads) thread.join();
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoreRecord& a, const ScoreRecord& b) {
                     if (a.sample_id != b.sample_id) {
                       return a.sample_id < b.sample_id;
                     }
                     if (a.context.model_id != b.context.model_id) {
                       return a.context.model_id < b.context.model_id;
                     }
                     return a.context.seed < b.context.seed;
                   });
  return out;
}

}  // namespace vqaeval::metrics
