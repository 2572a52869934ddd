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

#ifndef VQAEVAL_METRICS_MOCK_JUDGE_CLIENT_H_
#define VQAEVAL_METRICS_MOCK_JUDGE_CLIENT_H_

#include <atomic>
#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "vqaeval/metrics/judge.h"

namespace vqaeval::metrics {

// Offline judge. Without a script it answers deterministically from a hash of
// the prompt: "Score: N" for open prompts and "Verdict: ..." for closed ones.
// A script of canned responses is consumed first, one per call; the literal
// response "!transport" raises a transport error. Every call is counted.
class MockJudgeClient : public JudgeClient {
 public:
  MockJudgeClient() = default;
  explicit MockJudgeClient(std::vector<std::string> script);

  std::string Complete(const JudgeRequest& request) override;

  int calls() const { return calls_.load(); }
  std::vector<std::string> prompts() const;

  static std::string HashResponse(const std::string& prompt);

 private:
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::deque<std::string> script_;
  std::vector<std::string> prompts_;
};

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_MOCK_JUDGE_CLIENT_H_
