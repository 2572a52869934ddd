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

#include "vqaeval/metrics/mock_judge_client.h"

#include "vqaeval/common/error.h"
#include "vqaeval/common/rng.h"

namespace vqaeval::metrics {

MockJudgeClient::MockJudgeClient(std::vector<std::string> script)
    : script_(script.begin(), script.end()) {}

std::string MockJudgeClient::HashResponse(const std::string& prompt) {
  const uint64_t h = SplitMix64(Fnv1a64(prompt));
  if (prompt.find("Verdict:") != std::string::npos) {
    return (h & 1) ? "Verdict: correct" : "Verdict: incorrect";
  }
  return "Score: " + std::to_string(1 + h % 5);
}

std::string MockJudgeClient::Complete(const JudgeRequest& request) {
  ++calls_;
  std::string response;
  {
    std::lock_guard<std::mutex> lock(mu_);
    prompts_.push_back(request.prompt);
    if (!script_.empty()) {
      response = script_.front();
      script_.pop_front();
    } else {
      response = HashResponse(request.prompt);
    }
  }
  if (response == "!transport") {
    throw Error(ErrorCode::kTransport, "mock transport failure");
  }
  return response;
}

std::vector<std::string> MockJudgeClient::prompts() const {
  std::lock_guard<std::mutex> lock(mu_);
  return prompts_;
}

}  // namespace vqaeval::metrics
