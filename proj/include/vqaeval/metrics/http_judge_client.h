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

#ifndef VQAEVAL_METRICS_HTTP_JUDGE_CLIENT_H_
#define VQAEVAL_METRICS_HTTP_JUDGE_CLIENT_H_

#include <string>

#include "vqaeval/metrics/judge.h"

namespace vqaeval::metrics {

// Plain-HTTP judge client.
//   native: POST {model, prompt, temperature, max_tokens} -> {text}
//   chat:   POST {model, messages:[{role:user, content}], temperature,
//           max_tokens} -> {choices:[{message:{content}}]}
// Non-2xx statuses, connection errors and malformed bodies raise
// Error(kTransport).
class HttpJudgeClient : public JudgeClient {
 public:
  explicit HttpJudgeClient(const JudgeConfig& config);

  std::string Complete(const JudgeRequest& request) override;

 private:
  std::string host_;  // scheme://host:port
  std::string path_;
  std::string api_style_;
  int timeout_ms_;
};

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_HTTP_JUDGE_CLIENT_H_
