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

#include "vqaeval/metrics/http_judge_client.h"

#include "httplib.h"
#include "vqaeval/common/error.h"
#include "vqaeval/common/io.h"

namespace vqaeval::metrics {

HttpJudgeClient::HttpJudgeClient(const JudgeConfig& config)
    : api_style_(config.api_style), timeout_ms_(config.timeout_ms) {
  const std::string& url = config.endpoint;
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kValidation,
                "judge endpoint must be an http:// URL: " + url);
  }
  const size_t slash = url.find('/', scheme.size());
  host_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::string HttpJudgeClient::Complete(const JudgeRequest& request) {
  Json body;
  if (api_style_ == "chat") {
    body = {{"model", request.model},
            {"messages",
             Json::array({{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  } else {
    body = {{"model", request.model},
            {"prompt", request.prompt},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  }
  httplib::Client client(host_);
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Result result =
      client.Post(path_, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::kTransport,
                "judge request failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::kTransport,
                "judge returned HTTP " + std::to_string(result->status));
  }
  try {
    const Json reply = Json::parse(result->body);
    if (api_style_ == "chat") {
      return reply.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    }
    return reply.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("malformed judge reply: ") + e.what());
  }
}

}  // namespace vqaeval::metrics
