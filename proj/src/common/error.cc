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

#include "vqaeval/common/error.h"

namespace vqaeval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kMisaligned: return "misaligned";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kTransport: return "transport_error";
    case ErrorCode::kRetryExhausted: return "retry_exhausted";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kInsufficientData: return "insufficient_data";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace vqaeval
