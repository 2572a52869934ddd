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

#ifndef VQAEVAL_COMMON_ERROR_H_
#define VQAEVAL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vqaeval {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kParse,
  kIo,
  kDomain,
  kUndefined,
  kDegenerate,
  kMisaligned,
  kConflict,
  kTransport,
  kRetryExhausted,
  kValidation,
  kInsufficientData,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the harness carries a machine-readable code so
// that callers (CLI exit status, HTTP status mapping, tests) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code prefix that what() carries.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace vqaeval

#endif  // VQAEVAL_COMMON_ERROR_H_
