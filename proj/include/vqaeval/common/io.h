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

#ifndef VQAEVAL_COMMON_IO_H_
#define VQAEVAL_COMMON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vqaeval {

using Json = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place, creating
// parent directories as needed.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

Json ParseJson(std::string_view text, std::string_view origin);
Json ReadJsonFile(const std::filesystem::path& path);
// Pretty-printed with two-space indentation and a trailing newline.
std::string DumpJson(const Json& value);
void WriteJsonFile(const std::filesystem::path& path, const Json& value);

struct JsonlLine {
  size_t line_number = 0;  // 1-based.
  Json value;
  std::string error;  // Non-empty when the line failed to parse.
};

// Blank lines are skipped. Malformed lines are returned with an error so
// callers can report them per record.
std::vector<JsonlLine> ReadJsonl(const std::filesystem::path& path);
std::string DumpJsonl(const std::vector<Json>& values);

Json TomlToJson(std::string_view text, std::string_view origin);
// Loads a TOML (.toml) or JSON (anything else) document.
Json LoadDocument(const std::filesystem::path& path);

}  // namespace vqaeval

#endif  // VQAEVAL_COMMON_IO_H_
