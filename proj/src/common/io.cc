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

#include "vqaeval/common/io.h"

#include <fstream>
#include <sstream>

#include <unistd.h>

#define TOML_EXCEPTIONS 1
#define TOML_HEADER_ONLY 1
#include "tomlplusplus/toml.hpp"

#include "vqaeval/common/error.h"

namespace vqaeval {
namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return buffer.str();
}

void WriteFileAtomic(const fs::path& path, std::string_view data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIo, "rename failed: " + path.string());
  }
}

Json ParseJson(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string(origin) + ": " + e.what());
  }
}

Json ReadJsonFile(const fs::path& path) {
  return ParseJson(ReadFile(path), path.string());
}

std::string DumpJson(const Json& value) { return value.dump(2) + "\n"; }

void WriteJsonFile(const fs::path& path, const Json& value) {
  WriteFileAtomic(path, DumpJson(value));
}

std::vector<JsonlLine> ReadJsonl(const fs::path& path) {
  const std::string content = ReadFile(path);
  std::vector<JsonlLine> lines;
  std::istringstream in(content);
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    JsonlLine parsed;
    parsed.line_number = number;
    try {
      parsed.value = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      parsed.error = e.what();
    }
    lines.push_back(std::move(parsed));
  }
  return lines;
}

std::string DumpJsonl(const std::vector<Json>& values) {
  std::string out;
  for (const Json& value : values) {
    out += value.dump();
    out.push_back('\n');
  }
  return out;
}

namespace {

Json ConvertToml(const toml::node& node) {
  if (const auto* table = node.as_table()) {
    Json out = Json::object();
    for (const auto& [key, value] : *table) {
      out[std::string(key.str())] = ConvertToml(value);
    }
    return out;
  }
  if (const auto* array = node.as_array()) {
    Json out = Json::array();
    for (const auto& value : *array) out.push_back(ConvertToml(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  // Dates and times are not used by any harness document.
  throw Error(ErrorCode::kParse, "unsupported TOML value type");
}

}  // namespace

Json TomlToJson(std::string_view text, std::string_view origin) {
  try {
    const toml::table table = toml::parse(text, origin);
    return ConvertToml(table);
  } catch (const toml::parse_error& e) {
    std::ostringstream message;
    message << origin << ":" << e.source().begin.line << ": "
            << e.description();
    throw Error(ErrorCode::kParse, message.str());
  }
}

Json LoadDocument(const fs::path& path) {
  const std::string text = ReadFile(path);
  if (path.extension() == ".toml") return TomlToJson(text, path.string());
  return ParseJson(text, path.string());
}

}  // namespace vqaeval
