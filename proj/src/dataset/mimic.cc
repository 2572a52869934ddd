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

#include "vqaeval/dataset/mimic.h"

#include <set>

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"
#include "vqaeval/dataset/sample.h"

namespace vqaeval::dataset {

SemanticType ParseSemanticType(std::string_view name) {
  if (name == "choose") return SemanticType::kChoose;
  if (name == "query") return SemanticType::kQuery;
  if (name == "verify") return SemanticType::kVerify;
  throw Error(ErrorCode::kValidation,
              "unknown semantic_type '" + std::string(name) + "'");
}

std::string_view SemanticTypeName(SemanticType type) {
  switch (type) {
    case SemanticType::kChoose: return "choose";
    case SemanticType::kQuery: return "query";
    case SemanticType::kVerify: return "verify";
  }
  return "verify";
}

std::string PreprocessMimicAnswer(
    SemanticType type, const std::vector<std::string>& raw_answers,
    const std::optional<std::pair<std::string, std::string>>& options) {
  switch (type) {
    case SemanticType::kChoose: {
      if (!options) {
        throw Error(ErrorCode::kValidation, "choose question without options");
      }
      const auto& [a, b] = *options;
      bool has_a = false;
      bool has_b = false;
      for (const std::string& label : raw_answers) {
        if (label == a) {
          has_a = true;
        } else if (label == b) {
          has_b = true;
        } else {
          throw Error(ErrorCode::kValidation,
                      "choose answer '" + label + "' is not an option");
        }
      }
      if (has_a && has_b) return "both";
      if (has_a) return a;
      if (has_b) return b;
      return std::string(kNone);
    }
    case SemanticType::kQuery: {
      std::set<std::string> seen;
      for (const std::string& label : raw_answers) {
        if (!seen.insert(label).second) {
          throw Error(ErrorCode::kValidation,
                      "query answer repeats label '" + label + "'");
        }
      }
      // An empty label list means no finding matches.
      if (raw_answers.empty()) return std::string(kNone);
      return Join(raw_answers, ", ");
    }
    case SemanticType::kVerify:
      if (raw_answers.size() != 1) {
        throw Error(ErrorCode::kValidation,
                    "verify answer must be exactly one label");
      }
      return raw_answers.front();
  }
  return {};
}

std::map<std::string, std::map<std::string, std::string>>
ResolveSubjectMetadata(
    const std::map<std::string, std::vector<MetadataRecord>>& by_subject,
    const std::vector<std::string>& fields) {
  std::map<std::string, std::map<std::string, std::string>> resolved;
  for (const auto& [subject, records] : by_subject) {
    auto& out = resolved[subject];
    for (const std::string& field : fields) {
      std::optional<std::string> value;
      bool conflict = records.empty();
      for (const MetadataRecord& record : records) {
        auto it = record.find(field);
        if (it == record.end() || !it->second) {
          conflict = true;
          break;
        }
        if (!value) {
          value = it->second;
        } else if (*value != *it->second) {
          conflict = true;
          break;
        }
      }
      out[field] = conflict ? std::string(kNone) : *value;
    }
  }
  return resolved;
}

}  // namespace vqaeval::dataset
