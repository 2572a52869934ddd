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

#ifndef VQAEVAL_DATASET_MIMIC_H_
#define VQAEVAL_DATASET_MIMIC_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vqaeval::dataset {

enum class SemanticType { kChoose, kQuery, kVerify };

SemanticType ParseSemanticType(std::string_view name);
std::string_view SemanticTypeName(SemanticType type);

// Collapses a label list into the single answer string used for scoring:
// choose -> option, "both" or "none"; query -> ", "-joined labels;
// verify -> the yes/no label unchanged. Throws Error(kValidation) on a choose
// question without options, a query with duplicate labels, or a verify answer
// that is not a single label.
std::string PreprocessMimicAnswer(
    SemanticType type, const std::vector<std::string>& raw_answers,
    const std::optional<std::pair<std::string, std::string>>& options);

// One metadata record per question; nullopt marks a missing field.
using MetadataRecord = std::map<std::string, std::optional<std::string>>;

// Per subject and field: the value when all records agree, "none" when they
// disagree or any record lacks the field.
std::map<std::string, std::map<std::string, std::string>>
ResolveSubjectMetadata(
    const std::map<std::string, std::vector<MetadataRecord>>& by_subject,
    const std::vector<std::string>& fields);

}  // namespace vqaeval::dataset

#endif  // VQAEVAL_DATASET_MIMIC_H_
