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

#ifndef VQAEVAL_DATASET_CLOSED_OPTIONS_H_
#define VQAEVAL_DATASET_CLOSED_OPTIONS_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vqaeval/dataset/manifest.h"
#include "vqaeval/dataset/sample.h"

namespace vqaeval::dataset {

inline constexpr std::string_view kDropTooManyOptions =
    "closed_more_than_two_options";
inline constexpr std::string_view kDropAnswerNotInOptions =
    "closed_answer_not_in_options";

// Number of options embedded in a closed question: one per " or " plus one.
// Questions without " or " are treated as yes/no questions (two options).
size_t CountEmbeddedOptions(std::string_view question);

// Returns the drop reason for a closed OVQA sample, or nullopt to keep it.
// Open samples are always kept.
std::optional<std::string> OvqaClosedDropReason(const VqaSample& sample);

// Keeps open samples and closed samples with exactly two options that contain
// the answer. Drops are appended to `report` when given.
std::vector<VqaSample> FilterOvqaClosed(std::vector<VqaSample> samples,
                                        LoadReport* report = nullptr);

// Best-effort recovery of the two options of a closed binary question,
// in normalized form. "a or b" questions yield (a, b) where a is taken from
// the tail of the text before " or "; other questions yield (yes, no).
std::optional<std::pair<std::string, std::string>> ParseBinaryOptions(
    std::string_view question, std::string_view answer);

}  // namespace vqaeval::dataset

#endif  // VQAEVAL_DATASET_CLOSED_OPTIONS_H_
