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

#include "vqaeval/split/builtin_shifts.h"

namespace vqaeval::split {
namespace {

Condition Eq(std::string key, std::string value) {
  Condition c;
  c.key = std::move(key);
  c.op = ConditionOp::kEquals;
  c.value = std::move(value);
  return c;
}

Condition NotEq(std::string key, std::string value) {
  Condition c = Eq(std::move(key), std::move(value));
  c.op = ConditionOp::kNotEquals;
  return c;
}

Condition InSet(std::string key, std::vector<std::string> values) {
  Condition c;
  c.key = std::move(key);
  c.op = ConditionOp::kInSet;
  c.values = std::move(values);
  return c;
}

Condition Age(ConditionOp op, int age) {
  Condition c;
  c.key = "age";
  c.op = op;
  c.age = age;
  return c;
}

ShiftSpec Make(std::string name, ShiftCategory category, Conjunction ood,
               std::vector<Conjunction> exclude, bool merge) {
  ShiftSpec spec;
  spec.name = std::move(name);
  spec.category = category;
  spec.ood = std::move(ood);
  spec.exclude = std::move(exclude);
  spec.merge_ood_train_into_test = merge;
  return spec;
}

std::vector<ShiftSpec> MakeBuiltins() {
  std::vector<ShiftSpec> shifts;
  // Image-side shifts merge training OoD cases into the OoD test set since
  // their images are distinct; question-type shifts only use test cases.
  shifts.push_back(Make("slake_modality", ShiftCategory::kAcquisition,
                        {Eq("modality", "X-Ray")}, {}, true));
  shifts.push_back(Make("slake_question_type", ShiftCategory::kQuestionType,
                        {Eq("content_type", "Size")}, {}, false));
  shifts.push_back(Make("ovqa_body_part", ShiftCategory::kManifestation,
                        {Eq("body_part", "Leg")}, {}, true));
  shifts.push_back(Make("ovqa_question_type", ShiftCategory::kQuestionType,
                        {Eq("content_type", "Organ System")}, {}, false));
  shifts.push_back(Make("mimic_gender", ShiftCategory::kPopulation,
                        {Eq("gender", "F")}, {{Eq("gender", "none")}}, false));
  shifts.push_back(Make(
      "mimic_ethnicity", ShiftCategory::kPopulation,
      {NotEq("ethnicity", "white")},
      {{InSet("ethnicity", {"none", "unknown", "other", "unknown/other"})}},
      false));
  // Train on patients over 60, test on patients under 40; the 40-60 band is
  // removed from every list to leave a gap.
  shifts.push_back(Make(
      "mimic_age", ShiftCategory::kPopulation, {Age(ConditionOp::kAgeLt, 40)},
      {{Age(ConditionOp::kAgeGt, 39), Age(ConditionOp::kAgeLt, 61)},
       {Eq("age", "none")}},
      false));
  shifts.push_back(Make("slake_modality_swapped", ShiftCategory::kAcquisition,
                        {Eq("modality", "MRI")}, {}, true));
  shifts.push_back(Make("slake_question_type_swapped",
                        ShiftCategory::kQuestionType,
                        {Eq("content_type", "Position")}, {}, false));
  shifts.push_back(Make("ovqa_multimodal", ShiftCategory::kMultimodal,
                        {Eq("body_part", "Leg"),
                         Eq("content_type", "Organ System")},
                        {}, false));
  return shifts;
}

}  // namespace

const std::vector<ShiftSpec>& BuiltinShifts() {
  static const std::vector<ShiftSpec> shifts = MakeBuiltins();
  return shifts;
}

std::optional<ShiftSpec> FindBuiltinShift(std::string_view name) {
  for (const ShiftSpec& spec : BuiltinShifts()) {
    if (spec.name == name) return spec;
  }
  return std::nullopt;
}

}  // namespace vqaeval::split
