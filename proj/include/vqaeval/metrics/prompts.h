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

#ifndef VQAEVAL_METRICS_PROMPTS_H_
#define VQAEVAL_METRICS_PROMPTS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vqaeval/dataset/sample.h"

namespace vqaeval::metrics {

enum class TemplateId { kOpen, kClosedBinary, kClosedMultilabel };

std::string_view TemplateName(TemplateId id);
TemplateId ParseTemplateId(std::string_view name);
TemplateId TemplateFor(dataset::AnswerClass answer_class);

// Built-in template text. Slots: {question} {ground_truth} {prediction}
// {options}.
std::string_view BuiltinTemplate(TemplateId id);

struct PromptInputs {
  std::string question;
  std::string ground_truth;
  std::string prediction;
  std::optional<std::string> options;
};

// Fills every slot of `template_text`. Throws Error(kInvalidArgument) when a
// slot has no value (e.g. {options} without options) or names an unknown
// slot.
std::string RenderTemplate(std::string_view template_text,
                           const PromptInputs& inputs);
std::string RenderPrompt(TemplateId id, const PromptInputs& inputs);

// Option text shown to the judge for a sample, or nullopt when the options
// cannot be recovered: "a or b" for binary questions and
// "a, b, both, none" for multilabel choose questions.
std::optional<std::string> OptionsText(const dataset::VqaSample& sample);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_PROMPTS_H_
