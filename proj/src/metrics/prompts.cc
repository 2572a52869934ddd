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

#include "vqaeval/metrics/prompts.h"

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"
#include "vqaeval/dataset/closed_options.h"

namespace vqaeval::metrics {
namespace {

constexpr std::string_view kOpenTemplate =
    R"(You are grading the answer of a medical visual question answering system.

Question: {question}
Reference answer: {ground_truth}
Candidate answer: {prediction}

Rate how well the candidate answer agrees in meaning with the reference answer:
5 = same meaning as the reference
4 = correct, with a minor omission or harmless extra detail
3 = partly correct
2 = mostly wrong, with a small correct element
1 = wrong or unrelated

Ignore wording, casing and punctuation. Do not reward answers for length.
Reply with one line of the form "Score: N" where N is an integer from 1 to 5.
)";

constexpr std::string_view kClosedBinaryTemplate =
    R"(You are grading the answer of a medical visual question answering system.
The question has exactly two possible answers: {options}.

Question: {question}
Reference answer: {ground_truth}
Candidate answer: {prediction}

The candidate is correct if it commits to the same option as the reference
answer. It is incorrect if it picks the other option, both options, or
neither.
Reply with one line: "Verdict: correct" or "Verdict: incorrect".
)";

constexpr std::string_view kClosedMultilabelTemplate =
    R"(You are grading the answer of a medical visual question answering system.
Answers are sets of labels written as a comma-separated list. The possible
answers to this question are: {options}.

Question: {question}
Reference labels: {ground_truth}
Candidate labels: {prediction}

The candidate is correct only if it names exactly the same set of labels as
the reference, in any order. A missing or an additional label makes it
incorrect.
Reply with one line: "Verdict: correct" or "Verdict: incorrect".
)";

}  // namespace

std::string_view TemplateName(TemplateId id) {
  switch (id) {
    case TemplateId::kOpen: return "open";
    case TemplateId::kClosedBinary: return "closed_binary";
    case TemplateId::kClosedMultilabel: return "closed_multilabel";
  }
  return "open";
}

TemplateId ParseTemplateId(std::string_view name) {
  if (name == "open") return TemplateId::kOpen;
  if (name == "closed_binary") return TemplateId::kClosedBinary;
  if (name == "closed_multilabel") return TemplateId::kClosedMultilabel;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown template '" + std::string(name) + "'");
}

TemplateId TemplateFor(dataset::AnswerClass answer_class) {
  switch (answer_class) {
    case dataset::AnswerClass::kOpen: return TemplateId::kOpen;
    case dataset::AnswerClass::kClosedBinary: return TemplateId::kClosedBinary;
    case dataset::AnswerClass::kClosedMultilabel:
      return TemplateId::kClosedMultilabel;
  }
  return TemplateId::kOpen;
}

std::string_view BuiltinTemplate(TemplateId id) {
  switch (id) {
    case TemplateId::kOpen: return kOpenTemplate;
    case TemplateId::kClosedBinary: return kClosedBinaryTemplate;
    case TemplateId::kClosedMultilabel: return kClosedMultilabelTemplate;
  }
  return kOpenTemplate;
}

std::string RenderTemplate(std::string_view text, const PromptInputs& inputs) {
  std::string out;
  out.reserve(text.size() + 256);
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t open = text.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const size_t close = text.find('}', open);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "unterminated template slot");
    }
    const std::string_view slot = text.substr(open + 1, close - open - 1);
    if (slot == "question") {
      out.append(inputs.question);
    } else if (slot == "ground_truth") {
      out.append(inputs.ground_truth);
    } else if (slot == "prediction") {
      out.append(inputs.prediction);
    } else if (slot == "options") {
      if (!inputs.options) {
        throw Error(ErrorCode::kInvalidArgument,
                    "template slot {options} has no value");
      }
      out.append(*inputs.options);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown template slot {" + std::string(slot) + "}");
    }
    pos = close + 1;
  }
  return out;
}

std::string RenderPrompt(TemplateId id, const PromptInputs& inputs) {
  return RenderTemplate(BuiltinTemplate(id), inputs);
}

std::optional<std::string> OptionsText(const dataset::VqaSample& sample) {
  switch (sample.answer_class) {
    case dataset::AnswerClass::kOpen:
      return std::nullopt;
    case dataset::AnswerClass::kClosedBinary: {
      const auto options =
          dataset::ParseBinaryOptions(sample.question, sample.answer);
      if (!options) return std::nullopt;
      return options->first + " or " + options->second;
    }
    case dataset::AnswerClass::kClosedMultilabel: {
      auto it = sample.metadata.find("options");
      if (it == sample.metadata.end()) return std::nullopt;
      const std::vector<std::string> labels = Split(it->second, " | ");
      if (labels.size() != 2) return std::nullopt;
      return labels[0] + ", " + labels[1] + ", both, none";
    }
  }
  return std::nullopt;
}

}  // namespace vqaeval::metrics
