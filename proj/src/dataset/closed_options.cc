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

#include "vqaeval/dataset/closed_options.h"

#include "vqaeval/common/text.h"
#include "vqaeval/metrics/text_metrics.h"

namespace vqaeval::dataset {
namespace {

constexpr std::string_view kOr = " or ";

size_t CountOccurrences(std::string_view text, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

// Lowercased, whitespace-collapsed question; " or " is detected on this form.
std::string Flatten(std::string_view question) {
  return ToLowerAscii(CollapseWhitespace(question));
}

bool IsYesNo(const std::string& normalized) {
  return normalized == "yes" || normalized == "no";
}

// True when `suffix` is a whole-word suffix of `text` (both normalized).
bool IsWordSuffix(const std::string& text, const std::string& suffix) {
  if (suffix.empty() || !EndsWith(text, suffix)) return false;
  return text.size() == suffix.size() ||
         text[text.size() - suffix.size() - 1] == ' ';
}

std::string LastWords(const std::string& text, size_t count) {
  const std::vector<std::string> words = SplitWhitespace(text);
  if (words.size() <= count) return text;
  return Join(std::vector<std::string>(words.end() - count, words.end()), " ");
}

}  // namespace

size_t CountEmbeddedOptions(std::string_view question) {
  const size_t ors = CountOccurrences(Flatten(question), kOr);
  return ors == 0 ? 2 : ors + 1;
}

std::optional<std::string> OvqaClosedDropReason(const VqaSample& sample) {
  if (!IsClosed(sample.answer_class)) return std::nullopt;
  const std::string flat = Flatten(sample.question);
  const std::string answer = metrics::NormalizeAnswer(sample.answer);
  const size_t ors = CountOccurrences(flat, kOr);
  if (ors == 0) {
    if (IsYesNo(answer)) return std::nullopt;
    return std::string(kDropAnswerNotInOptions);
  }
  if (ors > 1) return std::string(kDropTooManyOptions);
  const size_t pos = flat.find(kOr);
  const std::string first = metrics::NormalizeAnswer(flat.substr(0, pos));
  const std::string second =
      metrics::NormalizeAnswer(flat.substr(pos + kOr.size()));
  if (answer == second || IsWordSuffix(first, answer)) return std::nullopt;
  return std::string(kDropAnswerNotInOptions);
}

std::vector<VqaSample> FilterOvqaClosed(std::vector<VqaSample> samples,
                                        LoadReport* report) {
  std::vector<VqaSample> kept;
  kept.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    std::optional<std::string> reason = OvqaClosedDropReason(samples[i]);
    if (!reason) {
      kept.push_back(std::move(samples[i]));
      continue;
    }
    if (report != nullptr) {
      report->Drop({"", i, samples[i].sample_id, *reason, samples[i].question});
    }
  }
  return kept;
}

std::optional<std::pair<std::string, std::string>> ParseBinaryOptions(
    std::string_view question, std::string_view answer) {
  const std::string flat = Flatten(question);
  const size_t ors = CountOccurrences(flat, kOr);
  if (ors == 0) return std::make_pair(std::string("yes"), std::string("no"));
  if (ors > 1) return std::nullopt;
  const size_t pos = flat.find(kOr);
  const std::string first = metrics::NormalizeAnswer(flat.substr(0, pos));
  const std::string second =
      metrics::NormalizeAnswer(flat.substr(pos + kOr.size()));
  if (first.empty() || second.empty()) return std::nullopt;
  const std::string normalized_answer = metrics::NormalizeAnswer(answer);
  std::string option_a;
  if (normalized_answer != second && IsWordSuffix(first, normalized_answer)) {
    option_a = normalized_answer;
  } else {
    option_a = LastWords(first, SplitWhitespace(second).size());
  }
  return std::make_pair(option_a, second);
}

}  // namespace vqaeval::dataset
