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

#include "vqaeval/metrics/text_metrics.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"

namespace vqaeval::metrics {
namespace {

const icu::Normalizer2& CaseFolder() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer =
      icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status) || normalizer == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "ICU NFKC_Casefold normalizer unavailable");
  }
  return *normalizer;
}

bool IsJoiner(UChar32 c) {
  return c == '-' || c == '\'' || c == '.' || c == '/';
}

bool IsDropped(UChar32 c) {
  return u_ispunct(c) || u_charType(c) == U_MATH_SYMBOL ||
         u_charType(c) == U_CURRENCY_SYMBOL ||
         u_charType(c) == U_MODIFIER_SYMBOL ||
         u_charType(c) == U_OTHER_SYMBOL;
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

std::string NormalizeAnswer(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString folded = CaseFolder().normalize(
      icu::UnicodeString::fromUTF8(
          icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
      status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidArgument, "unicode normalization failed");
  }
  std::vector<UChar32> chars;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 c = folded.char32At(i);
    chars.push_back(c);
    i += U16_LENGTH(c);
  }
  icu::UnicodeString kept;
  for (size_t i = 0; i < chars.size(); ++i) {
    const UChar32 c = chars[i];
    if (u_isUWhiteSpace(c)) {
      kept.append(static_cast<UChar32>(' '));
    } else if (IsJoiner(c)) {
      const bool inner = i > 0 && i + 1 < chars.size() &&
                         u_isalnum(chars[i - 1]) && u_isalnum(chars[i + 1]);
      if (inner) kept.append(c);
    } else if (!IsDropped(c)) {
      kept.append(c);
    }
  }
  std::string utf8;
  kept.toUTF8String(utf8);
  return CollapseWhitespace(utf8);
}

bool ExactMatch(std::string_view prediction, std::string_view ground_truth) {
  return NormalizeAnswer(prediction) == NormalizeAnswer(ground_truth);
}

std::vector<std::string> Tokenize(std::string_view text) {
  return SplitWhitespace(NormalizeAnswer(text));
}

TokenPrf ComputeTokenPrf(std::string_view prediction,
                         std::string_view ground_truth) {
  const std::vector<std::string> pred = Tokenize(prediction);
  const std::vector<std::string> gt = Tokenize(ground_truth);
  if (pred.empty() && gt.empty()) return {1.0, 1.0, 1.0};
  if (pred.empty() || gt.empty()) return {};
  std::map<std::string, int> gt_counts;
  for (const std::string& token : gt) ++gt_counts[token];
  int overlap = 0;
  for (const std::string& token : pred) {
    auto it = gt_counts.find(token);
    if (it != gt_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  TokenPrf prf;
  prf.precision = static_cast<double>(overlap) / pred.size();
  prf.recall = static_cast<double>(overlap) / gt.size();
  if (overlap > 0) {
    prf.f1 = 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
  }
  return prf;
}

double BleuTokens(const std::vector<std::string>& hypothesis,
                  const std::vector<std::string>& reference) {
  if (hypothesis.empty() && reference.empty()) return 1.0;
  if (hypothesis.empty() || reference.empty()) return 0.0;
  const size_t max_order = std::min<size_t>(4, hypothesis.size());
  double log_sum = 0.0;
  for (size_t n = 1; n <= max_order; ++n) {
    const NgramCounts hyp = CountNgrams(hypothesis, n);
    const NgramCounts ref = CountNgrams(reference, n);
    int matched = 0;
    int total = 0;
    for (const auto& [gram, count] : hyp) {
      total += count;
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    double precision;
    if (n == 1) {
      if (matched == 0) return 0.0;
      precision = static_cast<double>(matched) / total;
    } else {
      precision = (matched + 1.0) / (total + 1.0);
    }
    log_sum += std::log(precision);
  }
  const double h = static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = h < r ? std::exp(1.0 - r / h) : 1.0;
  return std::min(1.0, brevity * std::exp(log_sum / max_order));
}

double Bleu(std::string_view prediction, std::string_view ground_truth) {
  return BleuTokens(Tokenize(prediction), Tokenize(ground_truth));
}

}  // namespace vqaeval::metrics
