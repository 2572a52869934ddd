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

#ifndef VQAEVAL_METRICS_TEXT_METRICS_H_
#define VQAEVAL_METRICS_TEXT_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

namespace vqaeval::metrics {

// NFKC case folding, punctuation removal and whitespace collapsing.
// Hyphens, apostrophes, periods and slashes survive when they sit between two
// alphanumeric characters ("x-ray", "t2/flair", "0.5").
std::string NormalizeAnswer(std::string_view text);

bool ExactMatch(std::string_view prediction, std::string_view ground_truth);

// Whitespace tokens of the normalized text.
std::vector<std::string> Tokenize(std::string_view text);

struct TokenPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Multiset token overlap on normalized text.
TokenPrf ComputeTokenPrf(std::string_view prediction,
                         std::string_view ground_truth);

// Sentence BLEU against a single reference. Uses orders 1..min(4, |hyp|);
// unigram precision is unsmoothed and higher orders use add-one smoothing.
double Bleu(std::string_view prediction, std::string_view ground_truth);
double BleuTokens(const std::vector<std::string>& hypothesis,
                  const std::vector<std::string>& reference);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_TEXT_METRICS_H_
