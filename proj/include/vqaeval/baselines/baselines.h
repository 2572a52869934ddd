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

#ifndef VQAEVAL_BASELINES_BASELINES_H_
#define VQAEVAL_BASELINES_BASELINES_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/sample.h"
#include "vqaeval/metrics/prediction.h"

namespace vqaeval::baselines {

struct AnswerCount {
  std::string answer;  // Representative raw answer text.
  size_t count = 0;
};

// Normalized question -> answers by descending count, ties broken by the
// lexicographically smaller normalized answer. Answers are merged by their
// normalized form; the representative is the smallest raw spelling.
using FrequencyTable = std::map<std::string, std::vector<AnswerCount>>;

FrequencyTable BuildFrequencyTable(const std::vector<dataset::VqaSample>& train);

struct MostFrequentResult {
  std::vector<metrics::PredictionRecord> predictions;
  size_t matched = 0;
  size_t total = 0;
  double coverage = 0.0;  // matched / total; 0 for an empty test set.
};

// Test questions found in the table (after normalization) get the head
// answer; the others are omitted and counted.
MostFrequentResult MostFrequentPredictions(
    const FrequencyTable& table, const std::vector<dataset::VqaSample>& test,
    const std::string& model_id = "most_frequent");

// Candidate answers used by the random baseline, or empty when they cannot
// be determined. Binary: the two parsed options (yes/no without " or ").
// Multilabel choose: {a, b, both, none}.
std::vector<std::string> RandomCandidates(const dataset::VqaSample& sample);

// Uniform choice among each closed sample's candidates; each sample draws from
// DeriveSeed(seed, sample_id). Open samples and samples without candidates are
// skipped.
std::vector<metrics::PredictionRecord> RandomPredictions(
    const std::vector<dataset::VqaSample>& test, uint64_t seed,
    const std::string& model_id = "random");

Json FrequencyTableToJson(const FrequencyTable& table);

}  // namespace vqaeval::baselines

#endif  // VQAEVAL_BASELINES_BASELINES_H_
