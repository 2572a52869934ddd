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

#ifndef VQAEVAL_METRICS_AGGREGATE_H_
#define VQAEVAL_METRICS_AGGREGATE_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/metrics/score.h"

namespace vqaeval::metrics {

// "closed" for both closed classes, "open" otherwise.
std::string CoarseAnswerClass(dataset::AnswerClass answer_class);

// Group keys: answer_class, split, method, base_model, seed, shift, dataset,
// uses_image, model_id. answer_class is always part of the grouping because
// closed accuracy and open judge scores do not mix.
std::string GroupKeyValue(const ScoreRecord& record, const std::string& key);
const std::vector<std::string>& AllGroupKeys();

struct MetricSummary {
  std::vector<std::pair<std::string, std::string>> keys;
  // "judge" (closed accuracy or open 1-5 mean), "exact_match", "precision",
  // "recall", "f1", "bleu".
  std::string metric;
  // Seed label ("n/a" when unseeded) -> value over that seed's samples.
  std::vector<std::pair<std::string, double>> per_seed;
  std::optional<double> mean;  // Across seeds.
  std::optional<double> std;   // Sample std across seeds; nullopt for < 2.
  size_t n = 0;                // Scored samples, all seeds.
  size_t failures = 0;         // Judge failures, all seeds.
};

// Groups records and summarizes each group. Throws Error(kInsufficientData)
// for an empty input and Error(kInvalidArgument) for an unknown key.
std::vector<MetricSummary> Aggregate(const std::vector<ScoreRecord>& scores,
                                     std::vector<std::string> group_keys);

// Mean and sample standard deviation (n - 1).
double Mean(const std::vector<double>& values);
std::optional<double> SampleStd(const std::vector<double>& values);

// CSV with columns: group keys..., metric, mean, std, n, failures.
std::string SummariesToCsv(const std::vector<MetricSummary>& summaries,
                           const std::vector<std::string>& group_keys);
Json SummariesToJson(const std::vector<MetricSummary>& summaries);

}  // namespace vqaeval::metrics

#endif  // VQAEVAL_METRICS_AGGREGATE_H_
