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

#include "vqaeval/baselines/baselines.h"

#include <algorithm>

#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/dataset/closed_options.h"
#include "vqaeval/metrics/text_metrics.h"

namespace vqaeval::baselines {

FrequencyTable BuildFrequencyTable(
    const std::vector<dataset::VqaSample>& train) {
  struct Tally {
    std::string representative;
    size_t count = 0;
  };
  // question -> normalized answer -> tally
  std::map<std::string, std::map<std::string, Tally>> counts;
  for (const dataset::VqaSample& sample : train) {
    const std::string question = metrics::NormalizeAnswer(sample.question);
    const std::string answer = metrics::NormalizeAnswer(sample.answer);
    Tally& tally = counts[question][answer];
    if (tally.count == 0 || sample.answer < tally.representative) {
      tally.representative = sample.answer;
    }
    ++tally.count;
  }
  FrequencyTable table;
  for (const auto& [question, answers] : counts) {
    std::vector<std::pair<std::string, Tally>> sorted(answers.begin(),
                                                      answers.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) {
                       if (a.second.count != b.second.count) {
                         return a.second.count > b.second.count;
                       }
                       return a.first < b.first;
                     });
    std::vector<AnswerCount>& list = table[question];
    for (const auto& [normalized, tally] : sorted) {
      list.push_back({tally.representative, tally.count});
    }
  }
  return table;
}

MostFrequentResult MostFrequentPredictions(
    const FrequencyTable& table, const std::vector<dataset::VqaSample>& test,
    const std::string& model_id) {
  MostFrequentResult result;
  result.total = test.size();
  for (const dataset::VqaSample& sample : test) {
    auto it = table.find(metrics::NormalizeAnswer(sample.question));
    if (it == table.end()) continue;
    metrics::PredictionRecord record;
    record.sample_id = sample.sample_id;
    record.model_id = model_id;
    record.method = metrics::Method::kMostFrequent;
    record.base_model = metrics::BaseModel::kNotApplicable;
    record.uses_image = false;
    record.prediction = it->second.front().answer;
    result.predictions.push_back(std::move(record));
    ++result.matched;
  }
  result.coverage = result.total == 0
                        ? 0.0
                        : static_cast<double>(result.matched) / result.total;
  return result;
}

std::vector<std::string> RandomCandidates(const dataset::VqaSample& sample) {
  switch (sample.answer_class) {
    case dataset::AnswerClass::kOpen:
      return {};
    case dataset::AnswerClass::kClosedBinary: {
      const auto options =
          dataset::ParseBinaryOptions(sample.question, sample.answer);
      if (!options) return {};
      return {options->first, options->second};
    }
    case dataset::AnswerClass::kClosedMultilabel: {
      auto it = sample.metadata.find("options");
      if (it == sample.metadata.end()) return {};
      std::vector<std::string> labels = Split(it->second, " | ");
      if (labels.size() != 2) return {};
      labels.push_back("both");
      labels.push_back("none");
      return labels;
    }
  }
  return {};
}

std::vector<metrics::PredictionRecord> RandomPredictions(
    const std::vector<dataset::VqaSample>& test, uint64_t seed,
    const std::string& model_id) {
  std::vector<metrics::PredictionRecord> out;
  for (const dataset::VqaSample& sample : test) {
    const std::vector<std::string> candidates = RandomCandidates(sample);
    if (candidates.empty()) continue;
    Rng rng(DeriveSeed(seed, sample.sample_id));
    metrics::PredictionRecord record;
    record.sample_id = sample.sample_id;
    record.model_id = model_id;
    record.method = metrics::Method::kRandom;
    record.base_model = metrics::BaseModel::kNotApplicable;
    record.uses_image = false;
    record.prediction = candidates[rng.UniformIndex(candidates.size())];
    out.push_back(std::move(record));
  }
  return out;
}

Json FrequencyTableToJson(const FrequencyTable& table) {
  Json out = Json::object();
  for (const auto& [question, answers] : table) {
    Json list = Json::array();
    for (const AnswerCount& a : answers) {
      list.push_back({{"answer", a.answer}, {"count", a.count}});
    }
    out[question] = list;
  }
  return out;
}

}  // namespace vqaeval::baselines
