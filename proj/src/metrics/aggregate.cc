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

#include "vqaeval/metrics/aggregate.h"

#include <algorithm>
#include <cmath>

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"

namespace vqaeval::metrics {

std::string CoarseAnswerClass(dataset::AnswerClass answer_class) {
  return dataset::IsClosed(answer_class) ? "closed" : "open";
}

const std::vector<std::string>& AllGroupKeys() {
  static const std::vector<std::string> keys = {
      "dataset", "shift",      "split",    "answer_class", "method",
      "base_model", "uses_image", "model_id", "seed"};
  return keys;
}

std::string GroupKeyValue(const ScoreRecord& record, const std::string& key) {
  if (key == "answer_class") return CoarseAnswerClass(record.answer_class);
  if (key == "split") return record.context.split;
  if (key == "method") return std::string(MethodName(record.context.method));
  if (key == "base_model") {
    return std::string(BaseModelName(record.context.base_model));
  }
  if (key == "seed") {
    return record.context.seed ? std::to_string(*record.context.seed) : "n/a";
  }
  if (key == "shift") return record.context.shift;
  if (key == "dataset") return record.context.dataset;
  if (key == "uses_image") return record.context.uses_image ? "true" : "false";
  if (key == "model_id") return record.context.model_id;
  throw Error(ErrorCode::kInvalidArgument, "unknown group key '" + key + "'");
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientData, "mean of an empty list");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / values.size();
}

std::optional<double> SampleStd(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

namespace {

constexpr const char* kMetrics[] = {"judge",  "exact_match", "precision",
                                    "recall", "f1",          "bleu"};

double MetricValue(const ScoreRecord& r, const std::string& metric) {
  if (metric == "judge") return r.Value();
  if (metric == "exact_match") return r.exact_match ? 1.0 : 0.0;
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  if (metric == "f1") return r.f1;
  return r.bleu;
}

}  // namespace

std::vector<MetricSummary> Aggregate(const std::vector<ScoreRecord>& scores,
                                     std::vector<std::string> group_keys) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInsufficientData, "aggregate over no scores");
  }
  for (const std::string& key : group_keys) {
    const auto& all = AllGroupKeys();
    if (std::find(all.begin(), all.end(), key) == all.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown group key '" + key + "'");
    }
  }
  if (std::find(group_keys.begin(), group_keys.end(), "answer_class") ==
      group_keys.end()) {
    group_keys.push_back("answer_class");
  }

  using GroupKey = std::vector<std::string>;
  // group -> seed label -> records
  std::map<GroupKey, std::map<std::string, std::vector<const ScoreRecord*>>>
      groups;
  for (const ScoreRecord& record : scores) {
    GroupKey key;
    for (const std::string& k : group_keys) {
      key.push_back(GroupKeyValue(record, k));
    }
    groups[key][GroupKeyValue(record, "seed")].push_back(&record);
  }

  std::vector<MetricSummary> out;
  for (const auto& [key, by_seed] : groups) {
    for (const char* metric : kMetrics) {
      MetricSummary summary;
      for (size_t i = 0; i < group_keys.size(); ++i) {
        summary.keys.emplace_back(group_keys[i], key[i]);
      }
      summary.metric = metric;
      std::vector<double> seed_values;
      for (const auto& [seed, records] : by_seed) {
        double sum = 0.0;
        size_t n = 0;
        for (const ScoreRecord* r : records) {
          if (r->Failed()) {
            if (summary.metric == "judge") ++summary.failures;
            continue;
          }
          sum += MetricValue(*r, summary.metric);
          ++n;
        }
        summary.n += n;
        if (n > 0) {
          summary.per_seed.emplace_back(seed, sum / n);
          seed_values.push_back(sum / n);
        }
      }
      if (!seed_values.empty()) summary.mean = Mean(seed_values);
      summary.std = SampleStd(seed_values);
      out.push_back(std::move(summary));
    }
  }
  return out;
}

namespace {

std::string OptionalCell(const std::optional<double>& value) {
  return value ? FormatShortest(*value) : std::string();
}

}  // namespace

std::string SummariesToCsv(const std::vector<MetricSummary>& summaries,
                           const std::vector<std::string>& group_keys) {
  std::vector<std::string> columns = group_keys;
  if (std::find(columns.begin(), columns.end(), "answer_class") ==
      columns.end()) {
    columns.push_back("answer_class");
  }
  std::vector<std::string> header;
  for (const std::string& c : columns) header.push_back(CsvEscape(c));
  for (const char* c : {"metric", "mean", "std", "n", "failures"}) {
    header.emplace_back(c);
  }
  std::string out = Join(header, ",") + "\n";
  for (const MetricSummary& s : summaries) {
    std::vector<std::string> row;
    for (const std::string& column : columns) {
      std::string value;
      for (const auto& [k, v] : s.keys) {
        if (k == column) value = v;
      }
      row.push_back(CsvEscape(value));
    }
    row.push_back(s.metric);
    row.push_back(OptionalCell(s.mean));
    row.push_back(OptionalCell(s.std));
    row.push_back(std::to_string(s.n));
    row.push_back(std::to_string(s.failures));
    out += Join(row, ",") + "\n";
  }
  return out;
}

Json SummariesToJson(const std::vector<MetricSummary>& summaries) {
  Json out = Json::array();
  for (const MetricSummary& s : summaries) {
    Json keys = Json::object();
    for (const auto& [k, v] : s.keys) keys[k] = v;
    Json per_seed = Json::object();
    for (const auto& [seed, value] : s.per_seed) per_seed[seed] = value;
    out.push_back({{"keys", keys},
                   {"metric", s.metric},
                   {"per_seed", per_seed},
                   {"mean", s.mean ? Json(*s.mean) : Json(nullptr)},
                   {"std", s.std ? Json(*s.std) : Json(nullptr)},
                   {"n", s.n},
                   {"failures", s.failures}});
  }
  return out;
}

}  // namespace vqaeval::metrics
