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

#ifndef VQAEVAL_RATER_RATER_STUDY_H_
#define VQAEVAL_RATER_RATER_STUDY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/manifest.h"
#include "vqaeval/metrics/score.h"

namespace vqaeval::rater {

struct RatingRecord {
  std::string rater_id;
  std::string sample_id;
  int score = 0;           // 1..5
  std::string timestamp;   // ISO-8601 UTC.

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

inline constexpr char kRatingsHeader[] = "rater_id,sample_id,score,timestamp";

std::string RatingToCsvLine(const RatingRecord& rating);
// Header line required. Throws Error(kValidation) for a bad score or field
// count and Error(kConflict) for a repeated (rater_id, sample_id).
std::vector<RatingRecord> ParseRatingsCsv(std::string_view text);
std::vector<RatingRecord> ReadRatings(const std::filesystem::path& path);
void WriteRatings(const std::filesystem::path& path,
                  const std::vector<RatingRecord>& ratings);

// Current UTC time, second resolution ("2026-01-31T12:00:00Z").
std::string UtcTimestamp();
bool IsIsoTimestamp(std::string_view text);

// Uniform sample without replacement of `n` ids among open-ended records
// whose prediction is not an exact match. Ids are returned sorted. Throws
// Error(kInsufficientData) with fewer than n eligible records and
// Error(kMisaligned) if a sample id appears twice.
std::vector<std::string> SampleRaterSet(
    const std::vector<metrics::ScoreRecord>& scores, size_t n, uint64_t seed);

struct RaterItem {
  std::string sample_id;
  std::string question;
  std::string ground_truth;
  std::string prediction;
  std::string image_ref;
};

// Items for the selected ids, in id order; no model or method labels.
std::vector<RaterItem> BuildRaterItems(
    const std::vector<std::string>& ids,
    const std::vector<metrics::ScoreRecord>& scores,
    const dataset::DatasetManifest& manifest);
Json RaterItemsToJson(const std::vector<RaterItem>& items);
std::vector<RaterItem> RaterItemsFromJson(const Json& value);

// Mean rating per sample across raters.
std::map<std::string, double> MeanHumanRatings(
    const std::vector<RatingRecord>& ratings);

struct RaterPair {
  std::string rater_a;
  std::string rater_b;
  size_t shared = 0;
  double tau = 0.0;
};

struct InterraterResult {
  double mean_tau = 0.0;
  std::vector<RaterPair> pairs;
};

// Mean Kendall tau-b over all rater pairs, each on the samples both rated.
// Needs >= 2 raters; an intersection with fewer than two samples raises
// Error(kInsufficientData).
InterraterResult InterraterCorrelation(const std::vector<RatingRecord>& ratings);

// Kendall tau-b of each metric against the human consensus. Every metric
// must cover exactly the consensus sample set (Error(kMisaligned)).
std::map<std::string, double> MetricHumanCorrelation(
    const std::map<std::string, double>& human,
    const std::map<std::string, std::map<std::string, double>>& metrics);

// Per-sample metric values for MetricHumanCorrelation from score records:
// judge, bleu, f1, precision, recall, exact_match.
std::map<std::string, std::map<std::string, double>> MetricTables(
    const std::vector<metrics::ScoreRecord>& scores,
    const std::vector<std::string>& sample_ids);

}  // namespace vqaeval::rater

#endif  // VQAEVAL_RATER_RATER_STUDY_H_
