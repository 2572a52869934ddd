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

#include "vqaeval/rater/rater_study.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

#include "vqaeval/common/error.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/rater/correlation.h"

namespace vqaeval::rater {

std::string RatingToCsvLine(const RatingRecord& r) {
  return CsvEscape(r.rater_id) + "," + CsvEscape(r.sample_id) + "," +
         std::to_string(r.score) + "," + CsvEscape(r.timestamp);
}

bool IsIsoTimestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS followed by an optional fraction and a zone.
  if (text.size() < 19) return false;
  static constexpr char kShape[] = "dddd-dd-ddTdd:dd:dd";
  for (size_t i = 0; i < 19; ++i) {
    const char want = kShape[i];
    const char c = text[i];
    if (want == 'd' ? !std::isdigit(static_cast<unsigned char>(c)) : c != want) {
      return false;
    }
  }
  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest.front() == '.') {
    size_t i = 1;
    while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) {
      ++i;
    }
    if (i == 1) return false;
    rest.remove_prefix(i);
  }
  if (rest.empty() || rest == "Z") return true;
  return rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') &&
         std::isdigit(static_cast<unsigned char>(rest[1])) &&
         std::isdigit(static_cast<unsigned char>(rest[2])) && rest[3] == ':' &&
         std::isdigit(static_cast<unsigned char>(rest[4])) &&
         std::isdigit(static_cast<unsigned char>(rest[5]));
}

std::vector<RatingRecord> ParseRatingsCsv(std::string_view text) {
  std::vector<RatingRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (Trim(line).empty()) continue;
    const std::string where = "ratings line " + std::to_string(number);
    if (!header) {
      if (Trim(line) != kRatingsHeader) {
        throw Error(ErrorCode::kValidation,
                    where + ": expected header '" + kRatingsHeader + "'");
      }
      header = true;
      continue;
    }
    const std::vector<std::string> fields = ParseCsvLine(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kValidation, where + ": expected 4 fields");
    }
    RatingRecord r;
    r.rater_id = fields[0];
    r.sample_id = fields[1];
    const std::optional<long long> score = ParseInteger(fields[2]);
    if (!score || *score < 1 || *score > 5) {
      throw Error(ErrorCode::kValidation,
                  where + ": score must be an integer in 1..5");
    }
    r.score = static_cast<int>(*score);
    r.timestamp = fields[3];
    if (r.rater_id.empty() || r.sample_id.empty()) {
      throw Error(ErrorCode::kValidation, where + ": empty id");
    }
    if (!IsIsoTimestamp(r.timestamp)) {
      throw Error(ErrorCode::kValidation, where + ": timestamp not ISO-8601");
    }
    if (!seen.emplace(r.rater_id, r.sample_id).second) {
      throw Error(ErrorCode::kConflict, where + ": duplicate rating of '" +
                                            r.sample_id + "' by '" +
                                            r.rater_id + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RatingRecord> ReadRatings(const std::filesystem::path& path) {
  return ParseRatingsCsv(ReadFile(path));
}

void WriteRatings(const std::filesystem::path& path,
                  const std::vector<RatingRecord>& ratings) {
  std::string out = std::string(kRatingsHeader) + "\n";
  for (const RatingRecord& r : ratings) out += RatingToCsvLine(r) + "\n";
  WriteFileAtomic(path, out);
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::vector<std::string> SampleRaterSet(
    const std::vector<metrics::ScoreRecord>& scores, size_t n, uint64_t seed) {
  std::vector<std::string> eligible;
  std::set<std::string> all_ids;
  for (const metrics::ScoreRecord& r : scores) {
    if (!all_ids.insert(r.sample_id).second) {
      throw Error(ErrorCode::kMisaligned,
                  "rater sampling expects one score per sample; '" +
                      r.sample_id + "' repeats");
    }
    if (r.answer_class == dataset::AnswerClass::kOpen && !r.exact_match) {
      eligible.push_back(r.sample_id);
    }
  }
  if (eligible.size() < n) {
    throw Error(ErrorCode::kInsufficientData,
                "only " + std::to_string(eligible.size()) +
                    " eligible records for a rater set of " +
                    std::to_string(n));
  }
  std::sort(eligible.begin(), eligible.end());
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + rng.UniformIndex(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(n);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

std::vector<RaterItem> BuildRaterItems(
    const std::vector<std::string>& ids,
    const std::vector<metrics::ScoreRecord>& scores,
    const dataset::DatasetManifest& manifest) {
  std::map<std::string, const metrics::ScoreRecord*> by_id;
  for (const metrics::ScoreRecord& r : scores) by_id[r.sample_id] = &r;
  const auto index = manifest.IndexById();
  std::vector<RaterItem> items;
  for (const std::string& id : ids) {
    auto score = by_id.find(id);
    auto sample = index.find(id);
    if (score == by_id.end() || sample == index.end()) {
      throw Error(ErrorCode::kNotFound, "rater item '" + id + "' unresolved");
    }
    const dataset::VqaSample& s = manifest.samples[sample->second];
    items.push_back({id, s.question, s.answer, score->second->prediction,
                     s.image_ref});
  }
  return items;
}

Json RaterItemsToJson(const std::vector<RaterItem>& items) {
  Json out = Json::array();
  for (const RaterItem& item : items) {
    out.push_back({{"sample_id", item.sample_id},
                   {"question", item.question},
                   {"ground_truth", item.ground_truth},
                   {"prediction", item.prediction},
                   {"image_ref", item.image_ref}});
  }
  return Json{{"items", out}};
}

std::vector<RaterItem> RaterItemsFromJson(const Json& value) {
  std::vector<RaterItem> items;
  try {
    for (const Json& item : value.at("items")) {
      items.push_back({item.at("sample_id").get<std::string>(),
                       item.at("question").get<std::string>(),
                       item.at("ground_truth").get<std::string>(),
                       item.at("prediction").get<std::string>(),
                       item.value("image_ref", std::string())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed rater set: ") + e.what());
  }
  return items;
}

std::map<std::string, double> MeanHumanRatings(
    const std::vector<RatingRecord>& ratings) {
  std::map<std::string, std::pair<double, int>> sums;
  for (const RatingRecord& r : ratings) {
    sums[r.sample_id].first += r.score;
    ++sums[r.sample_id].second;
  }
  std::map<std::string, double> out;
  for (const auto& [id, sum] : sums) out[id] = sum.first / sum.second;
  return out;
}

InterraterResult InterraterCorrelation(
    const std::vector<RatingRecord>& ratings) {
  std::map<std::string, std::map<std::string, double>> by_rater;
  for (const RatingRecord& r : ratings) {
    by_rater[r.rater_id][r.sample_id] = r.score;
  }
  if (by_rater.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "interrater correlation needs at least two raters");
  }
  InterraterResult result;
  double sum = 0.0;
  for (auto a = by_rater.begin(); a != by_rater.end(); ++a) {
    for (auto b = std::next(a); b != by_rater.end(); ++b) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& [id, score] : a->second) {
        auto it = b->second.find(id);
        if (it == b->second.end()) continue;
        x.push_back(score);
        y.push_back(it->second);
      }
      if (x.size() < 2) {
        throw Error(ErrorCode::kInsufficientData,
                    "raters '" + a->first + "' and '" + b->first +
                        "' share fewer than two samples");
      }
      const double tau = KendallTauB(x, y);
      result.pairs.push_back({a->first, b->first, x.size(), tau});
      sum += tau;
    }
  }
  result.mean_tau = sum / result.pairs.size();
  return result;
}

std::map<std::string, double> MetricHumanCorrelation(
    const std::map<std::string, double>& human,
    const std::map<std::string, std::map<std::string, double>>& metrics) {
  std::map<std::string, double> out;
  for (const auto& [name, values] : metrics) {
    if (values.size() != human.size()) {
      throw Error(ErrorCode::kMisaligned,
                  "metric '" + name + "' does not cover the rated samples");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [id, rating] : human) {
      auto it = values.find(id);
      if (it == values.end()) {
        throw Error(ErrorCode::kMisaligned,
                    "metric '" + name + "' lacks sample '" + id + "'");
      }
      x.push_back(rating);
      y.push_back(it->second);
    }
    out[name] = KendallTauB(x, y);
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> MetricTables(
    const std::vector<metrics::ScoreRecord>& scores,
    const std::vector<std::string>& sample_ids) {
  const std::set<std::string> wanted(sample_ids.begin(), sample_ids.end());
  std::map<std::string, std::map<std::string, double>> out;
  for (const metrics::ScoreRecord& r : scores) {
    if (wanted.count(r.sample_id) == 0) continue;
    if (!r.Failed()) out["judge"][r.sample_id] = r.Value();
    out["bleu"][r.sample_id] = r.bleu;
    out["f1"][r.sample_id] = r.f1;
    out["precision"][r.sample_id] = r.precision;
    out["recall"][r.sample_id] = r.recall;
    out["exact_match"][r.sample_id] = r.exact_match ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace vqaeval::rater
