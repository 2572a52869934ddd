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

#include <algorithm>

#include "test_util.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/rater/correlation.h"
#include "vqaeval/rater/rater_study.h"

namespace vqaeval::rater {
namespace {

using ::vqaeval::testing::LoadOracle;
using ::vqaeval::testing::TempDir;

// O(n^2) tau-b straight from the pair definition.
double BruteForceTauB(const std::vector<double>& x,
                      const std::vector<double>& y) {
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, pairs = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0) ++ties_x;
      if (dy == 0) ++ties_y;
      if (dx * dy > 0) ++concordant;
      if (dx * dy < 0) ++discordant;
    }
  }
  return (concordant - discordant) /
         std::sqrt((pairs - ties_x) * (pairs - ties_y));
}

TEST(KendallTest, HandExample) {
  // Pairs: 6 total, one tie in each variable, one joint-free tie pattern.
  const double tau = KendallTauB({1, 2, 2, 3}, {1, 2, 3, 3});
  EXPECT_NEAR(tau, 0.8, 1e-12);
  const TauCounts c = KendallCounts({1, 2, 2, 3}, {1, 2, 3, 3});
  EXPECT_EQ(c.n0, 6);
  EXPECT_EQ(c.n1, 1);
  EXPECT_EQ(c.n2, 1);
  EXPECT_EQ(c.s, 4);
}

TEST(KendallTest, MatchesScipyOracle) {
  const Json oracle = LoadOracle("correlation_oracle.json");
  for (const Json& c : oracle) {
    const auto x = c["x"].get<std::vector<double>>();
    const auto y = c["y"].get<std::vector<double>>();
    EXPECT_NEAR(KendallTauB(x, y), c["tau_b"].get<double>(), 1e-12);
    EXPECT_NEAR(SpearmanRho(x, y), c["spearman"].get<double>(), 1e-12);
  }
}

TEST(KendallTest, MatchesBruteForceWithHeavyTies) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng.UniformIndex(60);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(1 + rng.UniformIndex(5));
      y[i] = static_cast<double>(rng.UniformIndex(3));
    }
    const double brute = BruteForceTauB(x, y);
    if (!std::isfinite(brute)) {
      EXPECT_ERROR_CODE(KendallTauB(x, y), ErrorCode::kDegenerate);
      continue;
    }
    EXPECT_NEAR(KendallTauB(x, y), brute, 1e-12) << "trial " << trial;
  }
}

TEST(KendallTest, Properties) {
  const std::vector<double> x = {3, 1, 4, 1, 5, 9, 2, 6};
  std::vector<double> y = {2, 7, 1, 8, 2, 8, 1, 8};
  EXPECT_DOUBLE_EQ(KendallTauB(x, y), KendallTauB(y, x));
  EXPECT_NEAR(KendallTauB(x, x), 1.0, 1e-15);
  std::vector<double> negated = x;
  for (double& v : negated) v = -v;
  EXPECT_NEAR(KendallTauB(x, negated), -1.0, 1e-15);
  EXPECT_ERROR_CODE(KendallTauB({1}, {1}), ErrorCode::kInsufficientData);
  EXPECT_ERROR_CODE(KendallTauB({1, 2}, {1, 2, 3}), ErrorCode::kMisaligned);
  EXPECT_ERROR_CODE(KendallTauB({1, 1, 1}, {1, 2, 3}), ErrorCode::kDegenerate);
}

TEST(SpearmanTest, AverageRanks) {
  EXPECT_EQ(AverageRanks({10, 20, 20, 5}),
            (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_NEAR(SpearmanRho({1, 2, 3, 4}, {10, 20, 30, 45}), 1.0, 1e-15);
  EXPECT_NEAR(Pearson({1, 2, 3}, {2, 4, 6}), 1.0, 1e-15);
  EXPECT_ERROR_CODE(Pearson({1, 1}, {1, 2}), ErrorCode::kDegenerate);
}

TEST(RatingsCsvTest, RoundTripAndValidation) {
  const std::vector<RatingRecord> ratings = {
      {"r1", "s1", 4, "2026-01-31T12:00:00Z"},
      {"r1", "s,2", 1, "2026-01-31T12:00:05Z"},
      {"r2", "s1", 5, "2026-01-31T12:01:00Z"}};
  TempDir dir;
  WriteRatings(dir / "ratings.csv", ratings);
  EXPECT_EQ(ReadRatings(dir / "ratings.csv"), ratings);
  const std::string header = std::string(kRatingsHeader) + "\n";
  EXPECT_ERROR_CODE(ParseRatingsCsv("r1,s1,4,2026-01-31T12:00:00Z\n"),
                    ErrorCode::kValidation);
  EXPECT_ERROR_CODE(ParseRatingsCsv(header + "r1,s1,6,2026-01-31T12:00:00Z\n"),
                    ErrorCode::kValidation);
  EXPECT_ERROR_CODE(ParseRatingsCsv(header + "r1,s1,4\n"),
                    ErrorCode::kValidation);
  EXPECT_ERROR_CODE(ParseRatingsCsv(header + "r1,s1,4,yesterday\n"),
                    ErrorCode::kValidation);
  EXPECT_ERROR_CODE(ParseRatingsCsv(header +
                                    "r1,s1,4,2026-01-31T12:00:00Z\n"
                                    "r1,s1,2,2026-01-31T12:00:09Z\n"),
                    ErrorCode::kConflict);
  EXPECT_TRUE(ParseRatingsCsv(header).empty());
  EXPECT_TRUE(IsIsoTimestamp(UtcTimestamp()));
}

metrics::ScoreRecord Open(std::string id, bool exact,
                          dataset::AnswerClass c = dataset::AnswerClass::kOpen) {
  metrics::ScoreRecord r;
  r.sample_id = std::move(id);
  r.answer_class = c;
  r.exact_match = exact;
  return r;
}

TEST(SampleRaterSetTest, MatchesIndependentReimplementation) {
  const Json oracle = LoadOracle("rater_sampling_oracle.json");
  std::vector<metrics::ScoreRecord> scores;
  for (const Json& r : oracle["records"]) {
    scores.push_back(Open(r["sample_id"], r["exact_match"],
                          dataset::ParseAnswerClass(
                              r["answer_class"].get<std::string>())));
  }
  std::reverse(scores.begin(), scores.end());  // Input order does not matter.
  const std::vector<std::string> selected = SampleRaterSet(
      scores, oracle["n"].get<size_t>(), oracle["seed"].get<uint64_t>());
  EXPECT_EQ(selected, oracle["selected"].get<std::vector<std::string>>());
}

TEST(SampleRaterSetTest, EligibilityAndErrors) {
  std::vector<metrics::ScoreRecord> scores = {
      Open("a", false), Open("b", true), Open("c", false),
      Open("d", false, dataset::AnswerClass::kClosedBinary)};
  EXPECT_EQ(SampleRaterSet(scores, 2, 1), (std::vector<std::string>{"a", "c"}));
  EXPECT_ERROR_CODE(SampleRaterSet(scores, 3, 1), ErrorCode::kInsufficientData);
  scores.push_back(Open("a", false));
  EXPECT_ERROR_CODE(SampleRaterSet(scores, 1, 1), ErrorCode::kMisaligned);
}

TEST(SampleRaterSetTest, EachIdEquallyLikely) {
  std::vector<metrics::ScoreRecord> scores;
  for (int i = 0; i < 10; ++i) scores.push_back(Open("s" + std::to_string(i), false));
  std::map<std::string, int> hits;
  for (uint64_t seed = 0; seed < 3000; ++seed) {
    for (const std::string& id : SampleRaterSet(scores, 3, seed)) ++hits[id];
  }
  // Each id is chosen with probability 0.3: expected 900, sd about 25.
  for (const auto& [id, count] : hits) EXPECT_NEAR(count, 900, 110) << id;
}

TEST(RaterItemsTest, BuildAndJsonRoundTrip) {
  dataset::DatasetManifest manifest;
  dataset::VqaSample s;
  s.sample_id = "x";
  s.question = "Where?";
  s.answer = "left";
  s.image_ref = "images/x.png";
  manifest.samples.push_back(s);
  metrics::ScoreRecord r = Open("x", false);
  r.ground_truth = "left";
  r.prediction = "right";
  r.context.model_id = "secret-model";
  const std::vector<RaterItem> items = BuildRaterItems({"x"}, {r}, manifest);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].prediction, "right");
  EXPECT_EQ(items[0].image_ref, "images/x.png");
  const Json json = RaterItemsToJson(items);
  EXPECT_EQ(json.dump().find("secret-model"), std::string::npos);
  const std::vector<RaterItem> back = RaterItemsFromJson(json);
  EXPECT_EQ(back[0].question, "Where?");
  EXPECT_ERROR_CODE(BuildRaterItems({"y"}, {r}, manifest), ErrorCode::kNotFound);
  EXPECT_ERROR_CODE(RaterItemsFromJson(Json{{"items", 3}}), ErrorCode::kParse);
}

TEST(InterraterTest, PairwiseOnSharedSamples) {
  const std::string t = "2026-01-01T00:00:00Z";
  const std::vector<RatingRecord> ratings = {
      {"a", "1", 1, t}, {"a", "2", 2, t}, {"a", "3", 3, t}, {"a", "4", 4, t},
      {"b", "1", 1, t}, {"b", "2", 2, t}, {"b", "3", 4, t}, {"b", "4", 3, t},
      {"c", "2", 5, t}, {"c", "3", 4, t}, {"c", "4", 3, t}};
  const InterraterResult r = InterraterCorrelation(ratings);
  ASSERT_EQ(r.pairs.size(), 3u);
  EXPECT_EQ(r.pairs[0].rater_a, "a");
  EXPECT_EQ(r.pairs[0].rater_b, "b");
  EXPECT_EQ(r.pairs[0].shared, 4u);
  EXPECT_NEAR(r.pairs[0].tau, 4.0 / 6.0, 1e-12);
  EXPECT_EQ(r.pairs[1].shared, 3u);
  EXPECT_NEAR(r.pairs[1].tau, -1.0, 1e-12);
  EXPECT_NEAR(r.pairs[2].tau, -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.mean_tau, (4.0 / 6.0 - 1.0 - 1.0 / 3.0) / 3.0, 1e-12);
  EXPECT_ERROR_CODE(InterraterCorrelation({{"a", "1", 1, t}}),
                    ErrorCode::kInsufficientData);
  EXPECT_ERROR_CODE(
      InterraterCorrelation({{"a", "1", 1, t}, {"b", "2", 1, t}}),
      ErrorCode::kInsufficientData);
}

TEST(MetricHumanTest, ConsensusCorrelation) {
  const std::string t = "2026-01-01T00:00:00Z";
  const std::map<std::string, double> human = MeanHumanRatings(
      {{"a", "1", 1, t}, {"b", "1", 2, t}, {"a", "2", 4, t}, {"a", "3", 5, t}});
  EXPECT_DOUBLE_EQ(human.at("1"), 1.5);
  std::map<std::string, std::map<std::string, double>> tables;
  tables["good"] = {{"1", 0.1}, {"2", 0.5}, {"3", 0.9}};
  tables["bad"] = {{"1", 0.9}, {"2", 0.5}, {"3", 0.1}};
  const auto tau = MetricHumanCorrelation(human, tables);
  EXPECT_NEAR(tau.at("good"), 1.0, 1e-12);
  EXPECT_NEAR(tau.at("bad"), -1.0, 1e-12);
  tables["short"] = {{"1", 0.1}, {"2", 0.5}};
  EXPECT_ERROR_CODE(MetricHumanCorrelation(human, tables),
                    ErrorCode::kMisaligned);
}

TEST(MetricTablesTest, PerSampleValues) {
  metrics::ScoreRecord a = Open("a", true);
  a.judge_score = 5;
  a.bleu = 1.0;
  a.f1 = 1.0;
  metrics::ScoreRecord b = Open("b", false);
  b.judge_score = 2;
  b.bleu = 0.25;
  const auto tables = MetricTables({a, b}, {"a", "b"});
  EXPECT_EQ(tables.at("judge").at("a"), 5.0);
  EXPECT_EQ(tables.at("exact_match").at("b"), 0.0);
  EXPECT_EQ(tables.at("bleu").at("b"), 0.25);
  EXPECT_EQ(tables.size(), 6u);
}

}  // namespace
}  // namespace vqaeval::rater
