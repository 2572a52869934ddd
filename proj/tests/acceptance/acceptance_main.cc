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

// Acceptance checks. With a criterion name as the only argument runs that
// criterion; without arguments runs all of them. Prints one
// "PASS|FAIL <name>: <detail>" line per criterion and exits nonzero when any
// failed.
//
// Split and unique-question checks use the official corpora when
// VQAEVAL_CORPUS_SLAKE, VQAEVAL_CORPUS_OVQA or VQAEVAL_CORPUS_MIMIC point at
// their annotation directories, and the bundled fixture otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vqaeval/baselines/baselines.h"
#include "vqaeval/common/error.h"
#include "vqaeval/common/io.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/corruption/corruption.h"
#include "vqaeval/dataset/ingest.h"
#include "vqaeval/metrics/judge.h"
#include "vqaeval/metrics/mock_judge_client.h"
#include "vqaeval/metrics/text_metrics.h"
#include "vqaeval/pipeline/config.h"
#include "vqaeval/pipeline/pipeline.h"
#include "vqaeval/pipeline/report.h"
#include "vqaeval/rater/correlation.h"
#include "vqaeval/split/builtin_shifts.h"
#include "vqaeval/split/split.h"
#include "vqaeval/stats/bootstrap.h"
#include "vqaeval/stats/hypothesis.h"
#include "vqaeval/stats/robustness.h"

namespace vqaeval::acceptance {
namespace {

namespace fs = std::filesystem;
using dataset::AnswerClass;
using dataset::BaseSplit;
using dataset::DatasetManifest;
using dataset::VqaSample;
using metrics::ScoreRecord;

fs::path DataPath(const std::string& relative) {
  return fs::path(VQAEVAL_TEST_DATA_DIR) / relative;
}

class TempDir {
 public:
  TempDir() {
    std::random_device device;
    path_ = fs::temp_directory_path() /
            ("vqaeval-acceptance-" + std::to_string(device()) + "-" +
             std::to_string(device()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    fs::remove_all(path_, ignored);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Collects failed checks for one criterion.
class Checker {
 public:
  void Expect(bool condition, const std::string& what) {
    ++checks_;
    if (!condition && failures_.size() < 8) failures_.push_back(what);
    if (!condition) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  size_t checks() const { return checks_; }
  std::string Failures() const {
    std::string out = std::to_string(failed_) + " of " +
                      std::to_string(checks_) + " checks failed";
    for (const std::string& f : failures_) out += "; " + f;
    if (failed_ > failures_.size()) out += "; ...";
    return out;
  }

 private:
  size_t checks_ = 0;
  size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome Finish(const Checker& checker, const std::string& summary) {
  if (checker.ok()) return {true, summary};
  return {false, summary + " | " + checker.Failures()};
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fixed(double value, int decimals = 3) {
  return FormatFixed(value, decimals);
}

const char* CorpusEnv(dataset::Adapter adapter) {
  switch (adapter) {
    case dataset::Adapter::kSlake:
      return "VQAEVAL_CORPUS_SLAKE";
    case dataset::Adapter::kOvqa:
      return "VQAEVAL_CORPUS_OVQA";
    case dataset::Adapter::kMimic:
      return "VQAEVAL_CORPUS_MIMIC";
    case dataset::Adapter::kNative:
      break;
  }
  return "";
}

std::optional<fs::path> CorpusRoot(dataset::Adapter adapter) {
  const char* value = std::getenv(CorpusEnv(adapter));
  if (value == nullptr || *value == '\0') return std::nullopt;
  return fs::path(value);
}

DatasetManifest Fixture() {
  return dataset::LoadDataset(dataset::Adapter::kNative,
                              DataPath("fixture/corpus"));
}

std::vector<VqaSample> SamplesOf(const DatasetManifest& manifest,
                                 BaseSplit split) {
  std::vector<VqaSample> out;
  for (const VqaSample& s : manifest.samples) {
    if (manifest.base_split.at(s.sample_id) == split) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// split_reproduction

struct PublishedSplit {
  dataset::Adapter adapter;
  std::string shift;
  size_t train_iid;
  size_t test_iid;
  size_t test_ood;
};

const std::vector<PublishedSplit>& PublishedSplits() {
  static const std::vector<PublishedSplit> kSplits = {
      {dataset::Adapter::kSlake, "slake_modality", 3448, 689, 1779},
      {dataset::Adapter::kSlake, "slake_question_type", 4581, 994, 56},
      {dataset::Adapter::kOvqa, "ovqa_body_part", 8755, 1044, 5350},
      {dataset::Adapter::kOvqa, "ovqa_question_type", 11924, 1420, 237},
      {dataset::Adapter::kMimic, "mimic_gender", 147790, 7277, 6120},
      {dataset::Adapter::kMimic, "mimic_ethnicity", 171593, 8101, 3713},
      {dataset::Adapter::kMimic, "mimic_age", 155941, 6686, 2076},
  };
  return kSplits;
}

// Condition semantics restated from scratch for the brute-force route.
bool BruteMatches(const split::Condition& c, const VqaSample& s) {
  const std::string value = ToLowerAscii(s.Meta(c.key));
  switch (c.op) {
    case split::ConditionOp::kEquals:
      return value == ToLowerAscii(c.value);
    case split::ConditionOp::kNotEquals:
      return value != ToLowerAscii(c.value);
    case split::ConditionOp::kInSet:
      for (const std::string& v : c.values) {
        if (value == ToLowerAscii(v)) return true;
      }
      return false;
    default:
      return false;
  }
}

bool BruteAll(const split::Conjunction& clause, const VqaSample& s) {
  for (const split::Condition& c : clause) {
    if (!BruteMatches(c, s)) return false;
  }
  return true;
}

split::SplitManifest BruteSplit(const DatasetManifest& manifest,
                                const split::ShiftSpec& spec) {
  split::SplitManifest out;
  std::vector<std::string> train_ood;
  for (const VqaSample& s : manifest.samples) {
    bool excluded = false;
    for (const split::Conjunction& clause : spec.exclude) {
      excluded = excluded || BruteAll(clause, s);
    }
    if (excluded) continue;
    const bool ood = BruteAll(spec.ood, s);
    switch (manifest.base_split.at(s.sample_id)) {
      case BaseSplit::kTrain:
        (ood ? train_ood : out.train_iid).push_back(s.sample_id);
        break;
      case BaseSplit::kValidate:
        out.validate.push_back(s.sample_id);
        break;
      case BaseSplit::kTest:
        (ood ? out.test_ood : out.test_iid).push_back(s.sample_id);
        break;
    }
  }
  if (spec.merge_ood_train_into_test) {
    out.test_ood.insert(out.test_ood.end(), train_ood.begin(), train_ood.end());
  }
  return out;
}

bool SameLists(const split::SplitManifest& a, const split::SplitManifest& b) {
  return a.train_iid == b.train_iid && a.validate == b.validate &&
         a.test_iid == b.test_iid && a.test_ood == b.test_ood;
}

Outcome SplitReproduction() {
  const auto start = std::chrono::steady_clock::now();
  Checker checker;
  std::vector<std::string> notes;

  // Official corpora, when available.
  std::map<dataset::Adapter, DatasetManifest> corpora;
  for (const PublishedSplit& published : PublishedSplits()) {
    const std::optional<fs::path> root = CorpusRoot(published.adapter);
    if (!root) continue;
    if (!corpora.contains(published.adapter)) {
      corpora.emplace(published.adapter,
                      dataset::LoadDataset(published.adapter, *root));
    }
    const split::SplitManifest built = split::BuildSplit(
        corpora.at(published.adapter),
        *split::FindBuiltinShift(published.shift));
    const split::CountValidation v = split::ValidateCounts(
        built, {published.train_iid, published.test_iid, published.test_ood,
                std::nullopt});
    checker.Expect(v.pass, published.shift + ": " + v.Describe());
    notes.push_back(published.shift);
  }

  // Fixture: hand counts of the two bundled shift specs.
  const DatasetManifest fixture = Fixture();
  const struct {
    const char* file;
    split::ExpectedCounts counts;
  } kFixtureShifts[] = {
      {"fixture/shifts/fixture_modality.json", {4, 3, 3, 2}},
      {"fixture/shifts/fixture_question_type.toml", {5, 3, 1, 2}},
  };
  for (const auto& [file, counts] : kFixtureShifts) {
    const split::ShiftSpec spec = split::LoadShiftSpec(DataPath(file));
    const split::SplitManifest built = split::BuildSplit(fixture, spec);
    const split::CountValidation v = split::ValidateCounts(built, counts);
    checker.Expect(v.pass, std::string(file) + ": " + v.Describe());
    checker.Expect(SameLists(built, BruteSplit(fixture, spec)),
                   std::string(file) + ": differs from brute force");
  }

  // Random predicate specs against the brute-force restatement.
  const std::map<std::string, std::vector<std::string>> values = {
      {"modality", {"CT", "MRI", "x-ray"}},
      {"body_part", {"Chest", "Head", "Abdomen"}},
      {"content_type",
       {"Organ", "Position", "Abnormality", "Modality", "Size"}}};
  std::vector<std::string> keys;
  for (const auto& [key, unused] : values) keys.push_back(key);
  Rng rng(20240601);
  auto random_condition = [&] {
    split::Condition c;
    c.key = keys[rng.UniformIndex(keys.size())];
    const std::vector<std::string>& pool = values.at(c.key);
    const double u = rng.Uniform();
    if (u < 0.5) {
      c.op = split::ConditionOp::kEquals;
      c.value = pool[rng.UniformIndex(pool.size())];
    } else if (u < 0.75) {
      c.op = split::ConditionOp::kNotEquals;
      c.value = pool[rng.UniformIndex(pool.size())];
    } else {
      c.op = split::ConditionOp::kInSet;
      for (const std::string& v : pool) {
        if (rng.Uniform() < 0.5) c.values.push_back(v);
      }
      if (c.values.empty()) c.values.push_back(pool.front());
    }
    if (rng.Uniform() < 0.2) {
      c.value = ToLowerAscii(c.value);
    }
    return c;
  };
  size_t trials = 0;
  size_t empty_ood = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    split::ShiftSpec spec;
    spec.name = "random_" + std::to_string(trial);
    const size_t terms = 1 + rng.UniformIndex(2);
    for (size_t i = 0; i < terms; ++i) spec.ood.push_back(random_condition());
    if (rng.Uniform() < 0.4) spec.exclude.push_back({random_condition()});
    spec.merge_ood_train_into_test = rng.Uniform() < 0.5;
    const split::SplitManifest expected = BruteSplit(fixture, spec);
    ++trials;
    if (expected.test_ood.empty()) {
      ++empty_ood;
      bool raised = false;
      try {
        split::BuildSplit(fixture, spec);
      } catch (const Error& e) {
        raised = e.code() == ErrorCode::kInsufficientData;
      }
      checker.Expect(raised, spec.name + ": empty OoD not rejected");
      continue;
    }
    checker.Expect(SameLists(split::BuildSplit(fixture, spec), expected),
                   spec.name + ": differs from brute force");
  }
  const double elapsed = Seconds(start);
  checker.Expect(corpora.size() > 0 || elapsed < 5.0,
                 "fixture run took " + Fixed(elapsed, 2) + " s");

  std::string summary =
      corpora.empty()
          ? "no corpora configured; fixture"
          : "corpora checked (" + Join(notes, ", ") + ") plus fixture";
  summary += " hand counts and " + std::to_string(trials) +
             " random specs match brute force (" + std::to_string(empty_ood) +
             " empty-OoD rejections) in " + Fixed(elapsed, 2) + " s";
  return Finish(checker, summary);
}

// ---------------------------------------------------------------------------
// unique_question_ratio

struct PublishedRatio {
  dataset::Adapter adapter;
  BaseSplit split;
  size_t total;
  size_t unique;
  double ratio;
};

Outcome UniqueQuestionRatio() {
  static const std::vector<PublishedRatio> kPublished = {
      {dataset::Adapter::kMimic, BaseSplit::kTrain, 290031, 132387, 0.46},
      {dataset::Adapter::kSlake, BaseSplit::kTrain, 4866, 579, 0.12},
      {dataset::Adapter::kOvqa, BaseSplit::kTrain, 13492, 960, 0.07},
      {dataset::Adapter::kMimic, BaseSplit::kValidate, 73567, 31148, 0.42},
      {dataset::Adapter::kSlake, BaseSplit::kValidate, 1043, 314, 0.30},
      {dataset::Adapter::kOvqa, BaseSplit::kValidate, 1645, 266, 0.16},
      {dataset::Adapter::kMimic, BaseSplit::kTest, 13793, 7565, 0.55},
      {dataset::Adapter::kSlake, BaseSplit::kTest, 1050, 313, 0.30},
      {dataset::Adapter::kOvqa, BaseSplit::kTest, 1657, 335, 0.20},
  };
  Checker checker;
  size_t corpus_cells = 0;
  std::map<dataset::Adapter, DatasetManifest> corpora;
  for (const PublishedRatio& p : kPublished) {
    const std::optional<fs::path> root = CorpusRoot(p.adapter);
    if (!root) continue;
    if (!corpora.contains(p.adapter)) {
      corpora.emplace(p.adapter, dataset::LoadDataset(p.adapter, *root));
    }
    const dataset::QuestionRatio r =
        dataset::UniqueQuestionRatio(SamplesOf(corpora.at(p.adapter), p.split));
    ++corpus_cells;
    checker.Expect(FormatFixed(r.ratio, 2) == FormatFixed(p.ratio, 2),
                   std::string(dataset::AdapterName(p.adapter)) + "/" +
                       std::string(dataset::BaseSplitName(p.split)) + " " +
                       std::to_string(r.unique) + "/" +
                       std::to_string(r.total) + " vs " +
                       std::to_string(p.unique) + "/" +
                       std::to_string(p.total));
  }

  // Fixture hand counts. train: two CT-scan questions and two organ
  // questions among six; validate and test questions are all distinct.
  const DatasetManifest fixture = Fixture();
  const struct {
    BaseSplit split;
    size_t total;
    size_t unique;
  } kHand[] = {{BaseSplit::kTrain, 6, 4},
               {BaseSplit::kValidate, 2, 2},
               {BaseSplit::kTest, 4, 4}};
  std::vector<std::string> shown;
  for (const auto& [split, total, unique] : kHand) {
    const dataset::QuestionRatio r =
        dataset::UniqueQuestionRatio(SamplesOf(fixture, split));
    const std::string name(dataset::BaseSplitName(split));
    checker.Expect(r.total == total && r.unique == unique &&
                       r.ratio == static_cast<double>(unique) / total,
                   "fixture " + name + " " + std::to_string(r.unique) + "/" +
                       std::to_string(r.total));
    shown.push_back(name + " " + std::to_string(r.unique) + "/" +
                    std::to_string(r.total) + "=" + FormatFixed(r.ratio, 2));
  }
  const std::string summary =
      (corpus_cells == 0 ? std::string("no corpora configured; ")
                         : std::to_string(corpus_cells) +
                               " corpus cells match to 2 decimals; ") +
      "fixture " + Join(shown, ", ");
  return Finish(checker, summary);
}

// ---------------------------------------------------------------------------
// rr_recomputation

Outcome RrRecomputation() {
  const auto start = std::chrono::steady_clock::now();
  const std::string text = ReadFile(DataPath("robustness_tables.csv"));
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  const std::vector<std::string> header = ParseCsvLine(line);
  auto column = [&](const std::string& name) {
    return static_cast<size_t>(
        std::find(header.begin(), header.end(), name) - header.begin());
  };
  const size_t c_table = column("table"), c_p_iid = column("p_iid"),
               c_p_ood = column("p_ood"), c_rr = column("rr");
  Checker checker;
  size_t cells = 0;
  double worst = 0.0;
  while (std::getline(lines, line)) {
    if (Trim(line).empty()) continue;
    const std::vector<std::string> f = ParseCsvLine(line);
    const double p_iid = *ParseDouble(f[c_p_iid]);
    const double p_ood = *ParseDouble(f[c_p_ood]);
    const double printed = *ParseDouble(f[c_rr]);
    ++cells;
    const double rr = stats::RelativeRobustness(p_iid, p_ood);
    const double diff = std::fabs(rr - printed);
    worst = std::max(worst, diff);
    checker.Expect(diff <= 0.01 + 1e-9,
                   "table " + f[c_table] + " (" + f[c_p_iid] + ", " +
                       f[c_p_ood] + ") -> " + Fixed(rr, 4) + " printed " +
                       f[c_rr]);
  }
  const double elapsed = Seconds(start);
  checker.Expect(elapsed < 1.0, "took " + Fixed(elapsed, 3) + " s");
  checker.Expect(std::fabs(stats::RelativeRobustness(0.85, 0.64) - 0.75) <=
                     0.01,
                 "(0.85, 0.64)");
  checker.Expect(std::fabs(stats::RelativeRobustness(0.76, 0.08) - 0.10) <=
                     0.01,
                 "(0.76, 0.08)");
  return Finish(checker, std::to_string(cells) + " transcribed cells, max |RR - printed| = " +
                             Fixed(worst, 4) + ", " + Fixed(elapsed, 3) + " s");
}

// ---------------------------------------------------------------------------
// hybrid_metric_shortcut

Outcome HybridMetricShortcut() {
  const DatasetManifest fixture = Fixture();
  std::vector<metrics::JudgeItem> items;
  for (const VqaSample& s : fixture.samples) {
    metrics::JudgeItem item;
    item.sample = &s;
    item.prediction.sample_id = s.sample_id;
    item.prediction.model_id = "oracle";
    item.prediction.prediction = s.answer;
    item.context.dataset = "fixture";
    item.context.split = "test_iid";
    item.context.model_id = "oracle";
    items.push_back(std::move(item));
  }
  metrics::JudgeConfig config;
  config.parallelism = 3;
  metrics::MockJudgeClient client;
  const std::vector<ScoreRecord> scores =
      metrics::EvaluateBatch(items, config, client);
  Checker checker;
  checker.Expect(client.calls() == 0,
                 "judge called " + std::to_string(client.calls()) + " times");
  size_t open = 0, closed = 0;
  for (const ScoreRecord& r : scores) {
    checker.Expect(!r.Failed(), r.sample_id + " failed");
    checker.Expect(r.judge_path == metrics::JudgePath::kShortcut &&
                       r.judge_calls == 0,
                   r.sample_id + " left the shortcut");
    if (r.answer_class == AnswerClass::kOpen) {
      ++open;
      checker.Expect(r.judge_score == 5, r.sample_id + " open score != 5");
    } else {
      ++closed;
      checker.Expect(r.judge_correct == true, r.sample_id + " not correct");
    }
  }
  checker.Expect(scores.size() == fixture.samples.size(), "record count");
  return Finish(checker, std::to_string(open) + " open scored 5, " +
                             std::to_string(closed) +
                             " closed correct, counting mock saw " +
                             std::to_string(client.calls()) + " calls");
}

// ---------------------------------------------------------------------------
// kendall_spearman

rater::TauCounts BruteTauCounts(const std::vector<double>& x,
                                const std::vector<double>& y) {
  rater::TauCounts c;
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      ++c.n0;
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      if (sx == 0) ++c.n1;
      if (sy == 0) ++c.n2;
      c.s += sx * sy;
    }
  }
  return c;
}

std::vector<double> BruteRanks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    size_t less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    ranks[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return ranks;
}

double BrutePearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Outcome KendallSpearman() {
  Checker checker;
  Rng rng(7);
  size_t compared = 0, degenerate = 0;
  double worst_rho = 0.0;
  // Runs until 1000 non-constant pairs were compared; constant draws are
  // checked for rejection on the way.
  for (int trial = 0; compared < 1000; ++trial) {
    const size_t n = 2 + rng.UniformIndex(49);
    // Small value ranges force ties.
    const size_t range_x = 2 + rng.UniformIndex(6);
    const size_t range_y = 2 + rng.UniformIndex(6);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.UniformIndex(range_x));
      y[i] = static_cast<double>(rng.UniformIndex(range_y)) * 0.5;
    }
    const rater::TauCounts brute = BruteTauCounts(x, y);
    const rater::TauCounts fast = rater::KendallCounts(x, y);
    const std::string label = "trial " + std::to_string(trial);
    checker.Expect(brute.n0 == fast.n0 && brute.n1 == fast.n1 &&
                       brute.n2 == fast.n2 && brute.s == fast.s,
                   label + ": counts differ");
    if (brute.n0 == brute.n1 || brute.n0 == brute.n2) {
      ++degenerate;
      bool raised = false;
      try {
        rater::KendallTauB(x, y);
      } catch (const Error& e) {
        raised = e.code() == ErrorCode::kDegenerate;
      }
      checker.Expect(raised, label + ": constant input accepted");
      continue;
    }
    const double oracle =
        static_cast<double>(brute.s) /
        std::sqrt(static_cast<double>(brute.n0 - brute.n1) *
                  static_cast<double>(brute.n0 - brute.n2));
    checker.Expect(rater::KendallTauB(x, y) == oracle, label + ": tau-b");
    const double rho = BrutePearson(BruteRanks(x), BruteRanks(y));
    const double diff = std::fabs(rater::SpearmanRho(x, y) - rho);
    worst_rho = std::max(worst_rho, diff);
    checker.Expect(diff <= 1e-12, label + ": spearman off by " +
                                      std::to_string(diff));
    ++compared;
  }
  std::ostringstream rho;
  rho << worst_rho;
  return Finish(checker, std::to_string(compared) +
                             " tied vectors: tau-b identical to the O(n^2) "
                             "oracle, max Spearman diff " +
                             rho.str() + "; " + std::to_string(degenerate) +
                             " constant inputs rejected");
}

// ---------------------------------------------------------------------------
// welch_anova

std::vector<double> Doubles(const Json& value) {
  return value.get<std::vector<double>>();
}

Outcome WelchAnova() {
  const Json oracle = ReadJsonFile(DataPath("oracles/stats_oracle.json"));
  Checker checker;
  double worst = 0.0;
  auto close = [&](double got, double want, const std::string& what) {
    const double diff = std::fabs(got - want);
    worst = std::max(worst, diff);
    checker.Expect(diff <= 1e-6, what + " " + std::to_string(got) + " vs " +
                                     std::to_string(want));
  };
  size_t i = 0;
  for (const Json& c : oracle.at("welch")) {
    const stats::WelchResult r =
        stats::WelchTTest(Doubles(c.at("a")), Doubles(c.at("b")));
    const std::string label = "welch " + std::to_string(i++);
    close(r.t, c.at("t"), label + " t");
    close(r.df, c.at("df"), label + " df");
    close(r.p, c.at("p"), label + " p");
  }
  const size_t welch_cases = i;
  i = 0;
  for (const Json& c : oracle.at("anova")) {
    std::vector<std::vector<double>> groups;
    for (const Json& g : c.at("groups")) groups.push_back(Doubles(g));
    const stats::AnovaResult r = stats::OneWayAnova(groups);
    const std::string label = "anova " + std::to_string(i++);
    close(r.f, c.at("f"), label + " F");
    close(r.df_between, c.at("df_between"), label + " df_between");
    close(r.df_within, c.at("df_within"), label + " df_within");
    close(r.p, c.at("p"), label + " p");
  }
  const size_t anova_cases = i;

  const std::vector<double> same = {0.7, 0.9, 0.8, 1.1, 0.6};
  const stats::WelchResult w = stats::WelchTTest(same, same);
  checker.Expect(w.t == 0.0 && w.p == 1.0, "identical Welch groups");
  const stats::AnovaResult a = stats::OneWayAnova({same, same, same});
  checker.Expect(a.f == 0.0 && a.p == 1.0, "identical ANOVA groups");
  bool degenerate = false;
  try {
    stats::OneWayAnova({{1.0, 1.0, 1.0}, {2.0, 2.0}});
  } catch (const Error& e) {
    degenerate = e.code() == ErrorCode::kDegenerate;
  }
  checker.Expect(degenerate, "zero within-group variance accepted");
  std::ostringstream max_diff;
  max_diff << worst;
  return Finish(checker, std::to_string(welch_cases) + " Welch and " +
                             std::to_string(anova_cases) +
                             " ANOVA fixtures vs scipy, max diff " +
                             max_diff.str() +
                             "; identical groups exact; degenerate F raised");
}

// ---------------------------------------------------------------------------
// corruption_pipeline

std::map<std::string, std::string> TreeContents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out[fs::relative(entry.path(), root).string()] = ReadFile(entry.path());
  }
  return out;
}

Outcome CorruptionPipeline() {
  Checker checker;
  const DatasetManifest fixture = Fixture();
  const fs::path image_root = DataPath("fixture/corpus");

  // Bit determinism of two independent runs over the fixture images.
  TempDir dir;
  size_t images = 0;
  for (corruption::Severity severity :
       {corruption::Severity::kLow, corruption::Severity::kMedium,
        corruption::Severity::kHigh}) {
    const corruption::CorruptionConfig config =
        corruption::ConfigForSeverity(severity, 424242);
    const std::string name(corruption::SeverityName(severity));
    const fs::path a = dir.path() / (name + "_a");
    const fs::path b = dir.path() / (name + "_b");
    const corruption::CorruptionBatch first =
        corruption::BuildCorruptionOod(fixture.samples, image_root, a, config, 1);
    const corruption::CorruptionBatch second =
        corruption::BuildCorruptionOod(fixture.samples, image_root, b, config, 4);
    checker.Expect(first.errors.empty(), name + ": unreadable fixture images");
    checker.Expect(DumpJsonl(first.log) == DumpJsonl(second.log),
                   name + ": logs differ");
    const auto tree_a = TreeContents(a);
    checker.Expect(tree_a == TreeContents(b), name + ": image bytes differ");
    images += tree_a.size();
  }

  // Statistical properties over 10^4 independent draws.
  constexpr int kTrials = 10000;
  cv::Mat image(12, 12, CV_8UC3);
  cv::randu(image, cv::Scalar::all(0), cv::Scalar::all(255));
  const corruption::CorruptionConfig config =
      corruption::ConfigForSeverity(corruption::Severity::kLow, 99);
  std::array<int, corruption::kNumOps> selected{}, applied{};
  int none_applied = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    Rng rng(DeriveSeed(config.rng_seed, static_cast<uint64_t>(trial)));
    const corruption::CorruptionResult r =
        corruption::CorruptImage(image, config, rng);
    if (r.applied_ops.empty()) ++none_applied;
    for (size_t op = 0; op < corruption::kNumOps; ++op) {
      selected[op] += r.selected[op];
    }
    for (const corruption::AppliedOp& op : r.applied_ops) {
      ++applied[static_cast<size_t>(op.op)];
    }
  }
  checker.Expect(none_applied == 0,
                 std::to_string(none_applied) + " images left untouched");
  std::vector<std::string> freq;
  for (size_t op = 0; op < corruption::kNumOps; ++op) {
    const double f = static_cast<double>(selected[op]) / kTrials;
    const std::string name(corruption::OpName(static_cast<corruption::Op>(op)));
    checker.Expect(f >= 0.47 && f <= 0.53,
                   name + " selection frequency " + Fixed(f));
    freq.push_back(name + " " + Fixed(f) + " (applied " +
                   Fixed(static_cast<double>(applied[op]) / kTrials) + ")");
  }
  return Finish(checker, std::to_string(images) +
                             " output files identical across runs; " +
                             std::to_string(kTrials) +
                             " draws all corrupted; p=0.5 selection " +
                             Join(freq, ", "));
}

// ---------------------------------------------------------------------------
// most_frequent_baseline

VqaSample Sample(const std::string& id, const std::string& question,
                 const std::string& answer) {
  VqaSample s;
  s.sample_id = id;
  s.image_ref = "images/" + id + ".png";
  s.question = question;
  s.answer = answer;
  return s;
}

// Counts answers per question directly over the training list.
std::optional<std::string> BruteMostFrequent(const std::vector<VqaSample>& train,
                                             const std::string& question) {
  const std::string q = metrics::NormalizeAnswer(question);
  std::map<std::string, size_t> counts;
  std::map<std::string, std::string> spelling;
  for (const VqaSample& s : train) {
    if (metrics::NormalizeAnswer(s.question) != q) continue;
    const std::string a = metrics::NormalizeAnswer(s.answer);
    ++counts[a];
    auto it = spelling.find(a);
    if (it == spelling.end() || s.answer < it->second) spelling[a] = s.answer;
  }
  if (counts.empty()) return std::nullopt;
  std::string best;
  size_t best_count = 0;
  for (const auto& [answer, count] : counts) {  // Ascending answers.
    if (count > best_count) {
      best = answer;
      best_count = count;
    }
  }
  return spelling.at(best);
}

void CompareWithBrute(Checker& checker, const std::vector<VqaSample>& train,
                      const std::vector<VqaSample>& test,
                      const std::string& label) {
  const baselines::MostFrequentResult result = baselines::MostFrequentPredictions(
      baselines::BuildFrequencyTable(train), test);
  std::map<std::string, std::string> produced;
  for (const auto& p : result.predictions) produced[p.sample_id] = p.prediction;
  size_t matched = 0;
  for (const VqaSample& s : test) {
    const std::optional<std::string> want = BruteMostFrequent(train, s.question);
    matched += want.has_value();
    const auto it = produced.find(s.sample_id);
    checker.Expect(want ? it != produced.end() && it->second == *want
                        : it == produced.end(),
                   label + " " + s.sample_id);
  }
  checker.Expect(result.matched == matched && result.total == test.size(),
                 label + " coverage counts");
}

Outcome MostFrequentBaseline() {
  Checker checker;
  Rng rng(5);
  // Random fixtures over a small vocabulary produce many ties, including
  // spelling variants that normalize to the same answer.
  const std::vector<std::string> questions = {
      "What organ is shown?", "what organ is shown", "Is it normal?",
      "Where is the lesion?", "Which side?", "How many lesions?"};
  const std::vector<std::string> answers = {"Lung", "lung", "lung.", "Liver",
                                            "yes",  "Yes", "no",    "left",
                                            "Left lung", "2"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<VqaSample> train, test;
    const size_t n_train = rng.UniformIndex(30);
    for (size_t i = 0; i < n_train; ++i) {
      train.push_back(Sample("t" + std::to_string(i),
                             questions[rng.UniformIndex(questions.size())],
                             answers[rng.UniformIndex(answers.size())]));
    }
    for (size_t i = 0; i < 8; ++i) {
      test.push_back(Sample("q" + std::to_string(i),
                            questions[rng.UniformIndex(questions.size())], "x"));
    }
    CompareWithBrute(checker, train, test, "trial " + std::to_string(trial));
  }
  // A hand-made exact tie: "liver" and "lung" twice each; "liver" sorts first.
  CompareWithBrute(checker,
                   {Sample("a", "Organ?", "lung"), Sample("b", "Organ?", "Liver"),
                    Sample("c", "Organ?", "Lung"), Sample("d", "Organ?", "liver")},
                   {Sample("e", "organ?", "x")}, "tie");
  const DatasetManifest fixture = Fixture();
  CompareWithBrute(checker, SamplesOf(fixture, BaseSplit::kTrain),
                   SamplesOf(fixture, BaseSplit::kTest), "fixture");

  // Near-zero overlap: one of twenty test questions was seen in training.
  DatasetManifest manifest;
  split::SplitManifest shift;
  shift.shift_name = "disjoint";
  auto add = [&](VqaSample s, BaseSplit split) {
    s.answer_class = AnswerClass::kClosedBinary;
    s.question += " yes or no?";
    manifest.base_split[s.sample_id] = split;
    manifest.samples.push_back(std::move(s));
  };
  for (int i = 0; i < 10; ++i) {
    const std::string id = "tr" + std::to_string(i);
    add(Sample(id, "Train question " + std::to_string(i), "yes"),
        BaseSplit::kTrain);
    shift.train_iid.push_back(id);
  }
  for (int i = 0; i < 20; ++i) {
    const std::string id = "te" + std::to_string(i);
    add(Sample(id, "Test question " + std::to_string(i == 0 ? -1 : i),
               i % 2 == 0 ? "yes" : "no"),
        BaseSplit::kTest);
    (i < 10 ? shift.test_iid : shift.test_ood).push_back(id);
  }
  manifest.samples[10].question = manifest.samples[0].question;
  TempDir dir;
  pipeline::BaselineStage(manifest, {shift}, true, true, 3, dir.path());
  const Json coverage = ReadJsonFile(dir.path() / "coverage.json");
  checker.Expect(coverage.size() == 1 && coverage[0]["matched"] == 1 &&
                     coverage[0]["total"] == 20,
                 "coverage " + coverage.dump());

  std::vector<ScoreRecord> scores;
  for (const std::string method : {"most_frequent", "random"}) {
    for (const VqaSample& s : manifest.samples) {
      if (manifest.base_split.at(s.sample_id) != BaseSplit::kTest) continue;
      ScoreRecord r;
      r.sample_id = s.sample_id;
      r.answer_class = s.answer_class;
      r.context.dataset = "fixture";
      r.context.shift = "disjoint";
      r.context.split = std::find(shift.test_iid.begin(), shift.test_iid.end(),
                                  s.sample_id) != shift.test_iid.end()
                            ? "test_iid"
                            : "test_ood";
      r.context.model_id = method;
      r.context.method = metrics::ParseMethod(method);
      r.context.uses_image = false;
      r.judge_correct = s.sample_id.back() % 2 == 0;
      scores.push_back(std::move(r));
    }
  }
  const Json doc = pipeline::BuildRobustnessDocument(scores, coverage, {});
  const auto report = pipeline::RenderReport(doc, 0.5);
  const std::string& table = report.at("robustness_table.csv");
  checker.Expect(table.find("most_frequent") == std::string::npos,
                 "most_frequent row not withheld");
  checker.Expect(table.find("random") != std::string::npos,
                 "random row missing");
  checker.Expect(report.at("footnotes.txt").find(
                     "most_frequent baseline omitted for fixture/disjoint") !=
                     std::string::npos,
                 "no footnote");
  return Finish(checker,
                "302 fixtures (ties, spelling variants, bundled corpus) match "
                "brute-force counts; coverage 1/20 withheld below floor 0.50");
}

// ---------------------------------------------------------------------------
// win_tie_lose

Outcome WinTieLose() {
  Checker checker;
  Rng rng(11);
  size_t total_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng.UniformIndex(40);
    std::vector<ScoreRecord> a, b;
    for (size_t i = 0; i < n; ++i) {
      ScoreRecord r;
      r.sample_id = "s" + std::to_string(i);
      r.context.split = rng.Uniform() < 0.5 ? "test_iid" : "test_ood";
      r.answer_class =
          rng.Uniform() < 0.5 ? AnswerClass::kOpen : AnswerClass::kClosedBinary;
      ScoreRecord other = r;
      for (ScoreRecord* side : {&r, &other}) {
        if (side->answer_class == AnswerClass::kOpen) {
          side->judge_score = 1 + static_cast<int>(rng.UniformIndex(5));
        } else {
          side->judge_correct = rng.Uniform() < 0.5;
        }
        if (rng.Uniform() < 0.05) side->evaluation_error = "judge failed";
      }
      a.push_back(std::move(r));
      b.push_back(std::move(other));
    }
    std::shuffle(b.begin(), b.end(), std::mt19937_64(rng.NextU64()));
    const std::vector<stats::WtlRow> ab = stats::PairwiseWtl(a, b);
    const std::vector<stats::WtlRow> ba = stats::PairwiseWtl(b, a);
    const std::string label = "trial " + std::to_string(trial);
    size_t sum = 0;
    std::map<std::pair<std::string, std::string>, const stats::WtlRow*> mirror;
    for (const stats::WtlRow& row : ba) {
      mirror[{row.answer_class, row.split}] = &row;
    }
    for (const stats::WtlRow& row : ab) {
      sum += row.win + row.tie + row.lose + row.skipped;
      const auto it = mirror.find({row.answer_class, row.split});
      checker.Expect(it != mirror.end() && it->second->win == row.lose &&
                         it->second->lose == row.win &&
                         it->second->tie == row.tie &&
                         it->second->skipped == row.skipped,
                     label + ": swap does not mirror");
    }
    checker.Expect(ab.size() == ba.size(), label + ": row sets differ");
    checker.Expect(sum == n, label + ": counts sum to " + std::to_string(sum) +
                                 " of " + std::to_string(n));
    total_pairs += n;
  }
  return Finish(checker, "1000 random pairs (" + std::to_string(total_pairs) +
                             " samples): counts sum to the shared set and "
                             "mirror under swap");
}

// ---------------------------------------------------------------------------
// bootstrap

Outcome Bootstrap() {
  Checker checker;
  const Json oracle = ReadJsonFile(DataPath("oracles/bootstrap_oracle.json"));
  Rng engine(5489);
  const std::vector<std::string> head =
      oracle.at("mt19937_64_5489").get<std::vector<std::string>>();
  for (const std::string& value : head) {
    checker.Expect(std::to_string(engine.NextU64()) == value, "engine stream");
  }
  const stats::BootstrapResult golden = stats::BootstrapRr(
      Doubles(oracle.at("iid")), Doubles(oracle.at("ood")),
      oracle.at("resamples").get<size_t>(), oracle.at("seed").get<uint64_t>());
  const std::vector<double> want = Doubles(oracle.at("rr"));
  checker.Expect(golden.rr.size() == want.size(), "golden length");
  for (size_t i = 0; i < std::min(want.size(), golden.rr.size()); ++i) {
    checker.Expect(std::fabs(golden.rr[i] - want[i]) <= 1e-12,
                   "golden rr[" + std::to_string(i) + "]");
  }

  Rng rng(31337);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n_iid = 20 + rng.UniformIndex(80);
    const size_t n_ood = 20 + rng.UniformIndex(80);
    const double shift = rng.Uniform(0.0, 0.4);
    std::vector<double> iid(n_iid), ood(n_ood);
    for (double& v : iid) v = 1.0 + static_cast<double>(rng.UniformIndex(5));
    for (double& v : ood) {
      v = rng.Uniform() < shift ? 1.0 : 1.0 + static_cast<double>(rng.UniformIndex(5));
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    const double point = stats::RelativeRobustness(mean(iid), mean(ood));
    const stats::BootstrapResult r =
        stats::BootstrapRr(iid, ood, 500, rng.NextU64());
    const double m = mean(r.rr);
    double var = 0.0;
    for (double x : r.rr) var += (x - m) * (x - m);
    const double se = std::sqrt(var / static_cast<double>(r.rr.size() - 1));
    const double z = std::fabs(m - point) / se;
    worst = std::max(worst, z);
    checker.Expect(z <= 3.0, "trial " + std::to_string(trial) + ": " +
                                 Fixed(z, 2) + " standard errors");
  }
  return Finish(checker, "golden list of " + std::to_string(want.size()) +
                             " reproduced; 100 fixtures, worst |mean - RR| = " +
                             Fixed(worst, 2) + " bootstrap SE");
}

// ---------------------------------------------------------------------------
// end_to_end

Outcome EndToEnd() {
  Checker checker;
  TempDir dir;
  const auto start = std::chrono::steady_clock::now();
  const pipeline::PipelineConfig config = pipeline::LoadConfig(
      DataPath("fixture/pipeline.toml"), {},
      {"VQAEVAL_RUN__ROOT=" + (dir.path() / "run").string()});
  const pipeline::RunResult result = pipeline::RunPipeline(config);
  const double elapsed = Seconds(start);
  checker.Expect(elapsed < 60.0, "took " + Fixed(elapsed, 1) + " s");
  const fs::path report = result.Find(pipeline::Stage::kReport)->dir;
  const fs::path golden = DataPath("golden/e2e_report");
  std::set<std::string> produced, expected;
  for (const auto& entry : fs::directory_iterator(report)) {
    const std::string name = entry.path().filename().string();
    if (!name.starts_with("_")) produced.insert(name);
  }
  if (fs::is_directory(golden)) {
    for (const auto& entry : fs::directory_iterator(golden)) {
      expected.insert(entry.path().filename().string());
    }
  }
  checker.Expect(!expected.empty(), "golden tree missing");
  checker.Expect(produced == expected, "report file set differs from golden");
  for (const std::string& name : expected) {
    checker.Expect(produced.contains(name) &&
                       ReadFile(report / name) == ReadFile(golden / name),
                   name + " differs");
  }
  // The ANOVA and significance sections are recomputed from the shipped
  // prediction fixtures rather than taken from published values.
  const Json robustness = ReadJsonFile(
      result.Find(pipeline::Stage::kRobustness)->dir / "robustness.json");
  return Finish(checker,
                std::to_string(expected.size()) +
                    " report files byte-identical to golden; " +
                    std::to_string(robustness.at("cells").size()) +
                    " cells recomputed in " + Fixed(elapsed, 2) + " s");
}

// ---------------------------------------------------------------------------

const std::vector<std::pair<std::string, std::function<Outcome()>>>&
Criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>>
      kCriteria = {
          {"split_reproduction", SplitReproduction},
          {"unique_question_ratio", UniqueQuestionRatio},
          {"rr_recomputation", RrRecomputation},
          {"hybrid_metric_shortcut", HybridMetricShortcut},
          {"kendall_spearman", KendallSpearman},
          {"welch_anova", WelchAnova},
          {"corruption_pipeline", CorruptionPipeline},
          {"most_frequent_baseline", MostFrequentBaseline},
          {"win_tie_lose", WinTieLose},
          {"bootstrap", Bootstrap},
          {"end_to_end", EndToEnd},
      };
  return kCriteria;
}

int Run(const std::vector<std::string>& names) {
  int failed = 0;
  for (const auto& [name, run] : Criteria()) {
    if (!names.empty() &&
        std::find(names.begin(), names.end(), name) == names.end()) {
      continue;
    }
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": "
              << outcome.detail << std::endl;
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace vqaeval::acceptance

int main(int argc, char** argv) {
  std::vector<std::string> names(argv + 1, argv + argc);
  for (const std::string& name : names) {
    bool known = false;
    for (const auto& [criterion, unused] : vqaeval::acceptance::Criteria()) {
      known = known || criterion == name;
    }
    if (!known) {
      std::cerr << "unknown criterion: " << name << "\n";
      return 2;
    }
  }
  return vqaeval::acceptance::Run(names);
}
