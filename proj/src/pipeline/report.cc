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

#include "vqaeval/pipeline/report.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "vqaeval/common/error.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/metrics/aggregate.h"
#include "vqaeval/stats/bootstrap.h"
#include "vqaeval/stats/robustness.h"

namespace vqaeval::pipeline {
namespace {

std::string CellId(const stats::RobustnessCell& c) {
  return c.dataset + "/" + c.shift + "/" + c.method + "/" + c.base_model +
         "/" + (c.uses_image ? "image" : "no_image") + "/" + c.answer_class;
}

Json CellKeyJson(const stats::RobustnessCell& c) {
  return Json{{"dataset", c.dataset},         {"shift", c.shift},
              {"method", c.method},           {"base_model", c.base_model},
              {"uses_image", c.uses_image},   {"answer_class", c.answer_class}};
}

Json BootstrapSection(const std::vector<stats::RobustnessCell>& cells,
                      const AnalysisOptions& options,
                      std::map<std::string, std::vector<double>>* rr_by_cell) {
  Json out = Json::array();
  for (const stats::RobustnessCell& cell : cells) {
    Json entry = CellKeyJson(cell);
    entry["resamples"] = options.bootstrap_resamples;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> per_seed;
    for (const stats::SeedRobustness& s : cell.seeds) {
      per_seed.emplace_back(s.iid_values, s.ood_values);
    }
    try {
      const stats::BootstrapResult result = stats::BootstrapCellRr(
          per_seed, options.bootstrap_resamples,
          DeriveSeed(options.bootstrap_seed, CellId(cell)));
      entry["redraws"] = result.redraws;
      entry["mean"] = metrics::Mean(result.rr);
      const std::optional<double> sd = metrics::SampleStd(result.rr);
      entry["std"] = sd ? Json(*sd) : Json(nullptr);
      entry["rr"] = result.rr;
      (*rr_by_cell)[CellId(cell)] = result.rr;
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

using GroupKey = std::tuple<std::string, std::string, bool, std::string>;

Json SignificanceSection(
    const std::vector<stats::RobustnessCell>& cells,
    const std::map<std::string, std::vector<double>>& rr_by_cell,
    const AnalysisOptions& options) {
  // group -> shift -> method -> bootstrapped RR
  std::map<GroupKey,
           std::map<std::string, std::map<std::string, std::vector<double>>>>
      groups;
  std::map<GroupKey, std::set<std::string>> methods;
  for (const stats::RobustnessCell& cell : cells) {
    if (!IsFineTuningMethod(cell.method)) continue;
    auto it = rr_by_cell.find(CellId(cell));
    if (it == rr_by_cell.end()) continue;
    const GroupKey key{cell.dataset, cell.base_model, cell.uses_image,
                       cell.answer_class};
    groups[key][cell.shift][cell.method] = it->second;
    methods[key].insert(cell.method);
  }
  Json out = Json::array();
  for (const auto& [key, rr] : groups) {
    if (methods[key].size() < 2) continue;
    Json entry{{"dataset", std::get<0>(key)},
               {"base_model", std::get<1>(key)},
               {"uses_image", std::get<2>(key)},
               {"answer_class", std::get<3>(key)}};
    try {
      entry["matrix"] = stats::SignificanceMatrixToJson(
          stats::WinLossMatrix(rr, options.alpha, options.correction));
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

Json AnovaSection(const std::vector<stats::RobustnessCell>& cells) {
  using Key = std::tuple<std::string, std::string, bool>;
  // group -> (shift, class) -> method -> RR
  std::map<Key, std::map<std::pair<std::string, std::string>,
                         std::map<std::string, double>>>
      grid;
  for (const stats::RobustnessCell& cell : cells) {
    if (!IsFineTuningMethod(cell.method)) continue;
    grid[{cell.dataset, cell.base_model, cell.uses_image}]
        [{cell.shift, cell.answer_class}][cell.method] = cell.rr;
  }
  Json out = Json::array();
  for (const auto& [key, cols] : grid) {
    Json entry{{"dataset", std::get<0>(key)},
               {"base_model", std::get<1>(key)},
               {"uses_image", std::get<2>(key)}};
    std::set<std::string> methods;
    for (const auto& [col, by_method] : cols) {
      for (const auto& [method, rr] : by_method) methods.insert(method);
    }
    entry["methods"] = std::vector<std::string>(methods.begin(), methods.end());
    Json labels = Json::array();
    std::vector<std::vector<double>> groups;
    bool complete = true;
    for (const auto& [col, by_method] : cols) {
      labels.push_back(col.first + "/" + col.second);
      if (by_method.size() != methods.size()) complete = false;
      std::vector<double> values;
      for (const auto& [method, rr] : by_method) values.push_back(rr);
      groups.push_back(std::move(values));
    }
    entry["groups"] = labels;
    if (methods.size() < 2 || groups.size() < 2) {
      entry["error"] = "needs at least two methods and two shift/class groups";
    } else if (!complete) {
      entry["error"] = "every shift/class group must hold every method";
    } else {
      try {
        const stats::AnovaResult r = stats::OneWayAnova(groups);
        entry["f"] = r.f;
        entry["df_between"] = r.df_between;
        entry["df_within"] = r.df_within;
        entry["p"] = r.p;
      } catch (const Error& e) {
        entry["error"] = e.what();
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

struct RunKey {
  std::string dataset;
  std::string shift;
  std::string method;
  std::string base_model;
  bool uses_image;
  std::string seed;
  auto Tie() const {
    return std::tie(dataset, shift, method, base_model, uses_image, seed);
  }
  bool operator<(const RunKey& o) const { return Tie() < o.Tie(); }
};

Json WtlSection(const std::vector<metrics::ScoreRecord>& scores) {
  std::map<RunKey, std::vector<metrics::ScoreRecord>> runs;
  for (const metrics::ScoreRecord& r : scores) {
    const std::string method(metrics::MethodName(r.context.method));
    if (!IsFineTuningMethod(method) && method != "no_ft") continue;
    if (r.context.split == "validate") continue;
    runs[{r.context.dataset, r.context.shift, method,
          std::string(metrics::BaseModelName(r.context.base_model)),
          r.context.uses_image, metrics::GroupKeyValue(r, "seed")}]
        .push_back(r);
  }
  Json out = Json::array();
  auto compare = [&](const std::string& label, const RunKey& a,
                     const RunKey& b) {
    auto ib = runs.find(b);
    if (ib == runs.end()) return;
    Json entry{{"comparison", label},
               {"dataset", a.dataset},
               {"shift", a.shift},
               {"method", a.method},
               {"seed", a.seed}};
    if (label == "image_vs_no_image") {
      entry["base_model"] = a.base_model;
    } else {
      entry["uses_image"] = a.uses_image;
    }
    try {
      entry["rows"] = stats::WtlToJson(stats::PairwiseWtl(runs[a], ib->second));
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    out.push_back(std::move(entry));
  };
  for (const auto& [key, unused] : runs) {
    if (key.uses_image) {
      RunKey other = key;
      other.uses_image = false;
      compare("image_vs_no_image", key, other);
    }
    if (key.base_model == "medical") {
      RunKey other = key;
      other.base_model = "general";
      compare("medical_vs_general", key, other);
    }
  }
  return out;
}

// ---- Rendering ----

std::string Field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return CsvEscape(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  if (v.is_number_float()) return FormatShortest(v.get<double>());
  return CsvEscape(v.dump());
}

std::string Fixed2(const Json& v) {
  return v.is_number() ? FormatFixed(v.get<double>(), 2) : "";
}

const Json& Section(const Json& doc, const char* name) {
  static const Json kEmpty = Json::array();
  return doc.contains(name) && doc[name].is_array() ? doc[name] : kEmpty;
}

std::string Get(const Json& obj, const char* key) {
  return obj.contains(key) ? Field(obj[key]) : "";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) {
    out_ = Join(header, ",") + "\n";
  }
  void Row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) {
      throw Error(ErrorCode::kInvalidArgument, "csv row width mismatch");
    }
    out_ += Join(fields, ",") + "\n";
  }
  std::string str() const { return out_; }

 private:
  size_t width_;
  std::string out_;
};

}  // namespace

bool IsFineTuningMethod(std::string_view method) {
  return method == "full_ft" || method == "prompt_tuning" || method == "lora" ||
         method == "ia3";
}

Json EmptyRobustnessDocument() {
  return Json{{"cells", Json::array()},         {"undefined_rr", Json::array()},
              {"ranks", Json::array()},         {"rank_distribution", Json::object()},
              {"variance", Json::array()},      {"variance_error", nullptr},
              {"bootstrap", Json::array()},     {"significance", Json::array()},
              {"anova", Json::array()},         {"wtl", Json::array()},
              {"baseline_coverage", Json::array()}};
}

Json BuildRobustnessDocument(const std::vector<metrics::ScoreRecord>& scores,
                             const Json& baseline_coverage,
                             const AnalysisOptions& options) {
  Json doc = EmptyRobustnessDocument();
  std::vector<std::string> undefined;
  const std::vector<stats::RobustnessCell> cells =
      stats::ComputeCells(scores, "test_iid", &undefined);
  doc["cells"] = stats::CellsToJson(cells);
  doc["undefined_rr"] = undefined;

  std::vector<stats::RobustnessCell> ft_cells;
  for (const stats::RobustnessCell& c : cells) {
    if (IsFineTuningMethod(c.method)) ft_cells.push_back(c);
  }
  const std::vector<stats::RankEntry> ranks = stats::RankMethods(ft_cells);
  doc["ranks"] = stats::RanksToJson(ranks);
  Json distribution = Json::object();
  for (const auto& [method, counts] : stats::RankDistribution(ranks)) {
    Json per_rank = Json::object();
    for (const auto& [rank, count] : counts) {
      per_rank[std::to_string(rank)] = count;
    }
    distribution[method] = per_rank;
  }
  doc["rank_distribution"] = distribution;
  if (!ft_cells.empty()) {
    try {
      doc["variance"] =
          stats::VarianceToJson(stats::VarianceDecomposition(ft_cells));
    } catch (const Error& e) {
      doc["variance_error"] = e.what();
    }
  }

  std::map<std::string, std::vector<double>> rr_by_cell;
  doc["bootstrap"] = BootstrapSection(cells, options, &rr_by_cell);
  doc["significance"] = SignificanceSection(cells, rr_by_cell, options);
  doc["anova"] = AnovaSection(cells);
  doc["wtl"] = WtlSection(scores);
  doc["baseline_coverage"] =
      baseline_coverage.is_array() ? baseline_coverage : Json::array();
  return doc;
}

std::map<std::string, std::string> RenderReport(const Json& doc,
                                                double coverage_floor) {
  std::map<std::string, std::string> files;
  std::vector<std::string> footnotes;

  // (dataset, shift) pairs whose most-frequent baseline is withheld.
  std::set<std::pair<std::string, std::string>> suppressed;
  for (const Json& c : Section(doc, "baseline_coverage")) {
    const double coverage = c.value("coverage", 0.0);
    if (coverage < coverage_floor) {
      const std::string dataset = c.value("dataset", "");
      const std::string shift = c.value("shift", "");
      suppressed.emplace(dataset, shift);
      footnotes.push_back(
          "most_frequent baseline omitted for " + dataset + "/" + shift +
          ": only " + std::to_string(c.value("matched", 0)) + " of " +
          std::to_string(c.value("total", 0)) +
          " test questions occur in training (coverage " +
          FormatFixed(coverage, 2) + " < floor " +
          FormatFixed(coverage_floor, 2) + ")");
    }
  }

  Csv table({"dataset", "shift", "base_model", "uses_image", "method",
             "answer_class", "p_iid", "p_iid_std", "p_ood", "p_ood_std", "rr",
             "rr_std", "seeds"});
  Csv plot({"dataset", "shift", "method", "class", "split", "value",
            "base_model", "uses_image"});
  Json rows = Json::array();
  for (const Json& c : Section(doc, "cells")) {
    if (c.value("method", "") == "most_frequent" &&
        suppressed.count({c.value("dataset", ""), c.value("shift", "")})) {
      continue;
    }
    const size_t seeds = c.contains("seeds") ? c["seeds"].size() : 0;
    table.Row({Get(c, "dataset"), Get(c, "shift"), Get(c, "base_model"),
               Get(c, "uses_image"), Get(c, "method"), Get(c, "answer_class"),
               Fixed2(c["p_iid"]), Fixed2(c["p_iid_std"]), Fixed2(c["p_ood"]),
               Fixed2(c["p_ood_std"]), Fixed2(c["rr"]), Fixed2(c["rr_std"]),
               std::to_string(seeds)});
    for (const char* split : {"test_iid", "test_ood"}) {
      const char* field = std::string_view(split) == "test_iid" ? "p_iid"
                                                                : "p_ood";
      plot.Row({Get(c, "dataset"), Get(c, "shift"), Get(c, "method"),
                Get(c, "answer_class"), split, Get(c, field),
                Get(c, "base_model"), Get(c, "uses_image")});
    }
    Json row = c;
    row.erase("seeds");
    row["seeds"] = seeds;
    rows.push_back(std::move(row));
  }
  for (const Json& u : Section(doc, "undefined_rr")) {
    footnotes.push_back("RR undefined (zero i.i.d. performance): " +
                        u.get<std::string>());
  }
  if (doc.contains("variance_error") && doc["variance_error"].is_string()) {
    footnotes.push_back("variance decomposition unavailable: " +
                        doc["variance_error"].get<std::string>());
  }
  files["robustness_table.csv"] = table.str();
  files["plot_data.csv"] = plot.str();

  Csv ranks({"dataset", "shift", "base_model", "uses_image", "answer_class",
             "method", "rr", "rank"});
  for (const Json& r : Section(doc, "ranks")) {
    ranks.Row({Get(r, "dataset"), Get(r, "shift"), Get(r, "base_model"),
               Get(r, "uses_image"), Get(r, "answer_class"), Get(r, "method"),
               Fixed2(r["rr"]), Get(r, "rank")});
  }
  files["ranks.csv"] = ranks.str();

  Csv distribution({"method", "rank", "count"});
  if (doc.contains("rank_distribution") && doc["rank_distribution"].is_object()) {
    for (const auto& [method, counts] : doc["rank_distribution"].items()) {
      for (const auto& [rank, count] : counts.items()) {
        distribution.Row({CsvEscape(method), rank, Field(count)});
      }
    }
  }
  files["rank_distribution.csv"] = distribution.str();

  Csv variance({"dataset", "base_model", "uses_image", "answer_class",
                "shifts", "methods", "std_between_shifts",
                "std_between_methods"});
  for (const Json& v : Section(doc, "variance")) {
    variance.Row({Get(v, "dataset"), Get(v, "base_model"), Get(v, "uses_image"),
                  Get(v, "answer_class"), Get(v, "shifts"), Get(v, "methods"),
                  Get(v, "std_between_shifts"), Get(v, "std_between_methods")});
  }
  files["variance.csv"] = variance.str();

  Csv bootstrap({"dataset", "shift", "method", "base_model", "uses_image",
                 "answer_class", "resamples", "redraws", "mean", "std",
                 "error"});
  for (const Json& b : Section(doc, "bootstrap")) {
    bootstrap.Row({Get(b, "dataset"), Get(b, "shift"), Get(b, "method"),
                   Get(b, "base_model"), Get(b, "uses_image"),
                   Get(b, "answer_class"), Get(b, "resamples"),
                   Get(b, "redraws"), Get(b, "mean"), Get(b, "std"),
                   Get(b, "error")});
  }
  files["bootstrap.csv"] = bootstrap.str();

  Csv tests({"dataset", "base_model", "uses_image", "answer_class", "shift",
             "method_a", "method_b", "mean_a", "mean_b", "t", "df", "p",
             "p_adjusted", "significant", "winner"});
  Csv matrix({"dataset", "base_model", "uses_image", "answer_class", "method",
              "versus", "wins", "shifts", "alpha", "correction"});
  for (const Json& s : Section(doc, "significance")) {
    if (s.contains("error")) {
      footnotes.push_back("significance unavailable for " +
                          s.value("dataset", "") + "/" +
                          s.value("base_model", "") + "/" +
                          s.value("answer_class", "") + ": " +
                          s["error"].get<std::string>());
      continue;
    }
    const Json& m = s["matrix"];
    for (const Json& t : m["tests"]) {
      tests.Row({Get(s, "dataset"), Get(s, "base_model"), Get(s, "uses_image"),
                 Get(s, "answer_class"), Get(t, "shift"), Get(t, "method_a"),
                 Get(t, "method_b"), Get(t, "mean_a"), Get(t, "mean_b"),
                 Get(t, "t"), Get(t, "df"), Get(t, "p"), Get(t, "p_adjusted"),
                 Get(t, "significant"), Get(t, "winner")});
    }
    const Json& methods = m["methods"];
    for (size_t i = 0; i < methods.size(); ++i) {
      for (size_t j = 0; j < methods.size(); ++j) {
        matrix.Row({Get(s, "dataset"), Get(s, "base_model"),
                    Get(s, "uses_image"), Get(s, "answer_class"),
                    Field(methods[i]), Field(methods[j]),
                    Field(m["wins"][i][j]), Get(m, "shifts"), Get(m, "alpha"),
                    Get(m, "correction")});
      }
    }
  }
  files["significance_tests.csv"] = tests.str();
  files["win_loss_matrix.csv"] = matrix.str();

  Csv anova({"dataset", "base_model", "uses_image", "groups", "methods", "f",
             "df_between", "df_within", "p", "error"});
  for (const Json& a : Section(doc, "anova")) {
    std::vector<std::string> groups;
    std::vector<std::string> methods;
    for (const Json& g : a.value("groups", Json::array())) {
      groups.push_back(g.get<std::string>());
    }
    for (const Json& m : a.value("methods", Json::array())) {
      methods.push_back(m.get<std::string>());
    }
    anova.Row({Get(a, "dataset"), Get(a, "base_model"), Get(a, "uses_image"),
               CsvEscape(Join(groups, ";")), CsvEscape(Join(methods, ";")),
               Get(a, "f"), Get(a, "df_between"), Get(a, "df_within"),
               Get(a, "p"), Get(a, "error")});
  }
  files["anova.csv"] = anova.str();

  Csv wtl({"comparison", "dataset", "shift", "method", "base_model",
           "uses_image", "seed", "answer_class", "split", "win", "tie", "lose",
           "skipped"});
  for (const Json& w : Section(doc, "wtl")) {
    if (w.contains("error")) {
      footnotes.push_back("win/tie/lose unavailable for " +
                          w.value("comparison", "") + " " +
                          w.value("dataset", "") + "/" + w.value("shift", "") +
                          "/" + w.value("method", "") + ": " +
                          w["error"].get<std::string>());
      continue;
    }
    for (const Json& r : w["rows"]) {
      wtl.Row({Get(w, "comparison"), Get(w, "dataset"), Get(w, "shift"),
               Get(w, "method"), Get(w, "base_model"), Get(w, "uses_image"),
               Get(w, "seed"), Get(r, "answer_class"), Get(r, "split"),
               Get(r, "win"), Get(r, "tie"), Get(r, "lose"),
               Get(r, "skipped")});
    }
  }
  files["wtl.csv"] = wtl.str();

  Csv coverage({"dataset", "shift", "matched", "total", "coverage",
                "suppressed"});
  for (const Json& c : Section(doc, "baseline_coverage")) {
    const bool hidden =
        suppressed.count({c.value("dataset", ""), c.value("shift", "")}) > 0;
    coverage.Row({Get(c, "dataset"), Get(c, "shift"), Get(c, "matched"),
                  Get(c, "total"), Fixed2(c["coverage"]),
                  hidden ? "true" : "false"});
  }
  files["baseline_coverage.csv"] = coverage.str();

  std::string notes;
  for (const std::string& line : footnotes) notes += line + "\n";
  files["footnotes.txt"] = notes;
  files["robustness_table.json"] =
      DumpJson(Json{{"coverage_floor", coverage_floor},
                    {"rows", rows},
                    {"footnotes", footnotes}});
  return files;
}

void WriteReportFiles(const std::map<std::string, std::string>& files,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    WriteFileAtomic(dir / name, content);
  }
}

}  // namespace vqaeval::pipeline
