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

// Command-line entry point: one subcommand per pipeline stage plus rater
// study tools and the rating server.

#include <csignal>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vqaeval/common/error.h"
#include "vqaeval/common/io.h"
#include "vqaeval/common/text.h"
#include "vqaeval/corruption/corruption.h"
#include "vqaeval/dataset/ingest.h"
#include "vqaeval/dataset/manifest.h"
#include "vqaeval/metrics/judge.h"
#include "vqaeval/metrics/score.h"
#include "vqaeval/pipeline/config.h"
#include "vqaeval/pipeline/pipeline.h"
#include "vqaeval/pipeline/report.h"
#include "vqaeval/pipeline/server.h"
#include "vqaeval/rater/rater_study.h"
#include "vqaeval/split/builtin_shifts.h"
#include "vqaeval/split/split.h"

namespace fs = std::filesystem;
using namespace vqaeval;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<std::string> judge_endpoint;
  std::optional<int> parallelism;
  bool mock_judge = false;
};

pipeline::ConfigOverrides Overrides(const GlobalFlags& g) {
  pipeline::ConfigOverrides o;
  o.seed = g.seed;
  o.judge_endpoint = g.judge_endpoint;
  o.parallelism = g.parallelism;
  o.mock_judge = g.mock_judge;
  return o;
}

uint64_t RequireSeed(const GlobalFlags& g) {
  if (!g.seed) {
    throw Error(ErrorCode::kValidation,
                "--seed is required (no implicit seeding)");
  }
  return *g.seed;
}

void RunConfigured(const GlobalFlags& g, std::optional<pipeline::Stage> last) {
  const pipeline::PipelineConfig config =
      pipeline::LoadConfig(g.config, Overrides(g));
  const pipeline::RunResult result = pipeline::RunPipeline(config, last);
  for (const pipeline::StageRecord& r : result.stages) {
    std::cout << pipeline::StageName(r.stage) << "\t"
              << (r.reused ? "reused" : "ran") << "\t" << r.dir.string()
              << "\n";
  }
  std::cout << "manifest\t" << result.manifest_path.string() << "\n";
}

metrics::JudgeConfig StandaloneJudge(const GlobalFlags& g) {
  metrics::JudgeConfig judge;
  if (!g.config.empty()) {
    Json doc = LoadDocument(g.config);
    pipeline::ApplyEnvOverrides(doc, pipeline::ProcessEnvironment());
    judge = pipeline::ParseJudgeConfig(doc);
  }
  if (g.judge_endpoint) {
    judge.mode = "http";
    judge.endpoint = *g.judge_endpoint;
  }
  if (g.mock_judge) judge.mode = "mock";
  if (g.parallelism) judge.parallelism = *g.parallelism;
  metrics::ValidateJudgeConfig(judge);
  return judge;
}

// Keeps only the records of one run so each sample appears once.
std::vector<metrics::ScoreRecord> FilterScores(
    std::vector<metrics::ScoreRecord> scores, const std::string& model_id,
    const std::optional<int>& run_seed, const std::string& shift,
    const std::string& split) {
  std::vector<metrics::ScoreRecord> out;
  for (metrics::ScoreRecord& r : scores) {
    if (!model_id.empty() && r.context.model_id != model_id) continue;
    if (run_seed && r.context.seed != run_seed) continue;
    if (!shift.empty() && r.context.shift != shift) continue;
    if (!split.empty() && r.context.split != split) continue;
    out.push_back(std::move(r));
  }
  return out;
}

pipeline::RatingServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kValidation:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness evaluation harness for medical VQA fine-tuning"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config, "TOML or JSON pipeline config");
  app.add_option("--seed", g.seed, "Base rng seed (overrides run.seed)");
  app.add_option("--judge-endpoint", g.judge_endpoint,
                 "HTTP judge endpoint; selects the http judge");
  app.add_option("--parallelism", g.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--mock-judge", g.mock_judge, "Use the deterministic mock judge");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a corpus into a manifest");
  std::string adapter = "native";
  std::string data_root;
  std::string out;
  ingest->add_option("--adapter", adapter, "slake | ovqa | mimic | native");
  ingest->add_option("--root", data_root, "Corpus directory");
  ingest->add_option("--out", out, "Manifest output directory");

  // split
  auto* split_cmd = app.add_subcommand("split", "Build shift split manifests");
  std::string manifest_dir;
  std::vector<std::string> shift_names;
  std::vector<std::string> shift_files;
  split_cmd->add_option("--manifest", manifest_dir, "Manifest directory");
  split_cmd->add_option("--shift", shift_names, "Built-in shift name");
  split_cmd->add_option("--shift-file", shift_files, "Shift spec JSON/TOML");
  split_cmd->add_option("--out", out, "Output directory");
  bool list_shifts = false;
  split_cmd->add_flag("--list", list_shifts, "Print built-in shifts");

  // corrupt
  auto* corrupt = app.add_subcommand("corrupt", "Corrupt a directory of PNGs");
  std::string in_dir;
  std::string log_path;
  std::string severity = "low";
  corrupt->add_option("--in", in_dir, "Input PNG directory");
  corrupt->add_option("--out", out, "Output directory");
  corrupt->add_option("--log", log_path, "Applied-ops JSONL log");
  corrupt->add_option("--severity", severity, "low | medium | high");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Sanity baselines");
  std::string splits_dir;
  baseline->add_option("--manifest", manifest_dir, "Manifest directory");
  baseline->add_option("--splits", splits_dir, "Directory of split manifests");
  baseline->add_option("--out", out, "Output directory");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  std::vector<std::string> prediction_args;
  std::string baseline_dir;
  evaluate->add_option("--manifest", manifest_dir, "Manifest directory");
  evaluate->add_option("--splits", splits_dir, "Directory of split manifests");
  evaluate->add_option("--predictions", prediction_args,
                       "SHIFT=PATH prediction file");
  evaluate->add_option("--baselines", baseline_dir, "Baseline directory");
  evaluate->add_option("--out", out, "Output directory");

  // robustness
  auto* robustness = app.add_subcommand("robustness", "RR and significance");
  std::string scores_path;
  std::string coverage_path;
  size_t resamples = 100;
  double alpha = 0.05;
  std::string correction = "holm";
  robustness->add_option("--scores", scores_path, "scores.jsonl");
  robustness->add_option("--coverage", coverage_path,
                         "Baseline coverage.json");
  robustness->add_option("--resamples", resamples, "Bootstrap resamples");
  robustness->add_option("--alpha", alpha, "Significance level");
  robustness->add_option("--correction", correction,
                         "holm | bonferroni | none");
  robustness->add_option("--out", out, "Output directory");

  // report
  auto* report = app.add_subcommand("report", "Render report tables");
  std::string robustness_path;
  double coverage_floor = 0.5;
  report->add_option("--robustness", robustness_path, "robustness.json");
  report->add_option("--coverage-floor", coverage_floor,
                     "Most-frequent baseline coverage floor");
  report->add_option("--out", out, "Output directory");

  // rater-sample
  auto* rater_sample =
      app.add_subcommand("rater-sample", "Draw the human rating set");
  size_t n_items = 100;
  std::string model_id;
  std::optional<int> run_seed;
  std::string shift_filter;
  std::string split_filter;
  rater_sample->add_option("--scores", scores_path, "scores.jsonl")
      ->required();
  rater_sample->add_option("--manifest", manifest_dir, "Manifest directory")
      ->required();
  rater_sample->add_option("--n", n_items, "Number of items");
  rater_sample->add_option("--model-id", model_id, "Restrict to one model");
  rater_sample->add_option("--run-seed", run_seed, "Restrict to one seed");
  rater_sample->add_option("--shift", shift_filter, "Restrict to one shift");
  rater_sample->add_option("--split", split_filter, "Restrict to one split");
  rater_sample->add_option("--out", out, "rater_set.json")->required();

  // rater-analyze
  auto* rater_analyze =
      app.add_subcommand("rater-analyze", "Correlate ratings and metrics");
  std::string ratings_path;
  rater_analyze->add_option("--ratings", ratings_path, "Ratings CSV")
      ->required();
  rater_analyze->add_option("--scores", scores_path, "scores.jsonl");
  rater_analyze->add_option("--model-id", model_id, "Restrict to one model");
  rater_analyze->add_option("--run-seed", run_seed, "Restrict to one seed");
  rater_analyze->add_option("--shift", shift_filter, "Restrict to one shift");
  rater_analyze->add_option("--split", split_filter, "Restrict to one split");
  rater_analyze->add_option("--out", out, "Output directory")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Host the rating UI and API");
  pipeline::ServeOptions serve_options;
  std::string ui_dir;
  serve->add_option("--rater-set", serve_options.rater_set, "rater_set.json")
      ->required();
  serve->add_option("--ratings", serve_options.ratings, "Ratings CSV")
      ->required();
  serve->add_option("--image-root", serve_options.image_roots,
                    "Directories searched for image_ref");
  serve->add_option("--ui-dir", ui_dir, "Static UI directory");
  serve->add_option("--host", serve_options.host, "Bind address");
  serve->add_option("--port", serve_options.port, "Port (0 = any)");

  auto* run = app.add_subcommand("run", "Run the full pipeline from --config");

  CLI11_PARSE(app, argc, argv);

  try {
    auto configured = [&](pipeline::Stage stage) {
      if (g.config.empty()) return false;
      RunConfigured(g, stage);
      return true;
    };
    auto need = [](const std::string& value, const char* flag) {
      if (value.empty()) {
        throw Error(ErrorCode::kValidation,
                    std::string(flag) + " is required without --config");
      }
    };

    if (run->parsed()) {
      need(g.config, "--config");
      RunConfigured(g, std::nullopt);
    } else if (ingest->parsed()) {
      if (configured(pipeline::Stage::kIngest)) return 0;
      need(data_root, "--root");
      need(out, "--out");
      pipeline::IngestStage(dataset::ParseAdapter(adapter), data_root, out);
      const dataset::DatasetManifest m = dataset::ReadManifestDir(out);
      std::cout << "loaded " << m.load_report.loaded << " of "
                << m.load_report.raw << " records ("
                << m.load_report.dropped << " dropped)\n";
    } else if (split_cmd->parsed()) {
      if (list_shifts) {
        for (const split::ShiftSpec& spec : split::BuiltinShifts()) {
          std::cout << spec.name << "\t"
                    << split::ShiftCategoryName(spec.category) << "\n";
        }
        return 0;
      }
      if (configured(pipeline::Stage::kSplit)) return 0;
      need(manifest_dir, "--manifest");
      need(out, "--out");
      std::vector<split::ShiftSpec> specs;
      for (const std::string& name : shift_names) {
        auto spec = split::FindBuiltinShift(name);
        if (!spec) {
          throw Error(ErrorCode::kValidation, "unknown shift '" + name + "'");
        }
        specs.push_back(*spec);
      }
      for (const std::string& file : shift_files) {
        specs.push_back(split::LoadShiftSpec(file));
      }
      if (specs.empty()) {
        throw Error(ErrorCode::kValidation, "give --shift or --shift-file");
      }
      pipeline::SplitStage(dataset::ReadManifestDir(manifest_dir), specs, out);
      for (const split::ShiftSpec& spec : specs) {
        const auto s = split::SplitManifestFromJson(
            ReadJsonFile(fs::path(out) / (spec.name + ".json")));
        std::cout << spec.name << "\ttrain_iid=" << s.train_iid.size()
                  << "\ttest_iid=" << s.test_iid.size()
                  << "\ttest_ood=" << s.test_ood.size() << "\n";
      }
    } else if (corrupt->parsed()) {
      if (configured(pipeline::Stage::kCorrupt)) return 0;
      need(in_dir, "--in");
      need(out, "--out");
      if (log_path.empty()) log_path = (fs::path(out) / "corruption_log.jsonl").string();
      const auto config = corruption::ConfigForSeverity(
          corruption::ParseSeverity(severity), RequireSeed(g));
      const size_t failures =
          corruption::CorruptDirectory(in_dir, out, log_path, config);
      if (failures > 0) {
        std::cerr << failures << " image(s) failed; see " << log_path << "\n";
        return 1;
      }
    } else if (baseline->parsed()) {
      if (configured(pipeline::Stage::kBaseline)) return 0;
      need(manifest_dir, "--manifest");
      need(splits_dir, "--splits");
      need(out, "--out");
      std::vector<split::SplitManifest> splits;
      for (const auto& entry : fs::directory_iterator(splits_dir)) {
        if (entry.path().extension() == ".json") {
          splits.push_back(
              split::SplitManifestFromJson(ReadJsonFile(entry.path())));
        }
      }
      std::sort(splits.begin(), splits.end(),
                [](const auto& a, const auto& b) {
                  return a.shift_name < b.shift_name;
                });
      pipeline::BaselineStage(dataset::ReadManifestDir(manifest_dir), splits,
                              true, true, RequireSeed(g), out);
    } else if (evaluate->parsed()) {
      if (configured(pipeline::Stage::kEvaluate)) return 0;
      need(manifest_dir, "--manifest");
      need(splits_dir, "--splits");
      need(out, "--out");
      const dataset::DatasetManifest manifest =
          dataset::ReadManifestDir(manifest_dir);
      pipeline::EvaluationInput input;
      input.manifest = &manifest;
      for (const auto& entry : fs::directory_iterator(splits_dir)) {
        if (entry.path().extension() == ".json") {
          input.splits.push_back(
              split::SplitManifestFromJson(ReadJsonFile(entry.path())));
        }
      }
      std::sort(input.splits.begin(), input.splits.end(),
                [](const auto& a, const auto& b) {
                  return a.shift_name < b.shift_name;
                });
      for (const std::string& arg : prediction_args) {
        const size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Error(ErrorCode::kValidation,
                      "--predictions expects SHIFT=PATH, got '" + arg + "'");
        }
        input.predictions.emplace_back(arg.substr(eq + 1), arg.substr(0, eq));
      }
      if (!baseline_dir.empty()) input.baseline_dir = baseline_dir;
      const metrics::JudgeConfig judge = StandaloneJudge(g);
      auto client = pipeline::DefaultJudgeClient(judge);
      pipeline::EvaluateStage(input, judge, *client, out);
    } else if (robustness->parsed()) {
      if (configured(pipeline::Stage::kRobustness)) return 0;
      need(scores_path, "--scores");
      need(out, "--out");
      pipeline::AnalysisOptions options;
      options.bootstrap_resamples = resamples;
      options.bootstrap_seed = RequireSeed(g);
      options.alpha = alpha;
      options.correction = stats::ParseCorrection(correction);
      pipeline::RobustnessStage(
          scores_path,
          coverage_path.empty() ? std::nullopt
                                : std::optional<fs::path>(coverage_path),
          options, out);
    } else if (report->parsed()) {
      if (configured(pipeline::Stage::kReport)) return 0;
      need(robustness_path, "--robustness");
      need(out, "--out");
      pipeline::ReportStage(robustness_path, coverage_floor, out);
    } else if (rater_sample->parsed()) {
      const std::vector<metrics::ScoreRecord> scores =
          FilterScores(metrics::ReadScores(scores_path), model_id, run_seed,
                       shift_filter, split_filter);
      const std::vector<std::string> ids =
          rater::SampleRaterSet(scores, n_items, RequireSeed(g));
      const auto items = rater::BuildRaterItems(
          ids, scores, dataset::ReadManifestDir(manifest_dir));
      WriteJsonFile(out, rater::RaterItemsToJson(items));
      std::cout << "wrote " << items.size() << " items to " << out << "\n";
    } else if (rater_analyze->parsed()) {
      const std::vector<rater::RatingRecord> ratings =
          rater::ReadRatings(ratings_path);
      const fs::path dir(out);
      const rater::InterraterResult inter =
          rater::InterraterCorrelation(ratings);
      Json pairs = Json::array();
      for (const rater::RaterPair& p : inter.pairs) {
        pairs.push_back({{"rater_a", p.rater_a},
                         {"rater_b", p.rater_b},
                         {"shared", p.shared},
                         {"tau", p.tau}});
      }
      Json doc{{"ratings", ratings.size()},
               {"interrater_mean_tau", inter.mean_tau},
               {"pairs", pairs}};
      std::string csv = "metric,kendall_tau_b\n";
      csv += "human_interrater," + FormatShortest(inter.mean_tau) + "\n";
      if (!scores_path.empty()) {
        const std::map<std::string, double> human =
            rater::MeanHumanRatings(ratings);
        std::vector<std::string> ids;
        for (const auto& [id, unused] : human) ids.push_back(id);
        const auto scores = FilterScores(metrics::ReadScores(scores_path),
                                         model_id, run_seed, shift_filter,
                                         split_filter);
        Json metrics_json = Json::object();
        for (const auto& [name, tau] : rater::MetricHumanCorrelation(
                 human, rater::MetricTables(scores, ids))) {
          metrics_json[name] = tau;
          csv += name + "," + FormatShortest(tau) + "\n";
        }
        doc["metric_human_tau"] = metrics_json;
      }
      WriteJsonFile(dir / "correlation.json", doc);
      WriteFileAtomic(dir / "correlation.csv", csv);
      std::cout << csv;
    } else if (serve->parsed()) {
      if (!ui_dir.empty()) serve_options.ui_dir = ui_dir;
      pipeline::RatingServer server(serve_options);
      const int port = server.Bind();
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cout << "serving " << server.service().size() << " items on http://"
                << serve_options.host << ":" << port << "\n"
                << std::flush;
      server.Serve();
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.message()
              << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
