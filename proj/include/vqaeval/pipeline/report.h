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

#ifndef VQAEVAL_PIPELINE_REPORT_H_
#define VQAEVAL_PIPELINE_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/metrics/score.h"
#include "vqaeval/stats/hypothesis.h"

namespace vqaeval::pipeline {

struct AnalysisOptions {
  size_t bootstrap_resamples = 100;
  uint64_t bootstrap_seed = 0;
  double alpha = 0.05;
  stats::Correction correction = stats::Correction::kHolm;
};

// The four parameter-efficient and full fine-tuning methods; rankings,
// variance, significance and ANOVA are restricted to these.
bool IsFineTuningMethod(std::string_view method);

// Robustness document: cells, undefined RR seeds, FT-method ranks and rank
// distribution, variance decomposition, per-cell bootstrap, win/loss
// significance matrices, per-group ANOVA, image/no-image and
// medical/general win/tie/lose tallies, and the baseline coverage passed in.
// Sub-analyses that cannot be computed carry an "error" string instead of
// aborting the document.
Json BuildRobustnessDocument(const std::vector<metrics::ScoreRecord>& scores,
                             const Json& baseline_coverage,
                             const AnalysisOptions& options);

// An empty document with every section present.
Json EmptyRobustnessDocument();

// Report files keyed by relative name. Tables print P and RR to two
// decimals. most_frequent rows of a shift whose baseline coverage is below
// `coverage_floor` are withheld and a footnote says so. Missing sections
// render as header-only files.
std::map<std::string, std::string> RenderReport(const Json& robustness,
                                                double coverage_floor);

void WriteReportFiles(const std::map<std::string, std::string>& files,
                      const std::filesystem::path& dir);

}  // namespace vqaeval::pipeline

#endif  // VQAEVAL_PIPELINE_REPORT_H_
