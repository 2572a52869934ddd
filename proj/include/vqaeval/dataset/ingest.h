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

#ifndef VQAEVAL_DATASET_INGEST_H_
#define VQAEVAL_DATASET_INGEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vqaeval/dataset/manifest.h"
#include "vqaeval/dataset/sample.h"

namespace vqaeval::dataset {

enum class Adapter { kSlake, kOvqa, kMimic, kNative };

Adapter ParseAdapter(std::string_view name);
std::string_view AdapterName(Adapter adapter);

// Loads a corpus from its published annotation layout:
//   slake:  train.json validate.json test.json (English records only)
//   ovqa:   trainset.json valset.json testset.json (or train/valid/test.json),
//           closed questions filtered by FilterOvqaClosed
//   mimic:  train.json valid.json|validate.json test.json, one merged
//           per-question record with subject metadata
//   native: train.jsonl validate.jsonl test.jsonl of VqaSample objects
// Missing annotation files raise Error(kNotFound). Malformed records are
// dropped and listed in the load report.
DatasetManifest LoadDataset(Adapter adapter, const std::filesystem::path& root);

struct QuestionRatio {
  size_t total = 0;
  size_t unique = 0;
  double ratio = 0.0;
};

// Uniqueness over trimmed, whitespace-collapsed question text (case kept).
// Throws Error(kUndefined) for an empty input.
QuestionRatio UniqueQuestionRatio(const std::vector<std::string>& questions);
QuestionRatio UniqueQuestionRatio(const std::vector<VqaSample>& samples);

}  // namespace vqaeval::dataset

#endif  // VQAEVAL_DATASET_INGEST_H_
