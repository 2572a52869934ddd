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

#ifndef VQAEVAL_DATASET_MANIFEST_H_
#define VQAEVAL_DATASET_MANIFEST_H_

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/sample.h"

namespace vqaeval::dataset {

struct DroppedRecord {
  std::string source;    // Annotation file name.
  size_t record_index = 0;  // 0-based position (JSONL: line number - 1).
  std::string sample_id;  // Empty when the record had no usable id.
  std::string reason;
  std::string detail;
};

struct LoadReport {
  size_t raw = 0;
  size_t loaded = 0;
  size_t dropped = 0;
  std::map<std::string, size_t> drop_reasons;
  std::vector<DroppedRecord> drops;

  void Drop(DroppedRecord record);
};

struct DatasetManifest {
  DatasetId dataset = DatasetId::kFixture;
  std::vector<VqaSample> samples;
  std::vector<std::string> source_paths;
  LoadReport load_report;
  // Published split assignment of every sample.
  std::unordered_map<std::string, BaseSplit> base_split;

  const VqaSample* Find(const std::string& sample_id) const;
  std::unordered_map<std::string, size_t> IndexById() const;
};

Json LoadReportToJson(const LoadReport& report);

// Harness-native layout: one JSONL file per base split.
void WriteNativeSamples(const DatasetManifest& manifest,
                        const std::filesystem::path& dir);
// samples.jsonl (all samples in manifest order) + base_split.json +
// load_report.json.
void WriteManifestDir(const DatasetManifest& manifest,
                      const std::filesystem::path& dir);
DatasetManifest ReadManifestDir(const std::filesystem::path& dir);

}  // namespace vqaeval::dataset

#endif  // VQAEVAL_DATASET_MANIFEST_H_
