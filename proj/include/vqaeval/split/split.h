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

#ifndef VQAEVAL_SPLIT_SPLIT_H_
#define VQAEVAL_SPLIT_SPLIT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/dataset/manifest.h"
#include "vqaeval/split/shift_spec.h"

namespace vqaeval::split {

struct SplitManifest {
  std::string shift_name;
  ShiftCategory category = ShiftCategory::kAcquisition;
  std::vector<std::string> train_iid;
  std::vector<std::string> validate;
  std::vector<std::string> test_iid;
  std::vector<std::string> test_ood;
};

// Applies `spec` to the published train/validate/test assignment:
//   - samples matching the exclusion predicate are removed everywhere;
//   - base-test samples go to test_ood (OoD) or test_iid;
//   - base-train OoD samples are appended to test_ood when merging, else
//     discarded; the rest form train_iid;
//   - base-validate samples are kept verbatim (exclusions still apply).
// Lists preserve manifest order; merged train OoD samples follow the base-test
// OoD samples. Throws Error(kInvalidArgument) for a key absent from every
// sample and Error(kInsufficientData) when test_ood is empty.
SplitManifest BuildSplit(const dataset::DatasetManifest& manifest,
                         const ShiftSpec& spec);

struct ExpectedCounts {
  size_t train_iid = 0;
  size_t test_iid = 0;
  size_t test_ood = 0;
  std::optional<size_t> validate;
};

struct CountCheck {
  std::string list;
  size_t observed = 0;
  size_t expected = 0;
  bool pass = false;
};

struct CountValidation {
  std::vector<CountCheck> checks;
  bool pass = true;
  std::string Describe() const;
};

CountValidation ValidateCounts(const SplitManifest& split,
                               const ExpectedCounts& expected);

Json SplitManifestToJson(const SplitManifest& split);
SplitManifest SplitManifestFromJson(const Json& value);

}  // namespace vqaeval::split

#endif  // VQAEVAL_SPLIT_SPLIT_H_
