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

#include "vqaeval/split/split.h"

#include <sstream>

#include "vqaeval/common/error.h"

namespace vqaeval::split {

SplitManifest BuildSplit(const dataset::DatasetManifest& manifest,
                         const ShiftSpec& spec) {
  ValidateShiftSpec(spec);
  auto check_key = [&](const Condition& condition) {
    for (const dataset::VqaSample& sample : manifest.samples) {
      if (sample.metadata.count(condition.key) > 0) return;
    }
    // An age key may legitimately be absent on every sample only when the
    // predicate tests for "none"; otherwise the shift spec targets the wrong corpus.
    if (condition.key == "age" && condition.op == ConditionOp::kEquals) return;
    throw Error(ErrorCode::kInvalidArgument,
                "shift '" + spec.name + "' references metadata key '" +
                    condition.key + "' absent from the " +
                    std::string(dataset::DatasetName(manifest.dataset)) +
                    " manifest");
  };
  for (const Condition& condition : spec.ood) check_key(condition);
  for (const Conjunction& clause : spec.exclude) {
    for (const Condition& condition : clause) check_key(condition);
  }

  SplitManifest out;
  out.shift_name = spec.name;
  out.category = spec.category;
  std::vector<std::string> train_ood;
  for (const dataset::VqaSample& sample : manifest.samples) {
    auto split_it = manifest.base_split.find(sample.sample_id);
    if (split_it == manifest.base_split.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample '" + sample.sample_id + "' has no base split");
    }
    if (spec.IsExcluded(sample)) continue;
    const bool ood = spec.IsOod(sample);
    switch (split_it->second) {
      case dataset::BaseSplit::kTrain:
        (ood ? train_ood : out.train_iid).push_back(sample.sample_id);
        break;
      case dataset::BaseSplit::kValidate:
        out.validate.push_back(sample.sample_id);
        break;
      case dataset::BaseSplit::kTest:
        (ood ? out.test_ood : out.test_iid).push_back(sample.sample_id);
        break;
    }
  }
  if (spec.merge_ood_train_into_test) {
    out.test_ood.insert(out.test_ood.end(), train_ood.begin(), train_ood.end());
  }
  if (out.test_ood.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "shift '" + spec.name + "' yields an empty OoD test set");
  }
  return out;
}

CountValidation ValidateCounts(const SplitManifest& split,
                               const ExpectedCounts& expected) {
  CountValidation result;
  auto add = [&](const char* list, size_t observed, size_t want) {
    result.checks.push_back({list, observed, want, observed == want});
    result.pass = result.pass && observed == want;
  };
  add("train_iid", split.train_iid.size(), expected.train_iid);
  add("test_iid", split.test_iid.size(), expected.test_iid);
  add("test_ood", split.test_ood.size(), expected.test_ood);
  if (expected.validate) {
    add("validate", split.validate.size(), *expected.validate);
  }
  return result;
}

std::string CountValidation::Describe() const {
  std::ostringstream out;
  for (const CountCheck& check : checks) {
    out << check.list << ": observed " << check.observed << " expected "
        << check.expected;
    if (!check.pass) {
      out << " (delta "
          << static_cast<long long>(check.observed) -
                 static_cast<long long>(check.expected)
          << ")";
    }
    out << (check.pass ? " PASS" : " FAIL") << "\n";
  }
  return out.str();
}

Json SplitManifestToJson(const SplitManifest& split) {
  return Json{{"shift", split.shift_name},
              {"category", ShiftCategoryName(split.category)},
              {"counts",
               {{"train_iid", split.train_iid.size()},
                {"validate", split.validate.size()},
                {"test_iid", split.test_iid.size()},
                {"test_ood", split.test_ood.size()}}},
              {"train_iid", split.train_iid},
              {"validate", split.validate},
              {"test_iid", split.test_iid},
              {"test_ood", split.test_ood}};
}

SplitManifest SplitManifestFromJson(const Json& value) {
  SplitManifest split;
  try {
    split.shift_name = value.at("shift").get<std::string>();
    split.category = ParseShiftCategory(value.at("category").get<std::string>());
    split.train_iid = value.at("train_iid").get<std::vector<std::string>>();
    split.validate = value.at("validate").get<std::vector<std::string>>();
    split.test_iid = value.at("test_iid").get<std::vector<std::string>>();
    split.test_ood = value.at("test_ood").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed split manifest: ") + e.what());
  }
  return split;
}

}  // namespace vqaeval::split
