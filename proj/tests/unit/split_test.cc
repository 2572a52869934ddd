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
#include <set>

#include "test_util.h"
#include "vqaeval/common/rng.h"
#include "vqaeval/common/text.h"
#include "vqaeval/dataset/ingest.h"
#include "vqaeval/split/builtin_shifts.h"
#include "vqaeval/split/split.h"

namespace vqaeval::split {
namespace {

using dataset::BaseSplit;
using dataset::DatasetManifest;
using dataset::VqaSample;
using ::vqaeval::testing::DataPath;
using Ids = std::vector<std::string>;

DatasetManifest Fixture() {
  return dataset::LoadDataset(dataset::Adapter::kNative,
                              DataPath("fixture/corpus"));
}

Condition Eq(std::string key, std::string value) {
  Condition c;
  c.key = std::move(key);
  c.value = std::move(value);
  return c;
}

TEST(ConditionTest, Operators) {
  VqaSample s;
  s.metadata = {{"modality", "CT"}, {"age", "45"}};
  EXPECT_TRUE(Eq("modality", "ct").Matches(s));
  Condition ne = Eq("modality", "MRI");
  ne.op = ConditionOp::kNotEquals;
  EXPECT_TRUE(ne.Matches(s));
  Condition in;
  in.key = "modality";
  in.op = ConditionOp::kInSet;
  in.values = {"x-ray", "Ct"};
  EXPECT_TRUE(in.Matches(s));
  Condition lt;
  lt.key = "age";
  lt.op = ConditionOp::kAgeLt;
  lt.age = 46;
  EXPECT_TRUE(lt.Matches(s));
  lt.age = 45;
  EXPECT_FALSE(lt.Matches(s));
  Condition gt = lt;
  gt.op = ConditionOp::kAgeGt;
  gt.age = 44;
  EXPECT_TRUE(gt.Matches(s));
  s.metadata.erase("age");
  EXPECT_FALSE(gt.Matches(s));
  EXPECT_TRUE(Eq("age", "none").Matches(s));
}

TEST(ShiftSpecTest, LoadsJsonAndToml) {
  const ShiftSpec json = LoadShiftSpec(DataPath("fixture/shifts/fixture_modality.json"));
  EXPECT_EQ(json.name, "fixture_modality");
  EXPECT_EQ(json.category, ShiftCategory::kAcquisition);
  EXPECT_TRUE(json.merge_ood_train_into_test);
  const ShiftSpec toml =
      LoadShiftSpec(DataPath("fixture/shifts/fixture_question_type.toml"));
  EXPECT_EQ(toml.category, ShiftCategory::kQuestionType);
  ASSERT_EQ(toml.ood.size(), 1u);
  EXPECT_EQ(toml.ood[0].value, "Position");
  EXPECT_EQ(ShiftSpecToJson(ShiftSpecFromJson(ShiftSpecToJson(toml))),
            ShiftSpecToJson(toml));
}

TEST(ShiftSpecTest, StructuralRulesRejected) {
  ShiftSpec spec;
  spec.name = "x";
  EXPECT_ERROR_CODE(ValidateShiftSpec(spec), ErrorCode::kValidation);
  spec.ood = {Eq("colour", "red")};
  EXPECT_ERROR_CODE(ValidateShiftSpec(spec), ErrorCode::kValidation);
  Condition age = Eq("modality", "");
  age.op = ConditionOp::kAgeLt;
  spec.ood = {age};
  EXPECT_ERROR_CODE(ValidateShiftSpec(spec), ErrorCode::kValidation);
  spec.ood = {Eq("body_part", "Leg")};
  spec.category = ShiftCategory::kMultimodal;
  EXPECT_ERROR_CODE(ValidateShiftSpec(spec), ErrorCode::kValidation);
  spec.ood.push_back(Eq("content_type", "Organ System"));
  EXPECT_NO_THROW(ValidateShiftSpec(spec));
  EXPECT_ERROR_CODE(ShiftSpecFromJson(Json{{"name", "y"}, {"category", "weather"},
                                           {"ood", Json::array()}}),
                    ErrorCode::kValidation);
}

TEST(BuiltinShiftsTest, AllValidAndFindable) {
  EXPECT_EQ(BuiltinShifts().size(), 10u);
  for (const ShiftSpec& spec : BuiltinShifts()) {
    EXPECT_NO_THROW(ValidateShiftSpec(spec)) << spec.name;
    ASSERT_TRUE(FindBuiltinShift(spec.name));
  }
  EXPECT_FALSE(FindBuiltinShift("unknown"));
  const ShiftSpec age = *FindBuiltinShift("mimic_age");
  VqaSample s;
  s.metadata = {{"age", "50"}};
  EXPECT_TRUE(age.IsExcluded(s));
  s.metadata["age"] = "39";
  EXPECT_FALSE(age.IsExcluded(s));
  EXPECT_TRUE(age.IsOod(s));
  s.metadata["age"] = "61";
  EXPECT_FALSE(age.IsExcluded(s));
  EXPECT_FALSE(age.IsOod(s));
  s.metadata.erase("age");
  EXPECT_TRUE(age.IsExcluded(s));
}

TEST(BuildSplitTest, FixtureModalityMergesTrainOod) {
  const SplitManifest split = BuildSplit(
      Fixture(), LoadShiftSpec(DataPath("fixture/shifts/fixture_modality.json")));
  EXPECT_EQ(split.train_iid, (Ids{"f01", "f02", "f03", "f05"}));
  EXPECT_EQ(split.validate, (Ids{"f07", "f08"}));
  EXPECT_EQ(split.test_iid, (Ids{"f10", "f11", "f12"}));
  EXPECT_EQ(split.test_ood, (Ids{"f09", "f04", "f06"}));
}

TEST(BuildSplitTest, FixtureQuestionTypeDiscardsTrainOod) {
  const SplitManifest split = BuildSplit(
      Fixture(),
      LoadShiftSpec(DataPath("fixture/shifts/fixture_question_type.toml")));
  EXPECT_EQ(split.train_iid, (Ids{"f01", "f02", "f04", "f05", "f06"}));
  EXPECT_EQ(split.validate, (Ids{"f07", "f08"}));
  EXPECT_EQ(split.test_iid, (Ids{"f10", "f11", "f12"}));
  EXPECT_EQ(split.test_ood, (Ids{"f09"}));
}

TEST(BuildSplitTest, ErrorsForUnknownKeyAndEmptyOod) {
  ShiftSpec spec;
  spec.name = "gender";
  spec.ood = {Eq("gender", "F")};
  EXPECT_ERROR_CODE(BuildSplit(Fixture(), spec), ErrorCode::kInvalidArgument);
  spec.ood = {Eq("modality", "PET")};
  EXPECT_ERROR_CODE(BuildSplit(Fixture(), spec), ErrorCode::kInsufficientData);
}

// Randomized predicates against a direct restatement of the split rules.
TEST(BuildSplitTest, MatchesBruteForceDefinition) {
  const DatasetManifest manifest = Fixture();
  const std::map<std::string, std::vector<std::string>> values = {
      {"modality", {"CT", "MRI"}},
      {"body_part", {"Chest", "Head", "Abdomen"}},
      {"content_type", {"Organ", "Position", "Abnormality", "Modality", "Size"}}};
  std::vector<std::string> keys;
  for (const auto& [key, unused] : values) keys.push_back(key);
  Rng rng(99);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    ShiftSpec spec;
    spec.name = "t" + std::to_string(trial);
    const size_t ood_terms = 1 + rng.UniformIndex(2);
    for (size_t i = 0; i < ood_terms; ++i) {
      const std::string& key = keys[rng.UniformIndex(keys.size())];
      Condition c = Eq(key, values.at(key)[rng.UniformIndex(values.at(key).size())]);
      if (rng.Uniform() < 0.3) c.op = ConditionOp::kNotEquals;
      spec.ood.push_back(c);
    }
    if (rng.Uniform() < 0.5) {
      const std::string& key = keys[rng.UniformIndex(keys.size())];
      spec.exclude.push_back(
          {Eq(key, values.at(key)[rng.UniformIndex(values.at(key).size())])});
    }
    spec.merge_ood_train_into_test = rng.Uniform() < 0.5;

    SplitManifest expected;
    Ids train_ood;
    for (const VqaSample& s : manifest.samples) {
      bool excluded = false;
      for (const Conjunction& clause : spec.exclude) {
        bool all = true;
        for (const Condition& c : clause) {
          const bool eq = EqualsIgnoreCaseAscii(s.Meta(c.key), c.value);
          all = all && (c.op == ConditionOp::kEquals ? eq : !eq);
        }
        excluded = excluded || all;
      }
      if (excluded) continue;
      bool ood = true;
      for (const Condition& c : spec.ood) {
        const bool eq = EqualsIgnoreCaseAscii(s.Meta(c.key), c.value);
        ood = ood && (c.op == ConditionOp::kEquals ? eq : !eq);
      }
      switch (manifest.base_split.at(s.sample_id)) {
        case BaseSplit::kTrain:
          (ood ? train_ood : expected.train_iid).push_back(s.sample_id);
          break;
        case BaseSplit::kValidate:
          expected.validate.push_back(s.sample_id);
          break;
        case BaseSplit::kTest:
          (ood ? expected.test_ood : expected.test_iid).push_back(s.sample_id);
          break;
      }
    }
    if (spec.merge_ood_train_into_test) {
      expected.test_ood.insert(expected.test_ood.end(), train_ood.begin(),
                               train_ood.end());
    }
    if (expected.test_ood.empty()) {
      EXPECT_ERROR_CODE(BuildSplit(manifest, spec),
                        ErrorCode::kInsufficientData);
      continue;
    }
    const SplitManifest actual = BuildSplit(manifest, spec);
    EXPECT_EQ(actual.train_iid, expected.train_iid) << spec.name;
    EXPECT_EQ(actual.validate, expected.validate) << spec.name;
    EXPECT_EQ(actual.test_iid, expected.test_iid) << spec.name;
    EXPECT_EQ(actual.test_ood, expected.test_ood) << spec.name;
    // Lists are disjoint.
    std::set<std::string> all;
    for (const Ids* list : {&actual.train_iid, &actual.validate,
                            &actual.test_iid, &actual.test_ood}) {
      for (const std::string& id : *list) EXPECT_TRUE(all.insert(id).second);
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ValidateCountsTest, ReportsEachList) {
  SplitManifest split;
  split.train_iid = {"a", "b"};
  split.test_iid = {"c"};
  split.test_ood = {"d", "e"};
  CountValidation v = ValidateCounts(split, {2, 1, 2, std::nullopt});
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.checks.size(), 3u);
  v = ValidateCounts(split, {2, 1, 3, 0});
  EXPECT_FALSE(v.pass);
  ASSERT_EQ(v.checks.size(), 4u);
  EXPECT_FALSE(std::find_if(v.checks.begin(), v.checks.end(), [](auto& c) {
                 return c.list == "test_ood";
               })->pass);
  EXPECT_NE(v.Describe().find("test_ood"), std::string::npos);
}

TEST(SplitManifestTest, JsonRoundTrip) {
  SplitManifest split;
  split.shift_name = "s";
  split.category = ShiftCategory::kCorruption;
  split.train_iid = {"a"};
  split.validate = {"b"};
  split.test_iid = {"c"};
  split.test_ood = {"d"};
  const SplitManifest back = SplitManifestFromJson(SplitManifestToJson(split));
  EXPECT_EQ(back.shift_name, "s");
  EXPECT_EQ(back.category, ShiftCategory::kCorruption);
  EXPECT_EQ(back.test_ood, split.test_ood);
  EXPECT_EQ(back.validate, split.validate);
}

}  // namespace
}  // namespace vqaeval::split
