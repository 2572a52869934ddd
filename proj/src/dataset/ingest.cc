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

#include "vqaeval/dataset/ingest.h"

#include <functional>
#include <optional>
#include <unordered_set>

#include "vqaeval/common/error.h"
#include "vqaeval/common/text.h"
#include "vqaeval/dataset/closed_options.h"
#include "vqaeval/dataset/mimic.h"
#include "vqaeval/metrics/text_metrics.h"

namespace vqaeval::dataset {
namespace fs = std::filesystem;

namespace {

constexpr BaseSplit kSplits[] = {BaseSplit::kTrain, BaseSplit::kValidate,
                                 BaseSplit::kTest};

// Raised inside per-record parsing; converted to a load-report entry.
struct RecordError {
  std::string reason;
  std::string detail;
};

fs::path FindFile(const fs::path& root,
                  const std::vector<std::string>& candidates) {
  for (const std::string& name : candidates) {
    if (fs::is_regular_file(root / name)) return root / name;
  }
  throw Error(ErrorCode::kNotFound, "missing annotation file " +
                                        (root / candidates.front()).string());
}

// Whitespace-only files count as an empty record list.
Json ReadRecordArray(const fs::path& path) {
  const std::string text = ReadFile(path);
  if (Trim(text).empty()) return Json::array();
  Json value = ParseJson(text, path.string());
  if (!value.is_array()) {
    throw Error(ErrorCode::kParse, path.string() + ": expected a JSON array");
  }
  return value;
}

std::string ScalarText(const Json& record, const char* key, bool required) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) throw RecordError{"malformed", std::string("missing ") + key};
    return {};
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_number()) return FormatShortest(it->get<double>());
  if (it->is_boolean()) return it->get<bool>() ? "yes" : "no";
  throw RecordError{"malformed", std::string("non-scalar ") + key};
}

std::optional<std::string> OptionalText(const Json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  std::string text = Trim(ScalarText(record, key, true));
  if (text.empty()) return std::nullopt;
  return text;
}

void SetMeta(VqaSample& sample, const char* key,
             const std::optional<std::string>& value) {
  sample.metadata[key] = value ? *value : std::string(kNone);
}

AnswerClass ClassFromAnswerType(const std::string& answer_type) {
  const std::string lower = ToLowerAscii(Trim(answer_type));
  if (lower == "open") return AnswerClass::kOpen;
  if (lower == "closed") return AnswerClass::kClosedBinary;
  throw RecordError{"malformed", "unknown answer_type '" + answer_type + "'"};
}

struct Collector {
  DatasetManifest manifest;
  std::unordered_set<std::string> ids;

  void Add(VqaSample sample, BaseSplit split, const std::string& source,
           size_t index) {
    if (!ids.insert(sample.sample_id).second) {
      manifest.load_report.Drop(
          {source, index, sample.sample_id, "duplicate_id", ""});
      return;
    }
    try {
      ValidateSample(sample);
    } catch (const Error& e) {
      std::string reason = "invalid_sample";
      if (metrics::NormalizeAnswer(sample.question).empty()) {
        reason = "empty_question";
      } else if (metrics::NormalizeAnswer(sample.answer).empty()) {
        reason = "empty_answer";
      }
      ids.erase(sample.sample_id);
      manifest.load_report.Drop(
          {source, index, sample.sample_id, reason, e.what()});
      return;
    }
    manifest.base_split[sample.sample_id] = split;
    manifest.samples.push_back(std::move(sample));
    ++manifest.load_report.loaded;
  }

  void Drop(const std::string& source, size_t index, std::string id,
            const RecordError& error) {
    manifest.load_report.Drop(
        {source, index, std::move(id), error.reason, error.detail});
  }
};

using RecordParser =
    std::function<void(const Json&, BaseSplit, const std::string&, size_t,
                       Collector&)>;

void LoadJsonSplits(const fs::path& root,
                    const std::vector<std::vector<std::string>>& names,
                    const RecordParser& parse, Collector& collector) {
  for (size_t s = 0; s < 3; ++s) {
    const fs::path path = FindFile(root, names[s]);
    collector.manifest.source_paths.push_back(path.filename().string());
    const Json records = ReadRecordArray(path);
    const std::string source = path.filename().string();
    for (size_t i = 0; i < records.size(); ++i) {
      ++collector.manifest.load_report.raw;
      try {
        if (!records[i].is_object()) {
          throw RecordError{"malformed", "record is not an object"};
        }
        parse(records[i], kSplits[s], source, i, collector);
      } catch (const RecordError& error) {
        collector.Drop(source, i, "", error);
      }
    }
  }
}

void ParseSlake(const Json& record, BaseSplit split, const std::string& source,
                size_t index, Collector& collector) {
  const std::string qid = ScalarText(record, "qid", true);
  const std::string id = "slake-" + qid;
  const std::string lang = ScalarText(record, "q_lang", false);
  if (!lang.empty() && lang != "en") {
    collector.Drop(source, index, id, {"non_english", lang});
    return;
  }
  VqaSample sample;
  sample.sample_id = id;
  sample.dataset = DatasetId::kSlake;
  sample.image_ref = "imgs/" + ScalarText(record, "img_name", true);
  sample.question = ScalarText(record, "question", true);
  sample.answer = ScalarText(record, "answer", true);
  sample.answer_class =
      ClassFromAnswerType(ScalarText(record, "answer_type", true));
  SetMeta(sample, "modality", OptionalText(record, "modality"));
  SetMeta(sample, "body_part", OptionalText(record, "location"));
  SetMeta(sample, "content_type", OptionalText(record, "content_type"));
  collector.Add(std::move(sample), split, source, index);
}

void ParseOvqa(const Json& record, BaseSplit split, const std::string& source,
               size_t index, Collector& collector) {
  VqaSample sample;
  sample.sample_id = "ovqa-" + ScalarText(record, "qid", true);
  sample.dataset = DatasetId::kOvqa;
  sample.image_ref = "img/" + ScalarText(record, "image_name", true);
  sample.question = ScalarText(record, "question", true);
  sample.answer = ScalarText(record, "answer", true);
  sample.answer_class =
      ClassFromAnswerType(ScalarText(record, "answer_type", true));
  SetMeta(sample, "body_part", OptionalText(record, "image_organ"));
  SetMeta(sample, "content_type", OptionalText(record, "question_type"));
  if (auto modality = OptionalText(record, "image_modality")) {
    sample.metadata["modality"] = *modality;
  }
  if (std::optional<std::string> reason = OvqaClosedDropReason(sample)) {
    collector.Drop(source, index, sample.sample_id, {*reason, sample.question});
    return;
  }
  collector.Add(std::move(sample), split, source, index);
}

// First pass output for MIMIC; metadata is resolved once all splits are read.
struct MimicPending {
  VqaSample sample;
  BaseSplit split;
  std::string source;
  size_t index;
};

const std::vector<std::string> kSubjectFields = {"gender", "ethnicity", "age"};

std::vector<std::string> LabelList(const Json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return {};
  if (it->is_string()) return {it->get<std::string>()};
  if (!it->is_array()) throw RecordError{"malformed", "answer is not a list"};
  std::vector<std::string> labels;
  for (const Json& label : *it) {
    if (!label.is_string()) {
      throw RecordError{"malformed", "answer label is not a string"};
    }
    labels.push_back(label.get<std::string>());
  }
  return labels;
}

DatasetManifest LoadMimic(const fs::path& root) {
  Collector collector;
  collector.manifest.dataset = DatasetId::kMimic;
  std::vector<MimicPending> pending;
  std::map<std::string, std::vector<MetadataRecord>> by_subject;

  auto parse = [&](const Json& record, BaseSplit split,
                   const std::string& source, size_t index, Collector&) {
    const std::string id = "mimic-" + std::string(BaseSplitName(split)) + "-" +
                           ScalarText(record, "idx", true);
    SemanticType type;
    try {
      type = ParseSemanticType(ScalarText(record, "semantic_type", true));
    } catch (const Error& e) {
      throw RecordError{"malformed", e.what()};
    }
    std::optional<std::pair<std::string, std::string>> options;
    const std::vector<std::string> option_list = LabelList(record, "options");
    if (option_list.size() == 2) {
      options = std::make_pair(option_list[0], option_list[1]);
    } else if (!option_list.empty()) {
      throw RecordError{"malformed", "options must hold exactly two labels"};
    }
    VqaSample sample;
    sample.sample_id = id;
    sample.dataset = DatasetId::kMimic;
    sample.image_ref = ScalarText(record, "image_path", true);
    sample.question = ScalarText(record, "question", true);
    try {
      sample.answer =
          PreprocessMimicAnswer(type, LabelList(record, "answer"), options);
    } catch (const Error& e) {
      const std::string reason =
          !options && type == SemanticType::kChoose ? "choose_without_options"
          : type == SemanticType::kQuery            ? "duplicate_query_labels"
                                                    : "invalid_answer";
      collector.Drop(source, index, id, {reason, e.what()});
      return;
    }
    sample.answer_class = type == SemanticType::kChoose
                              ? AnswerClass::kClosedMultilabel
                          : type == SemanticType::kVerify
                              ? AnswerClass::kClosedBinary
                              : AnswerClass::kOpen;
    const std::string subject = ScalarText(record, "subject_id", true);
    sample.metadata["subject_id"] = subject;
    sample.metadata["semantic_type"] = SemanticTypeName(type);
    if (options) {
      sample.metadata["options"] = options->first + " | " + options->second;
    }
    SetMeta(sample, "content_type", OptionalText(record, "content_type"));
    MetadataRecord meta;
    for (const std::string& field : kSubjectFields) {
      meta[field] = OptionalText(record, field.c_str());
    }
    if (meta["age"] && *meta["age"] != kNone && !ParseAge(*meta["age"])) {
      throw RecordError{"invalid_age", *meta["age"]};
    }
    by_subject[subject].push_back(std::move(meta));
    pending.push_back({std::move(sample), split, source, index});
  };
  LoadJsonSplits(root,
                 {{"train.json"}, {"valid.json", "validate.json"}, {"test.json"}},
                 parse, collector);

  const auto resolved = ResolveSubjectMetadata(by_subject, kSubjectFields);
  for (MimicPending& item : pending) {
    const auto& meta = resolved.at(item.sample.metadata.at("subject_id"));
    for (const auto& [field, value] : meta) {
      if (field == "age" && value == kNone) continue;
      item.sample.metadata[field] = value;
    }
    collector.Add(std::move(item.sample), item.split, item.source, item.index);
  }
  return std::move(collector.manifest);
}

DatasetManifest LoadNative(const fs::path& root) {
  Collector collector;
  std::optional<DatasetId> dataset;
  for (BaseSplit split : kSplits) {
    const std::string name = std::string(BaseSplitName(split)) + ".jsonl";
    const fs::path path = FindFile(root, {name});
    collector.manifest.source_paths.push_back(name);
    for (const JsonlLine& line : ReadJsonl(path)) {
      ++collector.manifest.load_report.raw;
      const size_t index = line.line_number - 1;
      if (!line.error.empty()) {
        collector.Drop(name, index, "", {"malformed", line.error});
        continue;
      }
      VqaSample sample;
      try {
        sample = SampleFromJson(line.value);
      } catch (const Error& e) {
        std::string id;
        if (line.value.is_object() && line.value.contains("sample_id") &&
            line.value["sample_id"].is_string()) {
          id = line.value["sample_id"].get<std::string>();
        }
        collector.Drop(name, index, id, {"malformed", e.what()});
        continue;
      }
      if (!dataset) dataset = sample.dataset;
      if (sample.dataset != *dataset) {
        collector.Drop(name, index, sample.sample_id,
                       {"mixed_dataset", std::string(DatasetName(sample.dataset))});
        continue;
      }
      collector.Add(std::move(sample), split, name, index);
    }
  }
  collector.manifest.dataset = dataset.value_or(DatasetId::kFixture);
  return std::move(collector.manifest);
}

}  // namespace

Adapter ParseAdapter(std::string_view name) {
  if (name == "slake") return Adapter::kSlake;
  if (name == "ovqa") return Adapter::kOvqa;
  if (name == "mimic") return Adapter::kMimic;
  if (name == "native" || name == "fixture") return Adapter::kNative;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown adapter '" + std::string(name) + "'");
}

std::string_view AdapterName(Adapter adapter) {
  switch (adapter) {
    case Adapter::kSlake: return "slake";
    case Adapter::kOvqa: return "ovqa";
    case Adapter::kMimic: return "mimic";
    case Adapter::kNative: return "native";
  }
  return "native";
}

DatasetManifest LoadDataset(Adapter adapter, const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kNotFound, "dataset root " + root.string());
  }
  switch (adapter) {
    case Adapter::kSlake: {
      Collector collector;
      collector.manifest.dataset = DatasetId::kSlake;
      LoadJsonSplits(root, {{"train.json"}, {"validate.json"}, {"test.json"}},
                     ParseSlake, collector);
      return std::move(collector.manifest);
    }
    case Adapter::kOvqa: {
      Collector collector;
      collector.manifest.dataset = DatasetId::kOvqa;
      LoadJsonSplits(root,
                     {{"trainset.json", "train.json"},
                      {"valset.json", "valid.json", "validate.json"},
                      {"testset.json", "test.json"}},
                     ParseOvqa, collector);
      return std::move(collector.manifest);
    }
    case Adapter::kMimic:
      return LoadMimic(root);
    case Adapter::kNative:
      return LoadNative(root);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown adapter");
}

QuestionRatio UniqueQuestionRatio(const std::vector<std::string>& questions) {
  if (questions.empty()) {
    throw Error(ErrorCode::kUndefined,
                "unique question ratio of an empty sample set");
  }
  std::unordered_set<std::string> unique;
  for (const std::string& question : questions) {
    unique.insert(CollapseWhitespace(question));
  }
  QuestionRatio ratio;
  ratio.total = questions.size();
  ratio.unique = unique.size();
  ratio.ratio = static_cast<double>(ratio.unique) / ratio.total;
  return ratio;
}

QuestionRatio UniqueQuestionRatio(const std::vector<VqaSample>& samples) {
  std::vector<std::string> questions;
  questions.reserve(samples.size());
  for (const VqaSample& sample : samples) questions.push_back(sample.question);
  return UniqueQuestionRatio(questions);
}

}  // namespace vqaeval::dataset
