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

#include "vqaeval/stats/robustness.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "vqaeval/common/error.h"
#include "vqaeval/metrics/aggregate.h"

namespace vqaeval::stats {

double RelativeRobustness(double p_iid, double p_ood) {
  if (!std::isfinite(p_iid) || !std::isfinite(p_ood) || p_iid < 0.0 ||
      p_ood < 0.0) {
    throw Error(ErrorCode::kDomain, "performance values must be finite and >= 0");
  }
  if (p_iid == 0.0) {
    throw Error(ErrorCode::kUndefined, "RR undefined for zero i.i.d. performance");
  }
  return p_ood / p_iid;
}

namespace {

using CellKey = std::tuple<std::string, std::string, std::string, std::string,
                           bool, std::string>;

std::vector<double> Collect(const std::vector<SeedRobustness>& seeds,
                            double SeedRobustness::*field) {
  std::vector<double> values;
  for (const SeedRobustness& s : seeds) values.push_back(s.*field);
  return values;
}

}  // namespace

std::vector<RobustnessCell> ComputeCells(
    const std::vector<metrics::ScoreRecord>& scores,
    const std::string& iid_split, std::vector<std::string>* undefined) {
  // cell -> seed -> (iid values, ood values)
  std::map<CellKey,
           std::map<std::string,
                    std::pair<std::vector<double>, std::vector<double>>>>
      grouped;
  for (const metrics::ScoreRecord& r : scores) {
    if (r.Failed() || r.context.split == "validate") continue;
    const CellKey key{r.context.dataset,
                      r.context.shift,
                      std::string(metrics::MethodName(r.context.method)),
                      std::string(metrics::BaseModelName(r.context.base_model)),
                      r.context.uses_image,
                      metrics::CoarseAnswerClass(r.answer_class)};
    auto& sides = grouped[key][metrics::GroupKeyValue(r, "seed")];
    (r.context.split == iid_split ? sides.first : sides.second)
        .push_back(r.Value());
  }
  std::vector<RobustnessCell> cells;
  for (const auto& [key, by_seed] : grouped) {
    RobustnessCell cell;
    std::tie(cell.dataset, cell.shift, cell.method, cell.base_model,
             cell.uses_image, cell.answer_class) = key;
    for (const auto& [seed, sides] : by_seed) {
      if (sides.first.empty() || sides.second.empty()) continue;
      SeedRobustness s;
      s.seed = seed;
      s.iid_values = sides.first;
      s.ood_values = sides.second;
      s.p_iid = metrics::Mean(s.iid_values);
      s.p_ood = metrics::Mean(s.ood_values);
      if (s.p_iid == 0.0) {
        if (undefined != nullptr) {
          undefined->push_back(cell.dataset + "/" + cell.shift + "/" +
                               cell.method + "/" + cell.base_model + "/" +
                               (cell.uses_image ? "image" : "no_image") + "/" +
                               cell.answer_class + "/" + seed);
        }
        continue;
      }
      s.rr = RelativeRobustness(s.p_iid, s.p_ood);
      cell.seeds.push_back(std::move(s));
    }
    if (cell.seeds.empty()) continue;
    const auto p_iid = Collect(cell.seeds, &SeedRobustness::p_iid);
    const auto p_ood = Collect(cell.seeds, &SeedRobustness::p_ood);
    const auto rr = Collect(cell.seeds, &SeedRobustness::rr);
    cell.p_iid = metrics::Mean(p_iid);
    cell.p_ood = metrics::Mean(p_ood);
    cell.rr = metrics::Mean(rr);
    cell.p_iid_std = metrics::SampleStd(p_iid);
    cell.p_ood_std = metrics::SampleStd(p_ood);
    cell.rr_std = metrics::SampleStd(rr);
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<RankEntry> RankMethods(const std::vector<RobustnessCell>& cells) {
  using GroupKey =
      std::tuple<std::string, std::string, std::string, bool, std::string>;
  std::map<GroupKey, std::vector<const RobustnessCell*>> groups;
  for (const RobustnessCell& cell : cells) {
    groups[{cell.dataset, cell.shift, cell.base_model, cell.uses_image,
            cell.answer_class}]
        .push_back(&cell);
  }
  std::vector<RankEntry> out;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::stable_sort(members.begin(), members.end(),
                     [](const RobustnessCell* a, const RobustnessCell* b) {
                       if (a->rr != b->rr) return a->rr > b->rr;
                       return a->method < b->method;
                     });
    int rank = 0;
    double previous = 0.0;
    for (size_t i = 0; i < members.size(); ++i) {
      if (i == 0 || members[i]->rr != previous) ++rank;
      previous = members[i]->rr;
      RankEntry entry;
      std::tie(entry.dataset, entry.shift, entry.base_model, entry.uses_image,
               entry.answer_class) = key;
      entry.method = members[i]->method;
      entry.rr = members[i]->rr;
      entry.rank = rank;
      out.push_back(std::move(entry));
    }
  }
  return out;
}

std::map<std::string, std::map<int, int>> RankDistribution(
    const std::vector<RankEntry>& ranks) {
  std::map<std::string, std::map<int, int>> out;
  for (const RankEntry& entry : ranks) ++out[entry.method][entry.rank];
  return out;
}

std::vector<VarianceRow> VarianceDecomposition(
    const std::vector<RobustnessCell>& cells) {
  using GroupKey = std::tuple<std::string, std::string, bool, std::string>;
  std::map<GroupKey, std::map<std::pair<std::string, std::string>, double>>
      grids;
  for (const RobustnessCell& cell : cells) {
    grids[{cell.dataset, cell.base_model, cell.uses_image, cell.answer_class}]
         [{cell.shift, cell.method}] = cell.rr;
  }
  std::vector<VarianceRow> out;
  for (const auto& [key, grid] : grids) {
    std::set<std::string> shifts;
    std::set<std::string> methods;
    for (const auto& [sm, rr] : grid) {
      shifts.insert(sm.first);
      methods.insert(sm.second);
    }
    if (grid.size() != shifts.size() * methods.size()) {
      throw Error(ErrorCode::kInsufficientData,
                  "robustness grid for " + std::get<0>(key) +
                      " has missing shift x method cells");
    }
    std::vector<double> shift_means;
    for (const std::string& shift : shifts) {
      double sum = 0.0;
      for (const std::string& method : methods) sum += grid.at({shift, method});
      shift_means.push_back(sum / methods.size());
    }
    std::vector<double> method_means;
    for (const std::string& method : methods) {
      double sum = 0.0;
      for (const std::string& shift : shifts) sum += grid.at({shift, method});
      method_means.push_back(sum / shifts.size());
    }
    VarianceRow row;
    std::tie(row.dataset, row.base_model, row.uses_image, row.answer_class) =
        key;
    row.shifts = shifts.size();
    row.methods = methods.size();
    row.std_between_shifts = metrics::SampleStd(shift_means);
    row.std_between_methods = metrics::SampleStd(method_means);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<WtlRow> PairwiseWtl(const std::vector<metrics::ScoreRecord>& a,
                                const std::vector<metrics::ScoreRecord>& b) {
  using Key = std::pair<std::string, std::string>;  // (sample_id, split)
  std::map<Key, const metrics::ScoreRecord*> b_index;
  for (const metrics::ScoreRecord& r : b) {
    if (!b_index.emplace(Key{r.sample_id, r.context.split}, &r).second) {
      throw Error(ErrorCode::kMisaligned,
                  "duplicate score for '" + r.sample_id + "' in B");
    }
  }
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kMisaligned, "score lists differ in size");
  }
  std::map<Key, WtlRow> rows;  // (answer_class, split)
  std::set<Key> seen;
  for (const metrics::ScoreRecord& ra : a) {
    const Key key{ra.sample_id, ra.context.split};
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kMisaligned,
                  "duplicate score for '" + ra.sample_id + "' in A");
    }
    auto it = b_index.find(key);
    if (it == b_index.end()) {
      throw Error(ErrorCode::kMisaligned,
                  "sample '" + ra.sample_id + "' missing from B");
    }
    const metrics::ScoreRecord& rb = *it->second;
    const std::string answer_class = metrics::CoarseAnswerClass(ra.answer_class);
    WtlRow& row = rows[{answer_class, ra.context.split}];
    row.answer_class = answer_class;
    row.split = ra.context.split;
    if (ra.Failed() || rb.Failed()) {
      ++row.skipped;
      continue;
    }
    const double va = ra.Value();
    const double vb = rb.Value();
    if (va > vb) {
      ++row.win;
    } else if (va < vb) {
      ++row.lose;
    } else {
      ++row.tie;
    }
  }
  std::vector<WtlRow> out;
  for (auto& [key, row] : rows) out.push_back(std::move(row));
  return out;
}

namespace {

Json OptionalJson(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

Json CellsToJson(const std::vector<RobustnessCell>& cells) {
  Json out = Json::array();
  for (const RobustnessCell& c : cells) {
    Json seeds = Json::array();
    for (const SeedRobustness& s : c.seeds) {
      seeds.push_back({{"seed", s.seed},
                       {"p_iid", s.p_iid},
                       {"p_ood", s.p_ood},
                       {"rr", s.rr},
                       {"n_iid", s.iid_values.size()},
                       {"n_ood", s.ood_values.size()}});
    }
    out.push_back({{"dataset", c.dataset},
                   {"shift", c.shift},
                   {"method", c.method},
                   {"base_model", c.base_model},
                   {"uses_image", c.uses_image},
                   {"answer_class", c.answer_class},
                   {"p_iid", c.p_iid},
                   {"p_iid_std", OptionalJson(c.p_iid_std)},
                   {"p_ood", c.p_ood},
                   {"p_ood_std", OptionalJson(c.p_ood_std)},
                   {"rr", c.rr},
                   {"rr_std", OptionalJson(c.rr_std)},
                   {"seeds", seeds}});
  }
  return out;
}

Json RanksToJson(const std::vector<RankEntry>& ranks) {
  Json out = Json::array();
  for (const RankEntry& r : ranks) {
    out.push_back({{"dataset", r.dataset},
                   {"shift", r.shift},
                   {"base_model", r.base_model},
                   {"uses_image", r.uses_image},
                   {"answer_class", r.answer_class},
                   {"method", r.method},
                   {"rr", r.rr},
                   {"rank", r.rank}});
  }
  return out;
}

Json VarianceToJson(const std::vector<VarianceRow>& rows) {
  Json out = Json::array();
  for (const VarianceRow& r : rows) {
    out.push_back({{"dataset", r.dataset},
                   {"base_model", r.base_model},
                   {"uses_image", r.uses_image},
                   {"answer_class", r.answer_class},
                   {"shifts", r.shifts},
                   {"methods", r.methods},
                   {"std_between_shifts", OptionalJson(r.std_between_shifts)},
                   {"std_between_methods", OptionalJson(r.std_between_methods)}});
  }
  return out;
}

Json WtlToJson(const std::vector<WtlRow>& rows) {
  Json out = Json::array();
  for (const WtlRow& r : rows) {
    out.push_back({{"answer_class", r.answer_class},
                   {"split", r.split},
                   {"win", r.win},
                   {"tie", r.tie},
                   {"lose", r.lose},
                   {"skipped", r.skipped}});
  }
  return out;
}

}  // namespace vqaeval::stats
