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

#ifndef VQAEVAL_PIPELINE_SERVER_H_
#define VQAEVAL_PIPELINE_SERVER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vqaeval/common/io.h"
#include "vqaeval/rater/rater_study.h"

namespace vqaeval::pipeline {

// Rating state behind the serve API. Thread-safe; every accepted rating is
// appended to the CSV with one write followed by fsync before returning.
class RatingService {
 public:
  // Loads existing ratings from `ratings_path` if present, otherwise
  // creates it with the header line.
  RatingService(std::vector<rater::RaterItem> items,
                std::filesystem::path ratings_path);

  struct Progress {
    size_t rated = 0;
    size_t total = 0;
  };

  // First item in set order the rater has not scored.
  std::optional<rater::RaterItem> Next(const std::string& rater_id) const;
  Progress ProgressFor(const std::string& rater_id) const;

  enum class Outcome { kStored, kDuplicate, kUnknownSample, kInvalid };
  Outcome Submit(const std::string& rater_id, const std::string& sample_id,
                 int score, rater::RatingRecord* stored = nullptr);

  const rater::RaterItem* Item(const std::string& sample_id) const;
  size_t size() const { return items_.size(); }

 private:
  void Append(const rater::RatingRecord& rating);

  std::vector<rater::RaterItem> items_;
  std::map<std::string, size_t> index_;
  std::filesystem::path ratings_path_;
  mutable std::mutex mu_;
  std::map<std::string, std::set<std::string>> rated_;  // rater -> samples
};

struct ServeOptions {
  std::filesystem::path rater_set;
  std::filesystem::path ratings;
  // Tried in order when resolving an item's image_ref.
  std::vector<std::filesystem::path> image_roots;
  std::optional<std::filesystem::path> ui_dir;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port.
};

// HTTP front end:
//   GET  /api/next?rater_id=R     200 item JSON or {"done": true, ...}
//   POST /api/rating              201 stored, 400 invalid, 404 unknown
//                                 sample, 409 already rated
//   GET  /api/progress?rater_id=R 200 {"rater_id", "rated", "total", "done"}
//   GET  /images/<sample_id>      the item's image
//   GET  /                        static UI from ui_dir
class RatingServer {
 public:
  explicit RatingServer(ServeOptions options);
  ~RatingServer();

  // Binds and returns the port actually used.
  int Bind();
  // Blocks until Stop().
  void Serve();
  void Stop();

  RatingService& service() { return *service_; }

 private:
  struct Impl;
  ServeOptions options_;
  std::unique_ptr<RatingService> service_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vqaeval::pipeline

#endif  // VQAEVAL_PIPELINE_SERVER_H_
