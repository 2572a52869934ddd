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

#include "vqaeval/pipeline/server.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "httplib.h"
#include "vqaeval/common/error.h"

namespace vqaeval::pipeline {
namespace fs = std::filesystem;
namespace {

void WriteAllAndSync(const fs::path& path, const std::string& data,
                     bool create) {
  const int flags = O_WRONLY | O_APPEND | O_CLOEXEC | (create ? O_CREAT : 0);
  const int fd = ::open(path.c_str(), flags, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() +
                                    "': " + std::strerror(errno));
  }
  // O_APPEND with a single write keeps each line contiguous.
  const ssize_t written = ::write(fd, data.data(), data.size());
  const int saved = errno;
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (written != static_cast<ssize_t>(data.size()) || !synced) {
    throw Error(ErrorCode::kIo, "cannot append to '" + path.string() +
                                    "': " + std::strerror(saved));
  }
}

Json ItemJson(const rater::RaterItem& item) {
  return Json{{"sample_id", item.sample_id},
              {"question", item.question},
              {"ground_truth", item.ground_truth},
              {"prediction", item.prediction},
              {"image_url", "/images/" + item.sample_id}};
}

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& what) {
  Reply(res, status, Json{{"error", what}});
}

std::string ContentType(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  return "application/octet-stream";
}

}  // namespace

RatingService::RatingService(std::vector<rater::RaterItem> items,
                             fs::path ratings_path)
    : items_(std::move(items)), ratings_path_(std::move(ratings_path)) {
  for (size_t i = 0; i < items_.size(); ++i) {
    if (!index_.emplace(items_[i].sample_id, i).second) {
      throw Error(ErrorCode::kConflict,
                  "rater set lists '" + items_[i].sample_id + "' twice");
    }
  }
  if (fs::exists(ratings_path_)) {
    for (const rater::RatingRecord& r : rater::ReadRatings(ratings_path_)) {
      rated_[r.rater_id].insert(r.sample_id);
    }
  } else {
    if (ratings_path_.has_parent_path()) {
      fs::create_directories(ratings_path_.parent_path());
    }
    WriteAllAndSync(ratings_path_, std::string(rater::kRatingsHeader) + "\n",
                    /*create=*/true);
  }
}

std::optional<rater::RaterItem> RatingService::Next(
    const std::string& rater_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = rated_.find(rater_id);
  for (const rater::RaterItem& item : items_) {
    if (it == rated_.end() || it->second.count(item.sample_id) == 0) {
      return item;
    }
  }
  return std::nullopt;
}

RatingService::Progress RatingService::ProgressFor(
    const std::string& rater_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  Progress p;
  p.total = items_.size();
  auto it = rated_.find(rater_id);
  if (it == rated_.end()) return p;
  for (const std::string& id : it->second) p.rated += index_.count(id);
  return p;
}

const rater::RaterItem* RatingService::Item(const std::string& sample_id) const {
  auto it = index_.find(sample_id);
  return it == index_.end() ? nullptr : &items_[it->second];
}

RatingService::Outcome RatingService::Submit(const std::string& rater_id,
                                             const std::string& sample_id,
                                             int score,
                                             rater::RatingRecord* stored) {
  if (rater_id.empty() || score < 1 || score > 5 ||
      rater_id.find_first_of("\r\n") != std::string::npos) {
    return Outcome::kInvalid;
  }
  if (index_.count(sample_id) == 0) return Outcome::kUnknownSample;
  std::lock_guard<std::mutex> lock(mu_);
  if (rated_[rater_id].count(sample_id) != 0) return Outcome::kDuplicate;
  const rater::RatingRecord rating{rater_id, sample_id, score,
                                   rater::UtcTimestamp()};
  Append(rating);
  rated_[rater_id].insert(sample_id);
  if (stored != nullptr) *stored = rating;
  return Outcome::kStored;
}

void RatingService::Append(const rater::RatingRecord& rating) {
  WriteAllAndSync(ratings_path_, rater::RatingToCsvLine(rating) + "\n",
                  /*create=*/false);
}

struct RatingServer::Impl {
  httplib::Server http;
  int port = -1;
};

RatingServer::RatingServer(ServeOptions options)
    : options_(std::move(options)), impl_(std::make_unique<Impl>()) {
  service_ = std::make_unique<RatingService>(
      rater::RaterItemsFromJson(ReadJsonFile(options_.rater_set)),
      options_.ratings);
  httplib::Server& http = impl_->http;
  RatingService& service = *service_;

  http.Get("/api/next", [&service](const httplib::Request& req,
                                   httplib::Response& res) {
    const std::string rater = req.get_param_value("rater_id");
    if (rater.empty()) return ReplyError(res, 400, "rater_id is required");
    const RatingService::Progress p = service.ProgressFor(rater);
    const std::optional<rater::RaterItem> item = service.Next(rater);
    Json body = item ? ItemJson(*item) : Json::object();
    body["done"] = !item.has_value();
    body["rated"] = p.rated;
    body["total"] = p.total;
    Reply(res, 200, body);
  });

  http.Get("/api/progress", [&service](const httplib::Request& req,
                                       httplib::Response& res) {
    const std::string rater = req.get_param_value("rater_id");
    if (rater.empty()) return ReplyError(res, 400, "rater_id is required");
    const RatingService::Progress p = service.ProgressFor(rater);
    Reply(res, 200,
          Json{{"rater_id", rater},
               {"rated", p.rated},
               {"total", p.total},
               {"done", p.rated == p.total}});
  });

  http.Post("/api/rating", [&service](const httplib::Request& req,
                                      httplib::Response& res) {
    const Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() ||
        !body.contains("rater_id") || !body["rater_id"].is_string() ||
        !body.contains("sample_id") || !body["sample_id"].is_string() ||
        !body.contains("score") || !body["score"].is_number_integer()) {
      return ReplyError(res, 400,
                        "body must be {rater_id, sample_id, score: 1..5}");
    }
    rater::RatingRecord stored;
    const long long score = body["score"].get<long long>();
    const auto outcome = service.Submit(
        body["rater_id"].get<std::string>(),
        body["sample_id"].get<std::string>(),
        score < 1 || score > 5 ? 0 : static_cast<int>(score), &stored);
    switch (outcome) {
      case RatingService::Outcome::kStored:
        return Reply(res, 201,
                     Json{{"rater_id", stored.rater_id},
                          {"sample_id", stored.sample_id},
                          {"score", stored.score},
                          {"timestamp", stored.timestamp}});
      case RatingService::Outcome::kDuplicate:
        return ReplyError(res, 409, "sample already rated by this rater");
      case RatingService::Outcome::kUnknownSample:
        return ReplyError(res, 404, "unknown sample_id");
      case RatingService::Outcome::kInvalid:
        return ReplyError(res, 400, "score must be an integer 1..5");
    }
  });

  const std::vector<fs::path> roots = options_.image_roots;
  http.Get(R"(/images/(.+))", [&service, roots](const httplib::Request& req,
                                                httplib::Response& res) {
    const rater::RaterItem* item = service.Item(req.matches[1]);
    if (item == nullptr || item->image_ref.empty()) {
      return ReplyError(res, 404, "no such image");
    }
    for (const fs::path& root : roots) {
      const fs::path path = root / item->image_ref;
      if (fs::is_regular_file(path)) {
        res.set_content(ReadFile(path), ContentType(path));
        return;
      }
    }
    ReplyError(res, 404, "image file not found");
  });

  if (options_.ui_dir) {
    http.set_mount_point("/", options_.ui_dir->string());
  }
}

RatingServer::~RatingServer() { Stop(); }

int RatingServer::Bind() {
  impl_->port =
      options_.port == 0
          ? impl_->http.bind_to_any_port(options_.host)
          : (impl_->http.bind_to_port(options_.host, options_.port)
                 ? options_.port
                 : -1);
  if (impl_->port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + options_.host + ":" +
                                    std::to_string(options_.port));
  }
  return impl_->port;
}

void RatingServer::Serve() {
  if (impl_->port < 0) Bind();
  impl_->http.listen_after_bind();
}

void RatingServer::Stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace vqaeval::pipeline
