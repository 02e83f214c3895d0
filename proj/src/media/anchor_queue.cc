// Copyright 2026 The ClassicsChain Authors.
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


#include "classicschain/media/anchor_queue.h"

#include <unistd.h>

#include <fstream>

namespace classicschain::media {

namespace fs = std::filesystem;

namespace {

bool IsPermanent(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthDenied:
    case ErrorCode::kUnknownVin:
    case ErrorCode::kBadVin:
    case ErrorCode::kBadEvidence:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownUser:
    case ErrorCode::kUnknownFunction:
      return true;
    default:
      return false;
  }
}

std::optional<JobState> ParseJobState(std::string_view s) {
  if (s == "pending") return JobState::kPending;
  if (s == "anchored") return JobState::kAnchored;
  if (s == "failed") return JobState::kFailed;
  return std::nullopt;
}

}  // namespace

std::string_view JobStateName(JobState state) {
  switch (state) {
    case JobState::kPending: return "pending";
    case JobState::kAnchored: return "anchored";
    case JobState::kFailed: return "failed";
  }
  return "pending";
}

Result<std::unique_ptr<AnchorQueue>> AnchorQueue::Open(AnchorQueueConfig config,
                                                       AnchorFunction anchor) {
  std::unique_ptr<AnchorQueue> q(new AnchorQueue());
  q->config_ = std::move(config);
  q->anchor_ = std::move(anchor);
  if (!q->config_.journal.empty()) {
    std::error_code ec;
    if (q->config_.journal.has_parent_path()) {
      fs::create_directories(q->config_.journal.parent_path(), ec);
    }
    CC_RETURN_IF_ERROR(q->Replay());
    q->journal_ = std::fopen(q->config_.journal.c_str(), "ab");
    if (q->journal_ == nullptr) {
      return Error(ErrorCode::kIoFailure,
                   "cannot open journal " + q->config_.journal.string());
    }
  }
  // Resume unfinished work; parked failures get a fresh retry budget.
  for (auto& [id, job] : q->jobs_) {
    if (job.state == JobState::kFailed && !job.permanent) {
      job.state = JobState::kPending;
      job.retries = 0;
      CC_RETURN_IF_ERROR(q->JournalState(job));
    }
    if (job.state == JobState::kPending) q->ready_.push_back(id);
  }
  AnchorQueue* raw = q.get();
  q->worker_ = std::thread([raw] { raw->WorkerLoop(); });
  return q;
}

AnchorQueue::~AnchorQueue() { Stop(); }

Status AnchorQueue::Replay() {
  std::ifstream in(config_.journal);
  if (!in) return Status::Ok();  // first start
  std::string line;
  while (std::getline(in, line)) {
    auto rec = ParseJson(line);
    // A torn final line from a crash is ignored.
    if (!rec.ok() || !rec->is_object() || !rec->contains("op")) continue;
    try {
      const Json& r = *rec;
      if (r["op"] == "enqueue") {
        const Json& j = r.at("job");
        AnchorJob job;
        job.job_id = j.at("jobId").get<std::uint64_t>();
        job.cid = j.at("cid").get<std::string>();
        job.vin = j.at("vin").get<std::string>();
        auto kind = contracts::ParseRefKind(j.at("refKind").get<std::string>());
        if (!kind) continue;
        job.ref_kind = *kind;
        job.user_id = j.at("userId").get<std::string>();
        job.enqueue_time = j.at("enqueueTime").get<std::int64_t>();
        next_id_ = std::max(next_id_, job.job_id + 1);
        jobs_[job.job_id] = std::move(job);
      } else if (r["op"] == "state") {
        auto it = jobs_.find(r.at("jobId").get<std::uint64_t>());
        if (it == jobs_.end()) continue;
        auto state = ParseJobState(r.at("state").get<std::string>());
        if (!state) continue;
        it->second.state = *state;
        it->second.retries = r.at("retries").get<int>();
        it->second.permanent = r.at("permanent").get<bool>();
        it->second.last_error = r.at("error").get<std::string>();
      }
    } catch (const Json::exception&) {
      continue;
    }
  }
  return Status::Ok();
}

Status AnchorQueue::Journal(const Json& record) {
  if (journal_ == nullptr) return Status::Ok();
  std::string line = Canonical(record) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), journal_) != line.size() ||
      std::fflush(journal_) != 0 || ::fdatasync(fileno(journal_)) != 0) {
    return Error(ErrorCode::kIoFailure, "cannot append to anchor journal");
  }
  return Status::Ok();
}

Status AnchorQueue::JournalState(const AnchorJob& job) {
  return Journal(Json{{"error", job.last_error},
                      {"jobId", job.job_id},
                      {"op", "state"},
                      {"permanent", job.permanent},
                      {"retries", job.retries},
                      {"state", JobStateName(job.state)}});
}

Result<std::uint64_t> AnchorQueue::Enqueue(const std::string& cid,
                                           const std::string& vin,
                                           contracts::RefKind kind,
                                           const std::string& user_id) {
  std::uint64_t id;
  {
    std::lock_guard lock(mu_);
    if (stopping_) return Error(ErrorCode::kInternal, "anchor queue stopped");
    AnchorJob job;
    job.job_id = next_id_++;
    job.cid = cid;
    job.vin = vin;
    job.ref_kind = kind;
    job.user_id = user_id;
    job.enqueue_time = DefaultClock()->WallMillis();
    CC_RETURN_IF_ERROR(Journal(Json{
        {"job",
         {{"cid", job.cid},
          {"enqueueTime", job.enqueue_time},
          {"jobId", job.job_id},
          {"refKind", contracts::RefKindName(job.ref_kind)},
          {"userId", job.user_id},
          {"vin", job.vin}}},
        {"op", "enqueue"}}));
    id = job.job_id;
    jobs_[id] = std::move(job);
    ready_.push_back(id);
  }
  cv_.notify_all();
  return id;
}

void AnchorQueue::WorkerLoop() {
  std::unique_lock lock(mu_);
  while (true) {
    auto now = std::chrono::steady_clock::now();
    for (auto it = delayed_.begin(); it != delayed_.end();) {
      if (it->second > now) {
        ++it;
        continue;
      }
      AnchorJob& job = jobs_.at(it->first);
      if (job.state == JobState::kFailed) {
        job.state = JobState::kPending;
        job.retries = 0;
        (void)JournalState(job);
      }
      ready_.push_back(it->first);
      it = delayed_.erase(it);
    }
    if (stopping_) return;
    if (ready_.empty()) {
      if (delayed_.empty()) {
        cv_.wait(lock);
      } else {
        SteadyTime earliest = SteadyTime::max();
        for (const auto& [id, t] : delayed_) earliest = std::min(earliest, t);
        cv_.wait_until(lock, earliest);
      }
      continue;
    }
    std::uint64_t id = ready_.front();
    ready_.pop_front();
    AnchorJob job = jobs_.at(id);
    busy_ = true;
    if (config_.anchor_delay.count() > 0) {
      cv_.wait_for(lock, config_.anchor_delay, [&] { return stopping_; });
      if (stopping_) {
        busy_ = false;
        ready_.push_front(id);
        return;
      }
    }
    lock.unlock();
    Status s = anchor_(job);
    for (int i = 0; i < config_.conflict_retries &&
                    s.code() == ErrorCode::kMvccConflict;
         ++i) {
      s = anchor_(job);
    }
    lock.lock();

    AnchorJob& stored = jobs_.at(id);
    if (s.ok()) {
      stored.state = JobState::kAnchored;
      stored.last_error.clear();
    } else {
      stored.last_error = s.ToString();
      if (IsPermanent(s.code())) {
        stored.state = JobState::kFailed;
        stored.permanent = true;
      } else if (stored.retries >= config_.max_retries) {
        stored.state = JobState::kFailed;
        delayed_[id] = std::chrono::steady_clock::now() + config_.park_interval;
      } else {
        auto backoff = config_.base_backoff * (1 << stored.retries);
        ++stored.retries;
        delayed_[id] = std::chrono::steady_clock::now() + backoff;
      }
    }
    (void)JournalState(stored);
    busy_ = false;
    cv_.notify_all();
  }
}

std::optional<AnchorJob> AnchorQueue::Get(std::uint64_t job_id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

std::vector<AnchorJob> AnchorQueue::Jobs() const {
  std::lock_guard lock(mu_);
  std::vector<AnchorJob> out;
  for (const auto& [id, job] : jobs_) out.push_back(job);
  return out;
}

std::size_t AnchorQueue::PendingCount() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [id, job] : jobs_) n += job.state == JobState::kPending;
  return n;
}

bool AnchorQueue::WaitIdle(Millis timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] {
    if (!ready_.empty() || busy_) return false;
    for (const auto& [id, job] : jobs_) {
      if (job.state == JobState::kPending) return false;
    }
    return true;
  });
}

void AnchorQueue::Stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
  if (journal_ != nullptr) {
    std::fclose(journal_);
    journal_ = nullptr;
  }
}

}  // namespace classicschain::media
