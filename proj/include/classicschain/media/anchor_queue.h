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


#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/contracts/assets.h"

namespace classicschain::media {

enum class JobState { kPending, kAnchored, kFailed };
std::string_view JobStateName(JobState state);

struct AnchorJob {
  std::uint64_t job_id = 0;
  std::string cid;
  std::string vin;
  contracts::RefKind ref_kind = contracts::RefKind::kEvidence;
  std::string user_id;  // identity that submits the anchoring transaction
  std::int64_t enqueue_time = 0;
  JobState state = JobState::kPending;
  int retries = 0;
  // Failed jobs marked permanent are never retried (e.g. AUTH_DENIED).
  bool permanent = false;
  std::string last_error;
};

// Submits the anchoring transaction for one job.
using AnchorFunction = std::function<Status(const AnchorJob&)>;

struct AnchorQueueConfig {
  // Append-only job journal (JSON lines). Empty: jobs live in memory only.
  std::filesystem::path journal;
  // Injected cost per file before its transaction is submitted, modelling a
  // remote storage round trip.
  Millis anchor_delay{0};
  int max_retries = 3;
  Millis base_backoff{1000};
  // Parked failures are re-armed after this long.
  Millis park_interval{30000};
  // Extra immediate attempts after an MVCC conflict, not counted as retries.
  int conflict_retries = 5;
};

// Background anchoring of content ids. A single worker drains jobs in
// enqueue order. Every state change is journaled before it takes effect in
// memory, and the journal is replayed on open: pending and parked jobs are
// resumed, anchored jobs are kept for lookup.
//
// Journal records:
//   {"op":"enqueue","job":{cid,enqueueTime,jobId,refKind,userId,vin}}
//   {"op":"state","jobId":N,"state":"anchored|failed|pending",
//    "retries":N,"permanent":bool,"error":"..."}
class AnchorQueue {
 public:
  static Result<std::unique_ptr<AnchorQueue>> Open(AnchorQueueConfig config,
                                                   AnchorFunction anchor);
  ~AnchorQueue();

  // Never blocks on anchoring.
  Result<std::uint64_t> Enqueue(const std::string& cid, const std::string& vin,
                                contracts::RefKind kind,
                                const std::string& user_id);

  std::optional<AnchorJob> Get(std::uint64_t job_id) const;
  std::vector<AnchorJob> Jobs() const;
  std::size_t PendingCount() const;
  // Waits until no job is pending; parked failures do not count.
  bool WaitIdle(Millis timeout) const;
  void Stop();

 private:
  AnchorQueue() = default;
  Status Replay();
  Status Journal(const Json& record);
  Status JournalState(const AnchorJob& job);
  void WorkerLoop();

  AnchorQueueConfig config_;
  AnchorFunction anchor_;
  std::FILE* journal_ = nullptr;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<std::uint64_t, AnchorJob> jobs_;
  std::deque<std::uint64_t> ready_;
  // job id -> earliest retry time
  std::map<std::uint64_t, SteadyTime> delayed_;
  std::uint64_t next_id_ = 1;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace classicschain::media
