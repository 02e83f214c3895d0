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

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/status.h"

// Load generation: workload specs, raw samples and the reports aggregated
// from them.
namespace classicschain::bench {

enum class TargetKind { kLedger, kRest };
enum class DispatchMode { kOpenLoop, kClosedLoop };

// Workload file format (JSON):
//   {"target": "ledger-direct" | "rest",
//    "mix": {"read": 0.8, "write": 0.2},
//    "mode": "open-loop" | "closed-loop",
//    "sendRate": 50,            open loop: requests per second
//    "concurrency": 4,          closed loop: workers
//    "durationSeconds": 10,
//    "timeoutMs": 10000,        per request
//    "workers": 64,             open loop dispatch pool
//    "seed": 1,
//    "payload": {"vehicles": 10, "historyDepth": 2,
//                "filesPerRequest": 0, "fileBytes": 1024},
//    "rest": {"host": "127.0.0.1", "port": 8443, "tls": true},
//    "ledger": {"maxMessagesPerBlock": 10, "batchTimeoutMs": 50,
//               "fsync": false}}
//
// Operations: read (vehicle card), history (card history), list (classics
// of the owner), write (register a new vehicle), step (restoration step on
// an existing vehicle, with filesPerRequest files on the REST target).
struct WorkloadSpec {
  TargetKind target = TargetKind::kLedger;
  std::map<std::string, double> mix{{"read", 1.0}};
  DispatchMode mode = DispatchMode::kOpenLoop;
  double send_rate = 10;
  int concurrency = 1;
  double duration_seconds = 10;
  double timeout_ms = 10000;
  int workers = 64;
  std::uint64_t seed = 1;

  int vehicles = 10;
  int history_depth = 2;
  int files_per_request = 0;
  std::size_t file_bytes = 1024;

  std::string rest_host = "127.0.0.1";
  int rest_port = 0;  // 0: start an embedded test-mode gateway
  bool rest_tls = false;

  std::size_t max_messages_per_block = 10;
  double batch_timeout_ms = 50;
  bool fsync = false;

  Status Validate() const;
  Json ToJson() const;
  static Result<WorkloadSpec> FromJson(const Json& json);
};

inline const std::vector<std::string> kOperations = {"read", "history", "list", "write",
                                                     "step"};

// One request. ts_ms: scheduled dispatch time relative to the run start.
// status: "OK" or an error code name.
struct Sample {
  double ts_ms = 0;
  std::string op;
  double latency_ms = 0;
  std::string status;

  bool ok() const { return status == "OK"; }
  friend bool operator==(const Sample&, const Sample&) = default;
};

struct LatencyStats {
  double min_ms = 0;
  double avg_ms = 0;
  double p95_ms = 0;  // nearest rank
  double max_ms = 0;
};

struct OpReport {
  std::uint64_t attempted = 0;
  std::uint64_t succeeded = 0;
  std::uint64_t failed = 0;
  double throughput = 0;  // succeeded / elapsed_seconds
  LatencyStats latency;   // successful requests only
  std::map<std::string, std::uint64_t> failures;  // by status
};

// Dispatches in one second of the run, by scheduled time.
struct Bucket {
  std::int64_t second = 0;
  std::uint64_t dispatched = 0;
  std::uint64_t succeeded = 0;
  std::uint64_t failed = 0;
};

struct RunReport {
  double duration_seconds = 0;  // configured dispatch window
  // From the first scheduled dispatch to the last completion; the
  // throughput denominator, so a backlog drained after the window counts
  // against the rate.
  double elapsed_seconds = 0;
  std::map<std::string, OpReport> ops;
  OpReport total;
  std::vector<Bucket> buckets;
  std::vector<Sample> samples;
  bool aborted = false;
  std::string abort_reason;

  // CSV schema: ts,op,latency_ms,status (millisecond values, 3 decimals).
  std::string ToCsv() const;
  std::string Summary() const;
  Json ToJson() const;  // aggregates only
};

// Samples are quantized to microseconds so that a report rebuilt from its
// CSV log is bit-identical.
Sample Quantize(Sample s);
RunReport Aggregate(std::vector<Sample> samples, double duration_seconds);
Result<std::vector<Sample>> ParseCsv(const std::string& csv);

}  // namespace classicschain::bench
