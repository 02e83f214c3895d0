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
#include <filesystem>
#include <string>
#include <vector>

#include "classicschain/bench/report.h"
#include "classicschain/bench/targets.h"
#include "classicschain/gateway/config.h"

namespace classicschain::bench {

// Runs one workload against a prepared (or preparable) target.
//
// Open loop: a token-bucket pacer releases operations on a fixed schedule
// (1 ms ticks) into a pool of spec.workers threads, whatever the responses.
// Latency is measured from the scheduled release, so queueing inside the
// harness counts. Closed loop: spec.concurrency workers, each issuing the
// next operation when the previous one finishes.
//
// Operations still open timeout_ms after the window closes are recorded as
// TIMEOUT. Cancellation or a run of TARGET_UNREACHABLE responses stops
// dispatch; the report then carries what was measured, with aborted set.
Result<RunReport> RunWorkload(Target& target, const WorkloadSpec& spec,
                              const std::atomic<bool>* cancel = nullptr);

struct SweepPoint {
  double rate = 0;
  OpReport result;
  double success_ratio = 0;
  bool sustained = false;
};

struct SaturationCurve {
  std::string op;
  std::vector<SweepPoint> points;
  // Highest swept rate with >= 99% success and throughput >= 0.95 x rate;
  // 0 when no point qualifies.
  double max_sustained_tps = 0;

  const SweepPoint* At(double rate) const;
  std::string ToTable() const;
  Json ToJson() const;
};

// Non-positive rates are skipped; the remaining list must be increasing.
// The sweep ends early after `stop_after` consecutive unsustained points
// (0: never).
Result<SaturationCurve> SweepSaturation(Target& target, const WorkloadSpec& base,
                                        const std::string& op, const std::vector<double>& rates,
                                        int stop_after = 2,
                                        const std::atomic<bool>* cancel = nullptr);

struct AnchorCompareOptions {
  std::vector<int> file_counts{0, 2, 5};
  int requests = 30;                 // per (mode, file count) cell
  std::size_t file_bytes = 16 * 1024;
  int vehicles = 10;
  gateway::GatewayConfig base;       // anchor mode and data dir are overridden
  std::filesystem::path work_dir;    // one gateway per mode below this
};

struct AnchorCompareRow {
  int files = 0;
  OpReport sync;   // per-request durations, sync mode
  OpReport async;  // per-request durations, async mode
};

struct AnchorCompareTable {
  double anchor_delay_ms = 0;
  std::vector<AnchorCompareRow> rows;

  const AnchorCompareRow* Find(int files) const;
  std::string ToTable() const;
  Json ToJson() const;
};

// Times sequential "add restoration step" uploads with N evidence files
// through a real HTTP gateway in each anchoring mode.
Result<AnchorCompareTable> CompareAnchorModes(const AnchorCompareOptions& options);

}  // namespace classicschain::bench
