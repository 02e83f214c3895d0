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


#include "classicschain/bench/runner.h"

#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <future>
#include <mutex>
#include <random>
#include <thread>

namespace classicschain::bench {
namespace {

using Steady = std::chrono::steady_clock;

constexpr int kUnreachableAbortRun = 20;
const char kTimeout[] = "TIMEOUT";

double MsBetween(Steady::time_point a, Steady::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// One dispatched operation. Settles exactly once.
struct Slot {
  std::string op;
  double sched_ms = 0;
  std::atomic<bool> settled{false};
  std::promise<void> finished;
};

// Shared by the harness and every completion callback, so callbacks that
// arrive after the run has been reported stay harmless.
struct RunState {
  Steady::time_point t0;
  double timeout_ms = 0;
  std::mutex mu;
  std::condition_variable cv;
  std::vector<Sample> samples;
  std::uint64_t outstanding = 0;
  int unreachable_run = 0;
  std::atomic<bool> abort{false};
  std::string abort_reason;

  void Settle(const std::shared_ptr<Slot>& slot, std::string status) {
    if (slot->settled.exchange(true)) return;
    double latency = MsBetween(t0, Steady::now()) - slot->sched_ms;
    if (latency > timeout_ms) status = kTimeout;
    {
      std::lock_guard<std::mutex> lock(mu);
      if (status == ErrorCodeName(ErrorCode::kTargetUnreachable)) {
        if (++unreachable_run >= kUnreachableAbortRun && !abort.exchange(true)) {
          abort_reason = "target unreachable";
        }
      } else {
        unreachable_run = 0;
      }
      samples.push_back({slot->sched_ms, slot->op, latency, std::move(status)});
      --outstanding;
    }
    slot->finished.set_value();
    cv.notify_all();
  }
};

class OpPicker {
 public:
  explicit OpPicker(const WorkloadSpec& spec) : rng_(spec.seed) {
    std::vector<double> weights;
    for (const auto& [name, w] : spec.mix) {
      names_.push_back(name);
      weights.push_back(w);
    }
    dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }
  const std::string& Next() { return names_[dist_(rng_)]; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> names_;
  std::discrete_distribution<std::size_t> dist_;
};

// Worker pool fed by the pacer.
class Pool {
 public:
  using Job = std::function<void()>;
  explicit Pool(int workers) {
    for (int i = 0; i < workers; ++i) threads_.emplace_back([this] { Loop(); });
  }
  ~Pool() { Shutdown(); }

  void Push(Job job) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      queue_.push_back(std::move(job));
    }
    cv_.notify_one();
  }
  // Drops queued jobs and joins the workers.
  void Shutdown() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stopping_ = true;
      queue_.clear();
    }
    cv_.notify_all();
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

 private:
  void Loop() {
    for (;;) {
      Job job;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
        if (stopping_) return;
        job = std::move(queue_.front());
        queue_.pop_front();
      }
      job();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Job> queue_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

bool Cancelled(const std::atomic<bool>* cancel) { return cancel && cancel->load(); }

void RunOpenLoop(Target& target, const WorkloadSpec& spec, const std::shared_ptr<RunState>& run,
                 const std::atomic<bool>* cancel, std::vector<std::shared_ptr<Slot>>* slots) {
  const auto total = static_cast<std::uint64_t>(spec.send_rate * spec.duration_seconds);
  const double interval_ms = 1000.0 / spec.send_rate;
  OpPicker picker(spec);
  Pool pool(spec.workers);
  std::uint64_t next = 0;
  while (next < total) {
    if (Cancelled(cancel) || run->abort) break;
    double now_ms = MsBetween(run->t0, Steady::now());
    for (; next < total && next * interval_ms <= now_ms; ++next) {
      auto slot = std::make_shared<Slot>();
      slot->op = picker.Next();
      slot->sched_ms = next * interval_ms;
      slots->push_back(slot);
      {
        std::lock_guard<std::mutex> lock(run->mu);
        ++run->outstanding;
      }
      std::uint64_t seq = next;
      pool.Push([&target, run, slot, seq] {
        if (slot->settled) return;
        target.Execute(slot->op, seq, [run, slot](std::string status) {
          run->Settle(slot, std::move(status));
        });
      });
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  const auto deadline =
      run->t0 + std::chrono::microseconds(static_cast<std::int64_t>(
                    (spec.duration_seconds * 1000 + spec.timeout_ms) * 1000));
  {
    std::unique_lock<std::mutex> lock(run->mu);
    run->cv.wait_until(lock, deadline, [&] { return run->outstanding == 0; });
  }
  for (auto& slot : *slots) run->Settle(slot, kTimeout);
  pool.Shutdown();
}

void RunClosedLoop(Target& target, const WorkloadSpec& spec, const std::shared_ptr<RunState>& run,
                   const std::atomic<bool>* cancel) {
  const auto end = run->t0 + std::chrono::microseconds(
                                 static_cast<std::int64_t>(spec.duration_seconds * 1e6));
  const auto timeout =
      std::chrono::microseconds(static_cast<std::int64_t>(spec.timeout_ms * 1000));
  std::mutex pick_mu;
  OpPicker picker(spec);
  std::atomic<std::uint64_t> seq{0};
  std::vector<std::thread> workers;
  for (int w = 0; w < spec.concurrency; ++w) {
    workers.emplace_back([&] {
      while (Steady::now() < end && !Cancelled(cancel) && !run->abort) {
        auto slot = std::make_shared<Slot>();
        {
          std::lock_guard<std::mutex> lock(pick_mu);
          slot->op = picker.Next();
        }
        auto start = Steady::now();
        slot->sched_ms = MsBetween(run->t0, start);
        {
          std::lock_guard<std::mutex> lock(run->mu);
          ++run->outstanding;
        }
        std::future<void> done = slot->finished.get_future();
        target.Execute(slot->op, seq.fetch_add(1), [run, slot](std::string status) {
          run->Settle(slot, std::move(status));
        });
        if (done.wait_until(start + timeout) != std::future_status::ready) {
          run->Settle(slot, kTimeout);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

Result<RunReport> RunWorkload(Target& target, const WorkloadSpec& spec,
                              const std::atomic<bool>* cancel) {
  CC_RETURN_IF_ERROR(spec.Validate());
  CC_RETURN_IF_ERROR(target.Prepare(spec));
  auto run = std::make_shared<RunState>();
  run->timeout_ms = spec.timeout_ms;
  run->t0 = Steady::now();
  std::vector<std::shared_ptr<Slot>> slots;
  if (spec.mode == DispatchMode::kOpenLoop) {
    RunOpenLoop(target, spec, run, cancel, &slots);
  } else {
    RunClosedLoop(target, spec, run, cancel);
  }
  std::vector<Sample> samples;
  bool aborted = run->abort || Cancelled(cancel);
  std::string reason;
  {
    std::lock_guard<std::mutex> lock(run->mu);
    samples = run->samples;
    reason = run->abort ? run->abort_reason : (aborted ? "cancelled" : "");
  }
  RunReport report = Aggregate(std::move(samples), spec.duration_seconds);
  report.aborted = aborted;
  report.abort_reason = reason;
  return report;
}

// --- sweep -------------------------------------------------------------------

const SweepPoint* SaturationCurve::At(double rate) const {
  for (const auto& p : points) {
    if (p.rate == rate) return &p;
  }
  return nullptr;
}

std::string SaturationCurve::ToTable() const {
  std::string out = "# " + op + " saturation sweep\n";
  out += "rate_tps  throughput_tps  success  avg_ms  p95_ms  sustained\n";
  char line[160];
  for (const auto& p : points) {
    std::snprintf(line, sizeof(line), "%8.1f  %14.1f  %6.2f%%  %6.2f  %6.2f  %s\n", p.rate,
                  p.result.throughput, p.success_ratio * 100, p.result.latency.avg_ms,
                  p.result.latency.p95_ms, p.sustained ? "yes" : "no");
    out += line;
  }
  std::snprintf(line, sizeof(line), "max sustained: %.1f tx/s\n", max_sustained_tps);
  return out + line;
}

Json SaturationCurve::ToJson() const {
  Json pts = Json::array();
  for (const auto& p : points) {
    pts.push_back({{"rate", p.rate},
                   {"attempted", p.result.attempted},
                   {"succeeded", p.result.succeeded},
                   {"failed", p.result.failed},
                   {"throughput", p.result.throughput},
                   {"avgMs", p.result.latency.avg_ms},
                   {"p95Ms", p.result.latency.p95_ms},
                   {"successRatio", p.success_ratio},
                   {"sustained", p.sustained}});
  }
  return {{"op", op}, {"points", pts}, {"maxSustainedTps", max_sustained_tps}};
}

Result<SaturationCurve> SweepSaturation(Target& target, const WorkloadSpec& base,
                                        const std::string& op, const std::vector<double>& rates,
                                        int stop_after, const std::atomic<bool>* cancel) {
  SaturationCurve curve;
  curve.op = op;
  std::vector<double> positive;
  for (double r : rates) {
    if (r > 0) positive.push_back(r);
  }
  for (std::size_t i = 1; i < positive.size(); ++i) {
    if (positive[i] <= positive[i - 1]) {
      return Error(ErrorCode::kInvalidArgument, "sweep rates must increase");
    }
  }
  int unsustained = 0;
  for (double rate : positive) {
    if (Cancelled(cancel)) break;
    WorkloadSpec spec = base;
    spec.mix = {{op, 1.0}};
    spec.mode = DispatchMode::kOpenLoop;
    spec.send_rate = rate;
    CC_ASSIGN_OR_RETURN(RunReport report, RunWorkload(target, spec, cancel));
    if (report.aborted && report.abort_reason != "cancelled") {
      return Error(ErrorCode::kTargetUnreachable, report.abort_reason);
    }
    SweepPoint p;
    p.rate = rate;
    p.result = report.total;
    p.success_ratio = report.total.attempted
                          ? static_cast<double>(report.total.succeeded) / report.total.attempted
                          : 0;
    p.sustained = p.success_ratio >= 0.99 && report.total.throughput >= 0.95 * rate;
    if (p.sustained) curve.max_sustained_tps = rate;
    curve.points.push_back(p);
    unsustained = p.sustained ? 0 : unsustained + 1;
    if (stop_after > 0 && unsustained >= stop_after) break;
  }
  return curve;
}

// --- anchor comparison -------------------------------------------------------

const AnchorCompareRow* AnchorCompareTable::Find(int files) const {
  for (const auto& r : rows) {
    if (r.files == files) return &r;
  }
  return nullptr;
}

std::string AnchorCompareTable::ToTable() const {
  char line[200];
  std::snprintf(line, sizeof(line),
                "# Mean request duration (s), add-step upload; injected anchor delay %.0f ms/file\n",
                anchor_delay_ms);
  std::string out = line;
  out += "files  sync_mean_s  async_mean_s  sync_failed  async_failed\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%5d  %11.3f  %12.3f  %11llu  %12llu\n", r.files,
                  r.sync.latency.avg_ms / 1000, r.async.latency.avg_ms / 1000,
                  static_cast<unsigned long long>(r.sync.failed),
                  static_cast<unsigned long long>(r.async.failed));
    out += line;
  }
  return out;
}

Json AnchorCompareTable::ToJson() const {
  auto op = [](const OpReport& r) {
    return Json{{"attempted", r.attempted},
                {"failed", r.failed},
                {"meanSeconds", r.latency.avg_ms / 1000},
                {"minSeconds", r.latency.min_ms / 1000},
                {"maxSeconds", r.latency.max_ms / 1000}};
  };
  Json rs = Json::array();
  for (const auto& r : rows) {
    rs.push_back({{"files", r.files}, {"sync", op(r.sync)}, {"async", op(r.async)}});
  }
  return {{"anchorDelayMs", anchor_delay_ms}, {"rows", rs}};
}

Result<AnchorCompareTable> CompareAnchorModes(const AnchorCompareOptions& options) {
  if (options.requests <= 0) return Error(ErrorCode::kInvalidArgument, "requests must be > 0");
  AnchorCompareTable table;
  table.anchor_delay_ms = static_cast<double>(options.base.anchor_delay.count());
  for (int files : options.file_counts) table.rows.push_back({files, {}, {}});
  for (auto mode : {gateway::AnchorMode::kSync, gateway::AnchorMode::kAsync}) {
    gateway::GatewayConfig cfg = options.base;
    cfg.anchor_mode = mode;
    cfg.data_dir = options.work_dir / (mode == gateway::AnchorMode::kSync ? "sync" : "async");
    cfg.port = 0;
    cfg.test_mode = true;
    CC_ASSIGN_OR_RETURN(std::unique_ptr<EmbeddedGateway> gw, EmbeddedGateway::Start(cfg));
    RestTarget target(cfg.host, gw->port(), false);
    WorkloadSpec spec;
    spec.target = TargetKind::kRest;
    spec.vehicles = options.vehicles;
    spec.history_depth = 0;
    spec.file_bytes = options.file_bytes;
    CC_RETURN_IF_ERROR(target.Prepare(spec));
    std::uint64_t seq = 0;
    for (auto& row : table.rows) {
      target.set_files_per_request(row.files);
      std::vector<Sample> samples;
      for (int i = 0; i < options.requests; ++i) {
        auto start = Steady::now();
        std::string status;
        target.Execute("step", seq++, [&](std::string s) { status = std::move(s); });
        samples.push_back({0, "step", MsBetween(start, Steady::now()), status});
      }
      OpReport r = Aggregate(std::move(samples), 0).total;
      (mode == gateway::AnchorMode::kSync ? row.sync : row.async) = r;
    }
    gw->Stop();
  }
  return table;
}

}  // namespace classicschain::bench
