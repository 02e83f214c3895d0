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


#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <thread>

#include "classicschain/bench/report.h"
#include "classicschain/bench/runner.h"
#include "classicschain/bench/targets.h"
#include "gateway_util.h"
#include "test_util.h"

namespace classicschain::bench {
namespace {

using testing::TempDir;

// Completes every operation inline after a fixed pause; one at a time when
// `serial` is set, which caps capacity near 1000 / pause_ms per second.
class FakeTarget final : public Target {
 public:
  FakeTarget(int pause_ms, bool serial, std::string status = "OK")
      : pause_ms_(pause_ms), serial_(serial), status_(std::move(status)) {}
  Status Prepare(const WorkloadSpec&) override {
    prepares++;
    return Status::Ok();
  }
  void Execute(const std::string&, std::uint64_t, Completion done) override {
    std::unique_lock<std::mutex> lock(mu_, std::defer_lock);
    if (serial_) lock.lock();
    std::this_thread::sleep_for(std::chrono::milliseconds(pause_ms_));
    executed++;
    done(status_);
  }
  bool asynchronous() const override { return false; }

  std::atomic<int> executed{0};
  int prepares = 0;

 private:
  int pause_ms_;
  bool serial_;
  std::string status_;
  std::mutex mu_;
};

// Accepts operations and never completes them.
class BlackHoleTarget final : public Target {
 public:
  Status Prepare(const WorkloadSpec&) override { return Status::Ok(); }
  void Execute(const std::string&, std::uint64_t, Completion done) override {
    std::lock_guard<std::mutex> lock(mu_);
    held_.push_back(std::move(done));
  }
  bool asynchronous() const override { return true; }

 private:
  std::mutex mu_;
  std::vector<Completion> held_;
};

std::vector<Sample> RandomSamples(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ts(0, 10000), lat(0.01, 900);
  std::vector<std::string> statuses = {"OK", "OK", "OK", "MVCC_CONFLICT", "TIMEOUT"};
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({ts(rng), kOperations[rng() % kOperations.size()], lat(rng),
                   statuses[rng() % statuses.size()]});
  }
  return out;
}

WorkloadSpec QuickSpec(double rate, double seconds) {
  WorkloadSpec s;
  s.send_rate = rate;
  s.duration_seconds = seconds;
  s.timeout_ms = 2000;
  s.workers = 8;
  return s;
}

TEST(WorkloadSpecTest, ValidationAndJsonRoundTrip) {
  WorkloadSpec s;
  EXPECT_TRUE(s.Validate().ok());
  s.mix = {{"read", 0.5}, {"write", 0.4}};
  EXPECT_EQ(s.Validate().code(), ErrorCode::kInvalidArgument);
  s.mix = {{"read", 0.5}, {"write", 0.5}};
  s.send_rate = 0;
  EXPECT_EQ(s.Validate().code(), ErrorCode::kInvalidArgument);
  s.send_rate = 25;
  s.mix = {{"fly", 1.0}};
  EXPECT_FALSE(s.Validate().ok());
  s.mix = {{"read", 0.7}, {"step", 0.3}};
  s.files_per_request = 3;
  auto back = WorkloadSpec::FromJson(s.ToJson());
  ASSERT_TRUE(back.ok()) << back.error().message();
  EXPECT_EQ(back->ToJson(), s.ToJson());
  Json extra = s.ToJson();
  extra["bogus"] = 1;
  EXPECT_FALSE(WorkloadSpec::FromJson(extra).ok());
}

TEST(RunReportTest, AggregationIsReproducibleFromCsv) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunReport a = Aggregate(RandomSamples(seed, 300), 10);
    auto parsed = ParseCsv(a.ToCsv());
    ASSERT_TRUE(parsed.ok()) << parsed.error().message();
    RunReport b = Aggregate(*parsed, 10);
    EXPECT_EQ(a.ToCsv(), b.ToCsv());
    EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
    EXPECT_EQ(a.Summary(), b.Summary());
  }
}

TEST(RunReportTest, CountsNeverDoubleCount) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RunReport r = Aggregate(RandomSamples(seed, 1 + seed * 7), 10);
    std::uint64_t dispatched = 0, ok = 0, bad = 0;
    for (const auto& b : r.buckets) {
      dispatched += b.dispatched;
      ok += b.succeeded;
      bad += b.failed;
      EXPECT_EQ(b.succeeded + b.failed, b.dispatched);
    }
    EXPECT_EQ(dispatched, r.total.attempted);
    EXPECT_EQ(ok, r.total.succeeded);
    EXPECT_EQ(bad, r.total.failed);
    EXPECT_EQ(r.total.succeeded + r.total.failed, r.total.attempted);
    std::uint64_t per_op = 0;
    for (const auto& [name, op] : r.ops) {
      EXPECT_EQ(op.succeeded + op.failed, op.attempted) << name;
      per_op += op.attempted;
      EXPECT_DOUBLE_EQ(op.throughput, op.succeeded / r.elapsed_seconds);
    }
    EXPECT_EQ(per_op, r.total.attempted);
  }
}

TEST(RunReportTest, LatencyStatsUseNearestRankOverSuccesses) {
  std::vector<Sample> s;
  for (int i = 1; i <= 20; ++i) s.push_back({double(i), "read", double(i), "OK"});
  s.push_back({30, "read", 5000, "TIMEOUT"});
  RunReport r = Aggregate(s, 1);
  EXPECT_DOUBLE_EQ(r.total.latency.min_ms, 1);
  EXPECT_DOUBLE_EQ(r.total.latency.max_ms, 20);
  EXPECT_DOUBLE_EQ(r.total.latency.avg_ms, 10.5);
  EXPECT_DOUBLE_EQ(r.total.latency.p95_ms, 19);  // ceil(0.95 * 20) = 19th
  EXPECT_EQ(r.total.failures.at("TIMEOUT"), 1u);
  // The late completion stretches the measured span past the window.
  EXPECT_DOUBLE_EQ(r.elapsed_seconds, 5.03);
}

TEST(RunWorkloadTest, OpenLoopDispatchesTheScheduleExactly) {
  FakeTarget t(1, false);
  WorkloadSpec spec = QuickSpec(100, 1);
  spec.mix = {{"read", 0.5}, {"write", 0.5}};
  auto r = RunWorkload(t, spec);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->total.attempted, 100u);
  EXPECT_EQ(r->total.failed, 0u);
  EXPECT_EQ(t.executed.load(), 100);
  EXPECT_GT(r->ops.at("read").attempted, 20u);
  EXPECT_GT(r->ops.at("write").attempted, 20u);
  EXPECT_FALSE(r->aborted);
  EXPECT_EQ(t.prepares, 1);
}

TEST(RunWorkloadTest, OpenLoopKeepsPacingWhenResponsesStall) {
  BlackHoleTarget t;
  WorkloadSpec spec = QuickSpec(50, 1);
  spec.timeout_ms = 300;
  auto begin = std::chrono::steady_clock::now();
  auto r = RunWorkload(t, spec);
  double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->total.attempted, 50u);
  EXPECT_EQ(r->total.failures.at("TIMEOUT"), 50u);
  EXPECT_LT(took, 3.0);
}

TEST(RunWorkloadTest, UnreachableTargetAbortsWithPartialReport) {
  FakeTarget t(0, false, "TARGET_UNREACHABLE");
  auto r = RunWorkload(t, QuickSpec(200, 5));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->aborted);
  EXPECT_GT(r->total.attempted, 0u);
  EXPECT_LT(r->total.attempted, 1000u);
  EXPECT_EQ(r->total.succeeded + r->total.failed, r->total.attempted);
}

TEST(RunWorkloadTest, CancellationStopsDispatch) {
  FakeTarget t(0, false);
  std::atomic<bool> cancel{true};
  auto r = RunWorkload(t, QuickSpec(100, 5), &cancel);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->aborted);
  EXPECT_EQ(r->abort_reason, "cancelled");
}

TEST(RunWorkloadTest, ClosedLoopUsesFixedConcurrency) {
  FakeTarget t(10, false);
  WorkloadSpec spec = QuickSpec(1, 1);
  spec.mode = DispatchMode::kClosedLoop;
  spec.concurrency = 4;
  auto r = RunWorkload(t, spec);
  ASSERT_TRUE(r.ok());
  // About 4 x 100 in one second; generous bounds for a loaded host.
  EXPECT_GT(r->total.attempted, 100u);
  EXPECT_LE(r->total.attempted, 420u);
  EXPECT_EQ(r->total.failed, 0u);
}

TEST(SweepTest, ZeroRatesGiveAnEmptyCurve) {
  FakeTarget t(0, false);
  auto c = SweepSaturation(t, QuickSpec(1, 1), "read", {0, 0});
  ASSERT_TRUE(c.ok());
  EXPECT_TRUE(c->points.empty());
  EXPECT_EQ(c->max_sustained_tps, 0);
  auto none = SweepSaturation(t, QuickSpec(1, 1), "read", {});
  ASSERT_TRUE(none.ok());
  EXPECT_TRUE(none->points.empty());
  EXPECT_EQ(SweepSaturation(t, QuickSpec(1, 1), "read", {20, 10}).code(),
            ErrorCode::kInvalidArgument);
}

TEST(SweepTest, FindsTheCapacityOfASerialTarget) {
  FakeTarget t(10, true);  // about 100 ops/s
  WorkloadSpec base = QuickSpec(1, 1);
  base.timeout_ms = 5000;
  auto c = SweepSaturation(t, base, "read", {20, 40, 300, 600});
  ASSERT_TRUE(c.ok());
  ASSERT_GE(c->points.size(), 3u);
  EXPECT_TRUE(c->points[0].sustained);
  EXPECT_FALSE(c->points[2].sustained);
  EXPECT_EQ(c->max_sustained_tps, 40);
  EXPECT_LT(c->points[2].result.throughput, 200);
}

class LedgerTargetTest : public ::testing::Test {
 protected:
  TempDir dir_;
};

TEST_F(LedgerTargetTest, ReadsAtLowRateHaveNoFailures) {
  WorkloadSpec spec = QuickSpec(50, 2);
  spec.mix = {{"read", 0.6}, {"history", 0.2}, {"list", 0.2}};
  auto t = LedgerTarget::Open(spec, dir_.path());
  ASSERT_TRUE(t.ok()) << t.error().message();
  auto r = RunWorkload(**t, spec);
  ASSERT_TRUE(r.ok()) << r.error().message();
  EXPECT_EQ(r->total.attempted, 100u);
  EXPECT_EQ(r->total.failed, 0u) << r->Summary();
  EXPECT_TRUE((*t)->ledger().VerifyChain().ok);
}

TEST_F(LedgerTargetTest, WritesAndStepsCommit) {
  WorkloadSpec spec = QuickSpec(20, 2);
  spec.mix = {{"write", 0.5}, {"step", 0.5}};
  auto t = LedgerTarget::Open(spec, dir_.path());
  ASSERT_TRUE(t.ok());
  std::uint64_t before = 0;
  ASSERT_TRUE((*t)->Prepare(spec).ok());
  before = (*t)->ledger().Height();
  auto r = RunWorkload(**t, spec);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->total.attempted, 40u);
  EXPECT_EQ(r->total.failed, 0u) << r->Summary();
  EXPECT_GT((*t)->ledger().Height(), before);
  EXPECT_GT(r->ops.at("write").latency.avg_ms, 0);
}

TEST(RestTargetTest, UnreachableGatewayIsReported) {
  RestTarget t("127.0.0.1", 1, false);
  auto r = RunWorkload(t, QuickSpec(10, 1));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.code(), ErrorCode::kTargetUnreachable);
}

TEST(RestTargetTest, MixedRunAgainstEmbeddedGateway) {
  TempDir dir;
  gateway::GatewayConfig cfg = testing::FastGatewayConfig(dir.path());
  auto gw = EmbeddedGateway::Start(cfg);
  ASSERT_TRUE(gw.ok()) << gw.error().message();
  RestTarget t("127.0.0.1", (*gw)->port(), false);
  WorkloadSpec spec = QuickSpec(20, 2);
  spec.target = TargetKind::kRest;
  spec.vehicles = 3;
  spec.history_depth = 1;
  spec.files_per_request = 1;
  spec.mix = {{"read", 0.4}, {"history", 0.2}, {"list", 0.1}, {"write", 0.1}, {"step", 0.2}};
  auto r = RunWorkload(t, spec);
  ASSERT_TRUE(r.ok()) << r.error().message();
  EXPECT_EQ(r->total.attempted, 40u);
  EXPECT_EQ(r->total.failed, 0u) << r->Summary();
}

TEST(AnchorCompareTest, SyncModePaysTheDelayPerFile) {
  TempDir dir;
  AnchorCompareOptions opt;
  opt.file_counts = {0, 2};
  opt.requests = 3;
  opt.vehicles = 2;
  opt.file_bytes = 256;
  opt.base = testing::FastGatewayConfig(dir.path());
  opt.base.anchor_delay = Millis(150);
  opt.work_dir = dir.path();
  auto table = CompareAnchorModes(opt);
  ASSERT_TRUE(table.ok()) << table.error().message();
  const AnchorCompareRow* two = table->Find(2);
  ASSERT_NE(two, nullptr);
  EXPECT_EQ(two->sync.failed + two->async.failed, 0u);
  EXPECT_GE(two->sync.latency.min_ms, 300);
  EXPECT_LT(two->async.latency.avg_ms, two->sync.latency.avg_ms);
  EXPECT_NE(table->ToTable().find("files"), std::string::npos);
  EXPECT_EQ(table->ToJson()["rows"].size(), 2u);
}

}  // namespace
}  // namespace classicschain::bench
