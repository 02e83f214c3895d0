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


#include "classicschain/bench/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace classicschain::bench {
namespace {

std::string_view TargetName(TargetKind t) {
  return t == TargetKind::kRest ? "rest" : "ledger-direct";
}
std::string_view ModeName(DispatchMode m) {
  return m == DispatchMode::kClosedLoop ? "closed-loop" : "open-loop";
}

Error Bad(std::string m) { return Error(ErrorCode::kInvalidArgument, std::move(m)); }

double Micros(double ms) { return std::round(ms * 1000.0) / 1000.0; }

std::string Fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

LatencyStats Stats(std::vector<double> v) {
  LatencyStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.min_ms = v.front();
  s.max_ms = v.back();
  s.avg_ms = sum / static_cast<double>(v.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
  s.p95_ms = v[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

Json OpJson(const OpReport& r) {
  return Json{{"attempted", r.attempted},
              {"failed", r.failed},
              {"failures", r.failures},
              {"latencyMs",
               {{"avg", r.latency.avg_ms},
                {"max", r.latency.max_ms},
                {"min", r.latency.min_ms},
                {"p95", r.latency.p95_ms}}},
              {"succeeded", r.succeeded},
              {"throughput", r.throughput}};
}

}  // namespace

Status WorkloadSpec::Validate() const {
  if (mix.empty()) return Bad("mix must name at least one operation");
  double sum = 0;
  for (const auto& [op, w] : mix) {
    if (std::find(kOperations.begin(), kOperations.end(), op) == kOperations.end()) {
      return Bad("unknown operation " + op);
    }
    if (!(w >= 0)) return Bad("weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-6) return Bad("mix weights must sum to 1");
  if (mode == DispatchMode::kOpenLoop && !(send_rate > 0)) return Bad("sendRate must be > 0");
  if (mode == DispatchMode::kClosedLoop && concurrency <= 0) {
    return Bad("concurrency must be > 0");
  }
  if (!(duration_seconds > 0)) return Bad("durationSeconds must be > 0");
  if (!(timeout_ms > 0)) return Bad("timeoutMs must be > 0");
  if (workers <= 0) return Bad("workers must be > 0");
  if (vehicles <= 0) return Bad("payload.vehicles must be > 0");
  if (history_depth < 0 || files_per_request < 0) return Bad("payload counts must be >= 0");
  return Status::Ok();
}

Json WorkloadSpec::ToJson() const {
  return Json{{"target", TargetName(target)},
              {"mix", mix},
              {"mode", ModeName(mode)},
              {"sendRate", send_rate},
              {"concurrency", concurrency},
              {"durationSeconds", duration_seconds},
              {"timeoutMs", timeout_ms},
              {"workers", workers},
              {"seed", seed},
              {"payload",
               {{"vehicles", vehicles},
                {"historyDepth", history_depth},
                {"filesPerRequest", files_per_request},
                {"fileBytes", file_bytes}}},
              {"rest", {{"host", rest_host}, {"port", rest_port}, {"tls", rest_tls}}},
              {"ledger",
               {{"maxMessagesPerBlock", max_messages_per_block},
                {"batchTimeoutMs", batch_timeout_ms},
                {"fsync", fsync}}}};
}

Result<WorkloadSpec> WorkloadSpec::FromJson(const Json& j) {
  if (!j.is_object()) return Bad("workload spec must be an object");
  WorkloadSpec s;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "target") {
        std::string t = v.get<std::string>();
        if (t == "ledger-direct" || t == "ledger") {
          s.target = TargetKind::kLedger;
        } else if (t == "rest") {
          s.target = TargetKind::kRest;
        } else {
          return Bad("target must be ledger-direct or rest");
        }
      } else if (k == "mix") {
        s.mix.clear();
        for (auto m = v.begin(); m != v.end(); ++m) s.mix[m.key()] = m.value().get<double>();
      } else if (k == "mode") {
        std::string m = v.get<std::string>();
        if (m == "open-loop") {
          s.mode = DispatchMode::kOpenLoop;
        } else if (m == "closed-loop") {
          s.mode = DispatchMode::kClosedLoop;
        } else {
          return Bad("mode must be open-loop or closed-loop");
        }
      } else if (k == "sendRate") {
        s.send_rate = v.get<double>();
      } else if (k == "concurrency") {
        s.concurrency = v.get<int>();
      } else if (k == "durationSeconds") {
        s.duration_seconds = v.get<double>();
      } else if (k == "timeoutMs") {
        s.timeout_ms = v.get<double>();
      } else if (k == "workers") {
        s.workers = v.get<int>();
      } else if (k == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (k == "payload") {
        for (auto p = v.begin(); p != v.end(); ++p) {
          if (p.key() == "vehicles") {
            s.vehicles = p.value().get<int>();
          } else if (p.key() == "historyDepth") {
            s.history_depth = p.value().get<int>();
          } else if (p.key() == "filesPerRequest") {
            s.files_per_request = p.value().get<int>();
          } else if (p.key() == "fileBytes") {
            s.file_bytes = p.value().get<std::size_t>();
          } else {
            return Bad("unknown payload key " + p.key());
          }
        }
      } else if (k == "rest") {
        for (auto p = v.begin(); p != v.end(); ++p) {
          if (p.key() == "host") {
            s.rest_host = p.value().get<std::string>();
          } else if (p.key() == "port") {
            s.rest_port = p.value().get<int>();
          } else if (p.key() == "tls") {
            s.rest_tls = p.value().get<bool>();
          } else {
            return Bad("unknown rest key " + p.key());
          }
        }
      } else if (k == "ledger") {
        for (auto p = v.begin(); p != v.end(); ++p) {
          if (p.key() == "maxMessagesPerBlock") {
            s.max_messages_per_block = p.value().get<std::size_t>();
          } else if (p.key() == "batchTimeoutMs") {
            s.batch_timeout_ms = p.value().get<double>();
          } else if (p.key() == "fsync") {
            s.fsync = p.value().get<bool>();
          } else {
            return Bad("unknown ledger key " + p.key());
          }
        }
      } else {
        return Bad("unknown workload key " + k);
      }
    }
  } catch (const Json::exception& e) {
    return Bad(std::string("malformed workload spec: ") + e.what());
  }
  CC_RETURN_IF_ERROR(s.Validate());
  return s;
}

Sample Quantize(Sample s) {
  s.ts_ms = Micros(s.ts_ms);
  s.latency_ms = Micros(s.latency_ms);
  return s;
}

RunReport Aggregate(std::vector<Sample> samples, double duration_seconds) {
  RunReport r;
  r.duration_seconds = duration_seconds;
  for (auto& s : samples) s = Quantize(std::move(s));
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.ts_ms < b.ts_ms; });
  double last_ms = 0;
  std::map<std::string, std::vector<double>> lat;
  std::vector<double> all_lat;
  std::map<std::int64_t, Bucket> buckets;
  for (const auto& s : samples) {
    last_ms = std::max(last_ms, s.ts_ms + s.latency_ms);
    for (OpReport* op : {&r.ops[s.op], &r.total}) {
      op->attempted++;
      if (s.ok()) {
        op->succeeded++;
      } else {
        op->failed++;
        op->failures[s.status]++;
      }
    }
    if (s.ok()) {
      lat[s.op].push_back(s.latency_ms);
      all_lat.push_back(s.latency_ms);
    }
    auto sec = static_cast<std::int64_t>(std::floor(s.ts_ms / 1000.0));
    Bucket& b = buckets[sec];
    b.second = sec;
    b.dispatched++;
    (s.ok() ? b.succeeded : b.failed)++;
  }
  r.elapsed_seconds = std::max(duration_seconds, last_ms / 1000.0);
  for (auto& [name, op] : r.ops) {
    op.latency = Stats(lat[name]);
    op.throughput = r.elapsed_seconds > 0 ? op.succeeded / r.elapsed_seconds : 0;
  }
  r.total.latency = Stats(all_lat);
  r.total.throughput = r.elapsed_seconds > 0 ? r.total.succeeded / r.elapsed_seconds : 0;
  for (auto& [sec, b] : buckets) r.buckets.push_back(b);
  r.samples = std::move(samples);
  return r;
}

std::string RunReport::ToCsv() const {
  std::string out = "ts,op,latency_ms,status\n";
  for (const auto& s : samples) {
    out += Fixed3(s.ts_ms) + "," + s.op + "," + Fixed3(s.latency_ms) + "," + s.status + "\n";
  }
  return out;
}

Result<std::vector<Sample>> ParseCsv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "ts,op,latency_ms,status") {
    return Bad("missing CSV header ts,op,latency_ms,status");
  }
  std::vector<Sample> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      auto c = line.find(',', pos);
      f.push_back(line.substr(pos, c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (f.size() != 4) return Bad("line " + std::to_string(n) + ": expected 4 fields");
    try {
      out.push_back(Quantize(Sample{std::stod(f[0]), f[1], std::stod(f[2]), f[3]}));
    } catch (const std::exception&) {
      return Bad("line " + std::to_string(n) + ": malformed number");
    }
  }
  return out;
}

Json RunReport::ToJson() const {
  Json ops_json = Json::object();
  for (const auto& [name, op] : ops) ops_json[name] = OpJson(op);
  Json series = Json::array();
  for (const auto& b : buckets) {
    series.push_back(Json{{"dispatched", b.dispatched},
                          {"failed", b.failed},
                          {"second", b.second},
                          {"succeeded", b.succeeded}});
  }
  Json j = {{"durationSeconds", duration_seconds},
            {"elapsedSeconds", elapsed_seconds},
            {"ops", ops_json},
            {"series", series},
            {"total", OpJson(total)}};
  if (aborted) j["abortReason"] = abort_reason;
  j["aborted"] = aborted;
  return j;
}

std::string RunReport::Summary() const {
  std::ostringstream o;
  o << "# Absolute numbers depend on the host; compare ratios and curve shapes.\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %9s %9s %7s %10s %9s %9s %9s %9s\n", "op",
                "attempted", "succeeded", "failed", "tput/s", "min ms", "avg ms", "p95 ms",
                "max ms");
  o << line;
  auto row = [&](const std::string& name, const OpReport& r) {
    std::snprintf(line, sizeof line, "%-8s %9llu %9llu %7llu %10.2f %9.2f %9.2f %9.2f %9.2f\n",
                  name.c_str(), static_cast<unsigned long long>(r.attempted),
                  static_cast<unsigned long long>(r.succeeded),
                  static_cast<unsigned long long>(r.failed), r.throughput, r.latency.min_ms,
                  r.latency.avg_ms, r.latency.p95_ms, r.latency.max_ms);
    o << line;
  };
  for (const auto& [name, op] : ops) row(name, op);
  if (ops.size() > 1) row("total", total);
  std::snprintf(line, sizeof line, "window %.2f s, elapsed %.2f s%s\n", duration_seconds,
                elapsed_seconds, aborted ? (", ABORTED: " + abort_reason).c_str() : "");
  o << line;
  if (!total.failures.empty()) {
    o << "failures:";
    for (const auto& [status, n] : total.failures) o << " " << status << "=" << n;
    o << "\n";
  }
  return o.str();
}

}  // namespace classicschain::bench
