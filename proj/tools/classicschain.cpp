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


// classicschain: operator command line for the ClassicsChain engine.
//
//   classicschain ledger verify <blocks.dat | data dir>
//   classicschain identity enroll|list|verify --wallet <dir> ...
//   classicschain media verify-all --root <data dir>
//   classicschain gateway serve --config <file>
//   classicschain gateway gen-cert --cert <pem> --key <pem>
//   classicschain bench run --spec <file>
//   classicschain bench sweep --op <name> --rates <r1,r2,...>
//   classicschain bench anchor-compare [--files 0,2,5] [--requests 30]

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "classicschain/bench/report.h"
#include "classicschain/bench/runner.h"
#include "classicschain/bench/targets.h"
#include "classicschain/common/crypto.h"
#include "classicschain/gateway/config.h"
#include "classicschain/gateway/gateway.h"
#include "classicschain/gateway/server.h"
#include "classicschain/gateway/tls.h"
#include "classicschain/identity/identity.h"
#include "classicschain/ledger/block_store.h"
#include "classicschain/media/media_store.h"

namespace cc = classicschain;
namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop = true; }

void InstallSignalHandlers() {
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
}

int Fail(const cc::Error& e) {
  std::cerr << "error: " << cc::ErrorCodeName(e.code()) << ": " << e.message() << "\n";
  return 1;
}

bool WriteFile(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out << data;
  return static_cast<bool>(out);
}

// --- ledger ------------------------------------------------------------------

int LedgerVerify(const fs::path& given) {
  fs::path file = given;
  if (fs::is_directory(file)) {
    file = fs::exists(given / "ledger" / "blocks.dat") ? given / "ledger" / "blocks.dat"
                                                       : given / "blocks.dat";
  }
  cc::ledger::ChainReport r = cc::ledger::VerifyChainFile(file);
  if (r.ok) {
    std::cout << "OK " << r.blocks << " blocks verified in " << file.string() << "\n";
    return 0;
  }
  std::cout << "VIOLATION at block " << r.first_bad_block << ": " << r.reason;
  if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
  std::cout << "\n";
  return 2;
}

// --- identity ----------------------------------------------------------------

struct IdentityArgs {
  std::string wallet;
  std::string org;
  std::string user;
  std::string role;
};

cc::Result<cc::identity::OrgName> OrgArg(const std::string& name) {
  auto org = cc::identity::ParseOrgName(name);
  if (!org) return cc::Error(cc::ErrorCode::kInvalidArgument, "unknown org " + name);
  return *org;
}

int IdentityEnroll(const IdentityArgs& a) {
  auto m = cc::identity::Membership::Open(a.wallet);
  if (!m.ok()) return Fail(m.error());
  auto org = OrgArg(a.org);
  if (!org.ok()) return Fail(org.error());
  cc::identity::Role role = cc::identity::RoleForOrg(*org);
  if (!a.role.empty()) {
    auto r = cc::identity::ParseRole(a.role);
    if (!r) return Fail(cc::Error(cc::ErrorCode::kInvalidArgument, "unknown role " + a.role));
    role = *r;
  }
  auto id = (*m)->Enroll(*org, a.user, role);
  if (!id.ok()) return Fail(id.error());
  std::cout << id->certificate.ToJson().dump(2) << "\n";
  return 0;
}

int IdentityList(const IdentityArgs& a) {
  auto m = cc::identity::Membership::Open(a.wallet);
  if (!m.ok()) return Fail(m.error());
  std::optional<cc::identity::OrgName> filter;
  if (!a.org.empty()) {
    auto org = OrgArg(a.org);
    if (!org.ok()) return Fail(org.error());
    filter = *org;
  }
  for (const auto& c : (*m)->List(filter)) {
    auto role = c.role();
    std::cout << cc::identity::OrgNameString(c.org) << "\t" << c.user_id << "\t"
              << (role ? cc::identity::RoleName(*role) : "?") << "\t" << c.Fingerprint()
              << "\n";
  }
  return 0;
}

int IdentityVerify(const IdentityArgs& a) {
  auto m = cc::identity::Membership::Open(a.wallet);
  if (!m.ok()) return Fail(m.error());
  auto id = (*m)->FindUser(a.user);
  if (!id.ok()) return Fail(id.error());
  cc::Status s = (*m)->roots().VerifyCertificate(id->certificate);
  if (!s.ok()) return Fail(s.error());
  std::cout << "OK " << a.user << " is certified by "
            << cc::identity::OrgNameString(id->org()) << "\n";
  return 0;
}

// --- media -------------------------------------------------------------------

int MediaVerifyAll(const fs::path& root) {
  auto store = cc::media::MediaStore::Open(root);
  if (!store.ok()) return Fail(store.error());
  auto r = (*store)->VerifyAll();
  for (const auto& [path, why] : r.failures) {
    std::cout << "CORRUPT " << path.string() << ": " << why << "\n";
  }
  std::cout << (r.ok() ? "OK " : "FAILED ") << r.checked << " objects checked, "
            << r.failures.size() << " corrupt\n";
  return r.ok() ? 0 : 2;
}

// --- gateway -----------------------------------------------------------------

int GatewayServe(const std::string& config_path) {
  auto cfg = cc::gateway::LoadConfig(config_path);
  if (!cfg.ok()) return Fail(cfg.error());
  auto gw = cc::gateway::Gateway::Open(*cfg);
  if (!gw.ok()) return Fail(gw.error());
  auto server = cc::gateway::ApiServer::Start(gw->get());
  if (!server.ok()) {
    (*gw)->Close();
    return Fail(server.error());
  }
  std::cerr << "serving " << ((*server)->tls() ? "https" : "http") << "://" << cfg->host << ":"
            << (*server)->port() << " (data " << cfg->data_dir.string() << ")\n";
  InstallSignalHandlers();
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  std::cerr << "shutting down\n";
  (*server)->Stop();
  (*gw)->Close();
  return 0;
}

// --- bench -------------------------------------------------------------------

// A target plus whatever keeps it alive.
struct BenchSetup {
  std::unique_ptr<cc::bench::EmbeddedGateway> gateway;
  std::unique_ptr<cc::bench::Target> target;
};

cc::Result<BenchSetup> MakeTarget(const cc::bench::WorkloadSpec& spec, const fs::path& data_dir) {
  BenchSetup s;
  if (spec.target == cc::bench::TargetKind::kLedger) {
    CC_ASSIGN_OR_RETURN(std::unique_ptr<cc::bench::LedgerTarget> t,
                        cc::bench::LedgerTarget::Open(spec, data_dir / "ledger"));
    s.target = std::move(t);
    return s;
  }
  int port = spec.rest_port;
  if (port == 0) {
    cc::gateway::GatewayConfig gc = cc::bench::BenchGatewayConfig(data_dir / "gateway",
                                                                  spec.workers);
    gc.max_messages_per_block = spec.max_messages_per_block;
    gc.batch_timeout = cc::Millis(static_cast<std::int64_t>(spec.batch_timeout_ms));
    gc.fsync = spec.fsync;
    CC_ASSIGN_OR_RETURN(s.gateway, cc::bench::EmbeddedGateway::Start(gc));
    port = s.gateway->port();
  }
  s.target = std::make_unique<cc::bench::RestTarget>(spec.rest_host, port,
                                                     spec.rest_port != 0 && spec.rest_tls);
  return s;
}

// Scratch directory removed on exit unless the user chose the location.
struct WorkDir {
  fs::path path;
  bool keep = false;
  explicit WorkDir(const std::string& given) {
    if (!given.empty()) {
      path = given;
      keep = true;
    } else {
      path = fs::temp_directory_path() /
             ("classicschain-bench-" + std::to_string(::getpid()) + "-" +
              cc::crypto::HexEncode(cc::crypto::RandomBytes(4)));
    }
    fs::create_directories(path);
  }
  ~WorkDir() {
    std::error_code ec;
    if (!keep) fs::remove_all(path, ec);
  }
};

cc::Result<cc::bench::WorkloadSpec> LoadSpec(const std::string& path) {
  if (path.empty()) return cc::bench::WorkloadSpec{};
  std::ifstream in(path);
  if (!in) return cc::Error(cc::ErrorCode::kIoFailure, "cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CC_ASSIGN_OR_RETURN(cc::Json j, cc::ParseJson(text));
  return cc::bench::WorkloadSpec::FromJson(j);
}

struct BenchArgs {
  std::string spec;
  std::string data_dir;
  std::string csv;
  std::string json;
  std::string op = "read";
  std::vector<double> rates;
  double duration = 0;
  int stop_after = 2;
  std::vector<int> files{0, 2, 5};
  int requests = 30;
  int delay_ms = 1000;
  std::size_t file_bytes = 16 * 1024;
};

int BenchRun(const BenchArgs& a) {
  cc::crypto::Init();
  auto spec = LoadSpec(a.spec);
  if (!spec.ok()) return Fail(spec.error());
  if (a.duration > 0) spec->duration_seconds = a.duration;
  WorkDir dir(a.data_dir);
  auto setup = MakeTarget(*spec, dir.path);
  if (!setup.ok()) return Fail(setup.error());
  InstallSignalHandlers();
  auto report = cc::bench::RunWorkload(*setup->target, *spec, &g_stop);
  if (!report.ok()) return Fail(report.error());
  std::cout << report->Summary();
  if (!a.csv.empty() && !WriteFile(a.csv, report->ToCsv())) {
    return Fail(cc::Error(cc::ErrorCode::kIoFailure, "cannot write " + a.csv));
  }
  if (!a.json.empty() && !WriteFile(a.json, report->ToJson().dump(2) + "\n")) {
    return Fail(cc::Error(cc::ErrorCode::kIoFailure, "cannot write " + a.json));
  }
  return report->aborted ? 3 : 0;
}

int BenchSweep(const BenchArgs& a) {
  cc::crypto::Init();
  auto spec = LoadSpec(a.spec);
  if (!spec.ok()) return Fail(spec.error());
  if (a.duration > 0) spec->duration_seconds = a.duration;
  std::vector<double> rates = a.rates;
  if (rates.empty()) {
    for (double r = 25; r <= 12800; r *= 2) rates.push_back(r);
  }
  WorkDir dir(a.data_dir);
  auto setup = MakeTarget(*spec, dir.path);
  if (!setup.ok()) return Fail(setup.error());
  InstallSignalHandlers();
  auto curve =
      cc::bench::SweepSaturation(*setup->target, *spec, a.op, rates, a.stop_after, &g_stop);
  if (!curve.ok()) return Fail(curve.error());
  std::cout << "# Absolute numbers depend on the host; compare ratios and curve shapes.\n"
            << curve->ToTable();
  if (!a.json.empty() && !WriteFile(a.json, curve->ToJson().dump(2) + "\n")) {
    return Fail(cc::Error(cc::ErrorCode::kIoFailure, "cannot write " + a.json));
  }
  return 0;
}

int BenchAnchorCompare(const BenchArgs& a) {
  cc::crypto::Init();
  WorkDir dir(a.data_dir);
  cc::bench::AnchorCompareOptions opt;
  opt.file_counts = a.files;
  opt.requests = a.requests;
  opt.file_bytes = a.file_bytes;
  opt.base = cc::bench::BenchGatewayConfig(dir.path, 8);
  opt.base.anchor_delay = cc::Millis(a.delay_ms);
  opt.work_dir = dir.path;
  auto table = cc::bench::CompareAnchorModes(opt);
  if (!table.ok()) return Fail(table.error());
  std::cout << table->ToTable();
  if (!a.json.empty() && !WriteFile(a.json, table->ToJson().dump(2) + "\n")) {
    return Fail(cc::Error(cc::ErrorCode::kIoFailure, "cannot write " + a.json));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  cc::crypto::Init();
  CLI::App app{"ClassicsChain engine tools"};
  app.require_subcommand(1);
  int rc = 0;

  auto* ledger = app.add_subcommand("ledger", "Block file tools")->require_subcommand(1);
  std::string chain_path;
  auto* verify = ledger->add_subcommand("verify", "Verify hash links and orderer signatures");
  verify->add_option("path", chain_path, "blocks.dat or a data directory")->required();
  verify->callback([&] { rc = LedgerVerify(chain_path); });

  auto* ident = app.add_subcommand("identity", "Wallet and certificate tools")->require_subcommand(1);
  IdentityArgs ia;
  auto* enroll = ident->add_subcommand("enroll", "Enroll a user with its org CA");
  enroll->add_option("--wallet", ia.wallet, "Wallet directory")->required();
  enroll->add_option("--org", ia.org, "OwnersOrg, WorkshopsOrg or CertifiersOrg")->required();
  enroll->add_option("--user", ia.user, "User id")->required();
  enroll->add_option("--role", ia.role, "Role attribute (default: the org's role)");
  enroll->callback([&] { rc = IdentityEnroll(ia); });
  auto* list = ident->add_subcommand("list", "List enrolled identities");
  list->add_option("--wallet", ia.wallet, "Wallet directory")->required();
  list->add_option("--org", ia.org, "Only this org");
  list->callback([&] { rc = IdentityList(ia); });
  auto* iverify = ident->add_subcommand("verify", "Check a user's certificate against its org root");
  iverify->add_option("--wallet", ia.wallet, "Wallet directory")->required();
  iverify->add_option("--user", ia.user, "User id")->required();
  iverify->callback([&] { rc = IdentityVerify(ia); });

  auto* media = app.add_subcommand("media", "Media store tools")->require_subcommand(1);
  std::string media_root;
  auto* vall = media->add_subcommand("verify-all", "Re-hash every stored object");
  vall->add_option("--root", media_root, "Gateway data directory")->required();
  vall->callback([&] { rc = MediaVerifyAll(media_root); });

  auto* gw = app.add_subcommand("gateway", "REST gateway")->require_subcommand(1);
  std::string config_path;
  auto* serve = gw->add_subcommand("serve", "Run the gateway until SIGINT/SIGTERM");
  serve->add_option("--config", config_path, "JSON config file")->required();
  serve->callback([&] { rc = GatewayServe(config_path); });
  std::string cert, key, cn = "localhost";
  int days = 365;
  auto* gencert = gw->add_subcommand("gen-cert", "Write a self-signed TLS certificate");
  gencert->add_option("--cert", cert, "Certificate PEM path")->required();
  gencert->add_option("--key", key, "Private key PEM path")->required();
  gencert->add_option("--cn", cn, "Common name");
  gencert->add_option("--days", days, "Validity in days");
  gencert->callback([&] {
    cc::Status s = cc::gateway::WriteSelfSignedCertificate(cert, key, cn, days);
    rc = s.ok() ? 0 : Fail(s.error());
  });

  auto* bench = app.add_subcommand("bench", "Load generator")->require_subcommand(1);
  BenchArgs ba;
  auto* run = bench->add_subcommand("run", "Run one workload spec");
  run->add_option("--spec", ba.spec, "Workload spec JSON")->required();
  run->add_option("--csv", ba.csv, "Write raw samples (ts,op,latency_ms,status)");
  run->add_option("--json", ba.json, "Write the aggregate report");
  run->add_option("--data-dir", ba.data_dir, "Keep ledger/gateway data here");
  run->add_option("--duration", ba.duration, "Override durationSeconds");
  run->callback([&] { rc = BenchRun(ba); });
  auto* sweep = bench->add_subcommand("sweep", "Sweep one operation over send rates");
  sweep->add_option("--op", ba.op, "read, history, list, write or step");
  sweep->add_option("--rates", ba.rates, "Increasing rates (default 25..12800, doubling)")
      ->delimiter(',');
  sweep->add_option("--spec", ba.spec, "Base workload spec JSON");
  sweep->add_option("--duration", ba.duration, "Seconds per rate");
  sweep->add_option("--stop-after", ba.stop_after, "Stop after N unsustained rates (0: never)");
  sweep->add_option("--json", ba.json, "Write the curve");
  sweep->add_option("--data-dir", ba.data_dir, "Keep ledger/gateway data here");
  sweep->callback([&] { rc = BenchSweep(ba); });
  auto* cmp = bench->add_subcommand("anchor-compare", "Sync vs async anchoring durations");
  cmp->add_option("--files", ba.files, "File counts")->delimiter(',');
  cmp->add_option("--requests", ba.requests, "Requests per cell");
  cmp->add_option("--delay-ms", ba.delay_ms, "Injected per-file anchor delay");
  cmp->add_option("--file-bytes", ba.file_bytes, "Bytes per evidence file");
  cmp->add_option("--json", ba.json, "Write the table");
  cmp->add_option("--data-dir", ba.data_dir, "Keep gateway data here");
  cmp->callback([&] { rc = BenchAnchorCompare(ba); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
