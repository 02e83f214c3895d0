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


#include "classicschain/bench/targets.h"

#include <condition_variable>
#include <random>

#include "classicschain/common/crypto.h"
#include "classicschain/contracts/classics_contract.h"

namespace classicschain::bench {
namespace {

namespace fn = contracts::fn;
using identity::Identity;
using identity::OrgName;
using identity::Role;

constexpr char kVinAlphabet[] = "0123456789ABCDEFGHJKLMNPRSTUVWXYZ";  // no I, O, Q
constexpr int kVinRadix = 33;

std::string VinDigits(std::uint64_t v, int width) {
  std::string out(width, '0');
  for (int i = width - 1; i >= 0; --i) {
    out[i] = kVinAlphabet[v % kVinRadix];
    v /= kVinRadix;
  }
  return out;
}

std::string Details(std::uint64_t n) {
  return Canonical(Json{{"make", "Bench"},
                        {"model", "Model " + std::to_string(n % 7)},
                        {"registrationNumber", "BN " + std::to_string(n)},
                        {"year", 1960 + static_cast<int>(n % 40)}});
}

Json StepJson(const std::string& step_id, std::uint64_t n) {
  Json j = {{"activityType", "mechanical"},
            {"description", "bench step"},
            {"title", "Step " + std::to_string(n)}};
  if (!step_id.empty()) j["stepId"] = step_id;
  return j;
}

// Submits a batch of independent transactions concurrently and waits.
struct Call {
  const Identity* who;
  std::string function;
  std::vector<std::string> args;
};

Status SubmitAll(ledger::Ledger& ledger, const std::vector<Call>& calls) {
  std::mutex mu;
  std::condition_variable cv;
  std::size_t remaining = calls.size();
  std::optional<Error> first;
  for (const auto& c : calls) {
    ledger.SubmitAsync(*c.who, c.function, c.args, [&](Result<ledger::SubmitResult> r) {
      std::lock_guard<std::mutex> lock(mu);
      if (!r.ok() && !first) first = r.error();
      if (--remaining == 0) cv.notify_all();
    });
  }
  std::unique_lock<std::mutex> lock(mu);
  cv.wait(lock, [&] { return remaining == 0; });
  if (first) return *first;
  return Status::Ok();
}

std::string RandomVinSalt() { return VinDigits(crypto::RandomU64(), 3); }

}  // namespace

// --- ledger ------------------------------------------------------------------

Result<std::unique_ptr<LedgerTarget>> LedgerTarget::Open(const WorkloadSpec& spec,
                                                         const std::filesystem::path& data_dir) {
  crypto::Init();
  std::unique_ptr<LedgerTarget> t(new LedgerTarget());
  CC_ASSIGN_OR_RETURN(std::unique_ptr<identity::Membership> m, identity::Membership::Open({}));
  t->membership_ = std::move(m);
  ledger::LedgerConfig lc;
  lc.data_dir = data_dir;
  lc.max_messages_per_block = spec.max_messages_per_block;
  lc.batch_timeout = Millis(static_cast<std::int64_t>(spec.batch_timeout_ms));
  lc.fsync = spec.fsync;
  CC_ASSIGN_OR_RETURN(t->ledger_,
                      ledger::Ledger::Open(std::move(lc), t->membership_,
                                           std::make_shared<contracts::ClassicsContract>()));
  return t;
}

LedgerTarget::~LedgerTarget() {
  if (ledger_) ledger_->Close();
}

std::string LedgerTarget::Vin(std::uint64_t seq) const {
  return "W" + salt_ + VinDigits(seq, 8);
}

Status LedgerTarget::Prepare(const WorkloadSpec& spec) {
  if (prepared_) return Status::Ok();
  salt_ = RandomVinSalt();
  CC_ASSIGN_OR_RETURN(owner_, membership_->Enroll(OrgName::kOwners, "bench-owner", Role::kOwner));
  CC_ASSIGN_OR_RETURN(shop_,
                      membership_->Enroll(OrgName::kWorkshops, "bench-shop", Role::kRestorer));
  CC_RETURN_IF_ERROR(SubmitAll(*ledger_, {{&owner_, fn::kRegisterUser, {}},
                                          {&shop_, fn::kRegisterUser, {}}}));
  std::vector<Call> reg, grant;
  for (int i = 0; i < spec.vehicles; ++i) {
    vins_.push_back("B" + salt_ + VinDigits(static_cast<std::uint64_t>(i), 6));
    reg.push_back({&shop_, fn::kRegisterClassic, {vins_.back(), Details(i), "bench-owner"}});
    grant.push_back({&owner_, fn::kGrantAccess, {vins_.back(), "bench-shop", "write"}});
  }
  CC_RETURN_IF_ERROR(SubmitAll(*ledger_, reg));
  CC_RETURN_IF_ERROR(SubmitAll(*ledger_, grant));
  for (int d = 0; d < spec.history_depth; ++d) {
    std::vector<Call> steps;
    for (const auto& vin : vins_) {
      std::string id;
      {
        std::lock_guard<std::mutex> lock(ulid_mu_);
        id = ulids_.Next(DefaultClock()->WallMillis());
      }
      steps.push_back({&shop_, fn::kAddRestorationStep,
                       {vin, Canonical(StepJson(id, d)), "[]"}});
    }
    CC_RETURN_IF_ERROR(SubmitAll(*ledger_, steps));
  }
  prepared_ = true;
  return Status::Ok();
}

void LedgerTarget::Execute(const std::string& op, std::uint64_t seq, Completion done) {
  auto finish = [done](const auto& r) {
    done(r.ok() ? std::string("OK") : std::string(ErrorCodeName(r.code())));
  };
  const std::string& vin = vins_[seq % vins_.size()];
  if (op == "read") return finish(ledger_->EvaluateQuery(owner_, fn::kGetVehicleCard, {vin}));
  if (op == "history") {
    return finish(ledger_->EvaluateQuery(owner_, fn::kGetVehicleCardHistory, {vin}));
  }
  if (op == "list") {
    return finish(ledger_->EvaluateQuery(owner_, fn::kListClassicsForUser, {"bench-owner"}));
  }
  auto cb = [finish](Result<ledger::SubmitResult> r) { finish(r); };
  if (op == "write") {
    std::uint64_t n = write_seq_.fetch_add(1);
    return ledger_->SubmitAsync(shop_, fn::kRegisterClassic, {Vin(n), Details(n), "bench-owner"},
                                cb);
  }
  if (op == "step") {
    std::string id;
    {
      std::lock_guard<std::mutex> lock(ulid_mu_);
      id = ulids_.Next(DefaultClock()->WallMillis());
    }
    return ledger_->SubmitAsync(shop_, fn::kAddRestorationStep,
                                {vin, Canonical(StepJson(id, seq)), "[]"}, cb);
  }
  done(std::string(ErrorCodeName(ErrorCode::kUnknownFunction)));
}

// --- REST --------------------------------------------------------------------

RestTarget::RestTarget(std::string host, int port, bool tls)
    : host_(std::move(host)), port_(port), tls_(tls) {}

RestTarget::~RestTarget() = default;

gateway::ApiClient& RestTarget::ClientFor(As who) {
  gateway::ApiClient* client;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = clients_[std::this_thread::get_id()];
    if (!slot) slot = std::make_unique<gateway::ApiClient>(host_, port_, tls_);
    client = slot.get();
  }
  // One connection per worker: the server holds a thread per open connection.
  client->set_token(who == As::kOwner ? owner_token_ : shop_token_);
  return *client;
}

std::string RestTarget::StatusOf(const gateway::ClientResponse& r, int expected) {
  if (r.status == expected) return "OK";
  if (r.status == 0) return std::string(ErrorCodeName(ErrorCode::kTargetUnreachable));
  std::string code = r.error_code();
  return code.empty() ? "HTTP_" + std::to_string(r.status) : code;
}

Status RestTarget::Prepare(const WorkloadSpec& spec) {
  if (prepared_) return Status::Ok();
  crypto::Init();
  files_per_request_ = spec.files_per_request;
  file_bytes_ = spec.file_bytes;
  gateway::ApiClient setup(host_, port_, tls_);
  auto health = setup.Get("/health");
  if (health.status != 200) {
    return Error(ErrorCode::kTargetUnreachable,
                 "no gateway at " + host_ + ":" + std::to_string(port_));
  }
  salt_ = RandomVinSalt();
  const std::string tag = crypto::HexEncode(crypto::RandomBytes(4));
  auto enroll = [&](const std::string& name, const char* org, const char* role,
                    std::string* token, std::string* id) -> Status {
    gateway::ApiClient c(host_, port_, tls_);
    Json body = {{"displayName", name},
                 {"email", name + "-" + tag + "@bench.invalid"},
                 {"password", crypto::HexEncode(crypto::RandomBytes(12))},
                 {"org", org},
                 {"role", role},
                 {"userId", name + "-" + tag}};
    auto r = c.RegisterAndLogin(body);
    if (r.status != 200) {
      return Error(ErrorCode::kTargetUnreachable, "bench user setup failed: " + r.raw);
    }
    *token = c.token();
    *id = body["userId"];
    return Status::Ok();
  };
  std::string shop_id;
  CC_RETURN_IF_ERROR(enroll("bench-owner", "OwnersOrg", "owner", &owner_token_, &owner_id_));
  CC_RETURN_IF_ERROR(enroll("bench-shop", "WorkshopsOrg", "restorer", &shop_token_, &shop_id));

  gateway::ApiClient owner(host_, port_, tls_), shop(host_, port_, tls_);
  owner.set_token(owner_token_);
  shop.set_token(shop_token_);
  for (int i = 0; i < spec.vehicles; ++i) {
    std::string vin = "B" + salt_ + VinDigits(static_cast<std::uint64_t>(i), 6);
    auto reg = shop.Post("/classics", {{"make", "Bench"},
                                       {"model", "Setup"},
                                       {"ownerUserId", owner_id_},
                                       {"registrationNumber", "BN " + std::to_string(i)},
                                       {"vin", vin},
                                       {"year", 1970}});
    if (reg.status != 201) return Error(ErrorCode::kTargetUnreachable, "setup: " + reg.raw);
    auto grant = owner.Post("/classics/" + vin + "/access",
                            {{"userId", shop_id}, {"level", "write"}});
    if (grant.status != 200) return Error(ErrorCode::kTargetUnreachable, "setup: " + grant.raw);
    for (int d = 0; d < spec.history_depth; ++d) {
      Json meta = StepJson("", d);
      auto step = shop.PostMultipart("/classics/" + vin + "/restorations", &meta, {});
      if (step.status != 201) return Error(ErrorCode::kTargetUnreachable, "setup: " + step.raw);
    }
    vins_.push_back(vin);
  }
  prepared_ = true;
  return Status::Ok();
}

void RestTarget::Execute(const std::string& op, std::uint64_t seq, Completion done) {
  const std::string& vin = vins_[seq % vins_.size()];
  if (op == "read") return done(StatusOf(ClientFor(As::kOwner).Get("/classics/" + vin + "/card"), 200));
  if (op == "history") {
    return done(StatusOf(ClientFor(As::kOwner).Get("/classics/" + vin + "/history"), 200));
  }
  if (op == "list") {
    return done(StatusOf(ClientFor(As::kOwner).Get("/users/" + owner_id_ + "/classics"), 200));
  }
  if (op == "write") {
    std::uint64_t n = write_seq_.fetch_add(1);
    Json body = {{"make", "Bench"},
                 {"model", "Write"},
                 {"ownerUserId", owner_id_},
                 {"registrationNumber", "W " + std::to_string(n)},
                 {"vin", "W" + salt_ + VinDigits(n, 8)},
                 {"year", 1975}};
    return done(StatusOf(ClientFor(As::kShop).Post("/classics", body), 201));
  }
  if (op == "step") {
    std::vector<gateway::UploadFile> files;
    for (int i = 0; i < files_per_request_; ++i) {
      files.push_back({"evidence-" + std::to_string(i) + ".jpg", "image/jpeg",
                       crypto::RandomBytes(std::max<std::size_t>(file_bytes_, 16))});
    }
    Json meta = StepJson("", seq);
    return done(StatusOf(
        ClientFor(As::kShop).PostMultipart("/classics/" + vin + "/restorations", &meta, files),
        201));
  }
  done(std::string(ErrorCodeName(ErrorCode::kUnknownFunction)));
}

// --- embedded gateway --------------------------------------------------------

gateway::GatewayConfig BenchGatewayConfig(const std::filesystem::path& data_dir,
                                          int client_workers) {
  gateway::GatewayConfig c;
  c.data_dir = data_dir;
  c.port = 0;
  c.test_mode = true;
  c.threads = client_workers + 8;
  c.fsync = false;
  c.batch_timeout = Millis(50);
  c.argon2_ops_limit = 1;
  c.argon2_mem_limit_kib = 8 * 1024;
  return c;
}

Result<std::unique_ptr<EmbeddedGateway>> EmbeddedGateway::Start(gateway::GatewayConfig config) {
  std::unique_ptr<EmbeddedGateway> e(new EmbeddedGateway());
  CC_ASSIGN_OR_RETURN(e->gateway_, gateway::Gateway::Open(std::move(config)));
  CC_ASSIGN_OR_RETURN(e->server_, gateway::ApiServer::Start(e->gateway_.get()));
  return e;
}

EmbeddedGateway::~EmbeddedGateway() { Stop(); }

void EmbeddedGateway::Stop() {
  if (server_) server_->Stop();
  if (gateway_) gateway_->Close();
}

}  // namespace classicschain::bench
