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


#include "classicschain/gateway/gateway.h"

#include <filesystem>
#include <fstream>
#include <thread>

#include "classicschain/common/crypto.h"
#include "classicschain/contracts/classics_contract.h"

namespace classicschain::gateway {
namespace {

namespace fs = std::filesystem;
using contracts::RefKind;
using identity::Identity;

Error BadRequest(std::string message) {
  return Error(ErrorCode::kInvalidArgument, std::move(message));
}

Result<std::string> StringField(const Json& body, const char* field,
                                bool allow_empty = false) {
  if (!body.is_object() || !body.contains(field) || !body[field].is_string()) {
    return BadRequest(std::string(field) + " must be a string");
  }
  std::string v = body[field].get<std::string>();
  if (!allow_empty && v.empty()) {
    return BadRequest(std::string(field) + " must not be empty");
  }
  return v;
}

bool LooksLikeEmail(const std::string& email) {
  auto at = email.find('@');
  return at != std::string::npos && at > 0 && at + 1 < email.size() &&
         email.find('@', at + 1) == std::string::npos &&
         email.find_first_of(" \t\r\n") == std::string::npos;
}

ApiResponse Ok(Json body, int status = 200) { return ApiResponse{status, std::move(body)}; }

Result<Json> ParseResponse(const std::string& bytes) {
  auto j = ParseJson(bytes);
  if (!j.ok()) return Error(ErrorCode::kInternal, "unparseable contract response");
  return std::move(j).value();
}

Json JobJson(const media::AnchorJob& job) {
  Json j = {{"cid", job.cid},
            {"enqueueTime", job.enqueue_time},
            {"jobId", job.job_id},
            {"permanent", job.permanent},
            {"refKind", contracts::RefKindName(job.ref_kind)},
            {"retries", job.retries},
            {"state", media::JobStateName(job.state)},
            {"userId", job.user_id},
            {"vin", job.vin}};
  if (!job.last_error.empty()) j["lastError"] = job.last_error;
  return j;
}

Json RefInput(const StoredFile& f) {
  return Json{{"cid", f.cid.ToString()},
              {"filename", f.filename},
              {"mediaType", f.media_type},
              {"sizeBytes", f.size}};
}

Result<std::string> LoadOrCreateKey(const fs::path& path) {
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::ifstream in(path);
    std::string hex;
    in >> hex;
    auto key = crypto::HexDecode(hex);
    if (!key || key->size() < 32) {
      return Error(ErrorCode::kIoFailure, "malformed token key " + path.string());
    }
    return *key;
  }
  std::string key = crypto::RandomBytes(32);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << crypto::HexEncode(key) << "\n";
    if (!out) return Error(ErrorCode::kIoFailure, "cannot write token key");
  }
  fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, ec);
  fs::rename(tmp, path, ec);
  if (ec) return Error(ErrorCode::kIoFailure, ec.message());
  return key;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return 200;
    case ErrorCode::kAuthDenied:
      return 403;
    case ErrorCode::kUnknownVin:
    case ErrorCode::kUnknownUser:
    case ErrorCode::kUnknownFunction:
    case ErrorCode::kNotFound:
    case ErrorCode::kNoSuchGrant:
    case ErrorCode::kUnknownKey:
      return 404;
    case ErrorCode::kVinExists:
    case ErrorCode::kEmailExists:
    case ErrorCode::kDuplicateUser:
    case ErrorCode::kMvccConflict:
      return 409;
    case ErrorCode::kOrderingUnavailable:
    case ErrorCode::kNoLeader:
      return 503;
    case ErrorCode::kTimeout:
      return 504;
    case ErrorCode::kBadVin:
    case ErrorCode::kBadEvidence:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSelfTransfer:
    case ErrorCode::kRoleOrgMismatch:
    case ErrorCode::kMalformedCert:
      return 400;
    case ErrorCode::kTooLarge:
      return 413;
    case ErrorCode::kBadCredentials:
    case ErrorCode::kTokenExpired:
    case ErrorCode::kTokenInvalid:
      return 401;
    case ErrorCode::kEnrollmentFailure:
    case ErrorCode::kBadSignature:
    case ErrorCode::kEndorsementFailure:
    case ErrorCode::kTargetUnreachable:
      return 502;
    case ErrorCode::kIoFailure:
    case ErrorCode::kIntegrityFailure:
    case ErrorCode::kInternal:
      return 500;
  }
  return 500;
}

bool IsRetryable(ErrorCode code) {
  return code == ErrorCode::kMvccConflict || code == ErrorCode::kOrderingUnavailable ||
         code == ErrorCode::kNoLeader || code == ErrorCode::kTimeout;
}

Json ErrorBody(const Error& error) {
  return Json{{"error",
               {{"code", ErrorCodeName(error.code())},
                {"message", error.message()},
                {"retryable", IsRetryable(error.code())}}}};
}

ApiResponse ErrorResponse(const Error& error) {
  return ApiResponse{HttpStatusFor(error.code()), ErrorBody(error)};
}

// --- lifecycle ---------------------------------------------------------------

Result<std::unique_ptr<Gateway>> Gateway::Open(GatewayConfig config,
                                               GatewayHooks hooks) {
  crypto::Init();
  std::unique_ptr<Gateway> g(new Gateway());
  g->config_ = std::move(config);
  g->hooks_ = std::move(hooks);
  g->clock_ = g->hooks_.clock ? g->hooks_.clock : DefaultClock();
  const fs::path dir = g->config_.data_dir;
  if (dir.empty()) return BadRequest("dataDir must be set");
  std::error_code ec;
  for (const char* sub : {"ledger", "wallet", "users", "anchors", "events"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) return Error(ErrorCode::kIoFailure, ec.message());
  }

  CC_ASSIGN_OR_RETURN(std::unique_ptr<identity::Membership> membership,
                      identity::Membership::Open(dir / "wallet"));
  g->membership_ = std::move(membership);

  ledger::LedgerConfig lc;
  lc.data_dir = dir / "ledger";
  lc.max_messages_per_block = g->config_.max_messages_per_block;
  lc.batch_timeout = g->config_.batch_timeout;
  lc.fsync = g->config_.fsync;
  lc.commit_timeout = g->config_.commit_timeout;
  lc.clock = g->clock_;
  if (g->config_.transport == "loopback") {
    lc.ordering.transport = ledger::raft::TransportKind::kLoopback;
    lc.ordering.loopback_base_port =
        static_cast<std::uint16_t>(g->config_.loopback_base_port);
  } else if (g->config_.transport != "in-memory") {
    return BadRequest("unknown transport " + g->config_.transport);
  }
  CC_ASSIGN_OR_RETURN(
      g->ledger_, ledger::Ledger::Open(std::move(lc), g->membership_,
                                       std::make_shared<contracts::ClassicsContract>()));

  CC_ASSIGN_OR_RETURN(g->media_, media::MediaStore::Open(dir, g->config_.max_media_bytes));
  CC_ASSIGN_OR_RETURN(g->users_, UserStore::Open(dir / "users"));

  NotifierConfig nc;
  nc.dir = dir / "events";
  nc.webhooks = g->config_.webhooks;
  nc.max_attempts = g->config_.webhook_max_attempts;
  nc.backoff = g->config_.webhook_backoff;
  CC_ASSIGN_OR_RETURN(g->notifier_, Notifier::Open(std::move(nc)));

  std::string key;
  if (!g->config_.token_secret.empty()) {
    auto decoded = crypto::HexDecode(g->config_.token_secret);
    if (!decoded || decoded->size() < 16) {
      return BadRequest("auth.tokenSecret must be at least 16 hex-encoded bytes");
    }
    key = *decoded;
  } else {
    CC_ASSIGN_OR_RETURN(key, LoadOrCreateKey(dir / "token.key"));
  }
  g->tokens_ = std::make_unique<TokenSigner>(key, g->config_.token_ttl_seconds, g->clock_);

  CC_ASSIGN_OR_RETURN(
      g->dummy_hash_,
      crypto::HashPassword(crypto::HexEncode(crypto::RandomBytes(16)),
                           {g->config_.argon2_ops_limit,
                            g->config_.argon2_mem_limit_kib * 1024}));

  Gateway* raw = g.get();
  g->ledger_->AddBlockListener([raw](const ledger::Block& block) { raw->OnBlock(block); });

  media::AnchorQueueConfig qc;
  qc.journal = dir / "anchors" / "jobs.jsonl";
  qc.anchor_delay = g->config_.anchor_delay;
  qc.max_retries = g->config_.anchor_max_retries;
  qc.base_backoff = g->config_.anchor_backoff;
  CC_ASSIGN_OR_RETURN(g->anchors_,
                      media::AnchorQueue::Open(std::move(qc), [raw](const media::AnchorJob& job) {
                        return raw->AnchorJob(job);
                      }));
  return g;
}

Gateway::~Gateway() { Close(); }

void Gateway::Close() {
  if (closed_.exchange(true)) return;
  if (anchors_) anchors_->Stop();
  if (ledger_) ledger_->Close();
  if (notifier_) notifier_->Stop();
}

void Gateway::OnBlock(const ledger::Block& block) {
  for (std::size_t i = 0; i < block.transactions.size(); ++i) {
    if (block.validation_flags[i] != ledger::ValidationCode::kValid) continue;
    const ledger::LedgerTransaction& tx = block.transactions[i];
    std::string owner_after;
    if (!tx.args.empty()) {
      const std::string key = contracts::ClassicKey(tx.args[0]);
      for (const auto& w : tx.write_set) {
        if (w.key != key || w.is_delete) continue;
        auto c = ParseJson(w.value);
        if (c.ok() && c->contains("ownerUserId")) {
          owner_after = (*c)["ownerUserId"].get<std::string>();
        }
      }
    }
    for (auto& e : EventsForTransaction(tx, owner_after)) {
      if (e.recipient_user_id.empty()) continue;
      Status s = notifier_->Emit(std::move(e));
      (void)s;  // the event log reports its own I/O failures on replay
    }
  }
}

// --- helpers -----------------------------------------------------------------

Result<Identity> Gateway::CallerIdentity(const SessionClaims& who) const {
  auto id = membership_->Find(who.org, who.user_id);
  if (!id.ok()) return Error(ErrorCode::kTokenInvalid, "session names an unknown identity");
  return id;
}

Result<ledger::SubmitResult> Gateway::Submit(const Identity& caller,
                                             const std::string& function,
                                             std::vector<std::string> args) {
  for (int attempt = 0;; ++attempt) {
    auto r = ledger_->SubmitTransaction(caller, function, args);
    if (r.ok() || r.code() != ErrorCode::kMvccConflict || attempt >= config_.mvcc_retries) {
      return r;
    }
  }
}

ApiResponse Gateway::Query(const SessionClaims& who, const std::string& function,
                           std::vector<std::string> args) {
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = ledger_->EvaluateQuery(*caller, function, std::move(args));
  if (!r.ok()) return ErrorResponse(r.error());
  auto body = ParseResponse(*r);
  if (!body.ok()) return ErrorResponse(body.error());
  return Ok(std::move(body).value());
}

Status Gateway::AnchorNow(const Identity& caller, const std::string& vin, RefKind kind,
                          const std::vector<StoredFile>& files) {
  for (const auto& f : files) {
    if (config_.anchor_delay.count() > 0) std::this_thread::sleep_for(config_.anchor_delay);
    auto r = Submit(caller, contracts::fn::kAnchorMedia,
                    {vin, std::string(contracts::RefKindName(kind)), f.cid.ToString()});
    if (!r.ok()) return r.error();
  }
  return Status::Ok();
}

Status Gateway::AnchorJob(const media::AnchorJob& job) {
  auto caller = membership_->FindUser(job.user_id);
  if (!caller.ok()) return Error(ErrorCode::kUnknownUser, job.user_id);
  auto r = ledger_->SubmitTransaction(
      *caller, contracts::fn::kAnchorMedia,
      {job.vin, std::string(contracts::RefKindName(job.ref_kind)), job.cid});
  if (!r.ok()) return r.error();
  return Status::Ok();
}

// --- users and sessions ------------------------------------------------------

ApiResponse Gateway::RegisterUser(const Json& body) {
  if (!body.is_object()) return ErrorResponse(BadRequest("body must be a JSON object"));
  auto display = StringField(body, "displayName");
  auto email = StringField(body, "email");
  auto password = StringField(body, "password");
  auto org_name = StringField(body, "org");
  auto role_name = StringField(body, "role");
  for (const auto* r : {&display, &email, &password, &org_name, &role_name}) {
    if (!r->ok()) return ErrorResponse(r->error());
  }
  if (!LooksLikeEmail(*email)) return ErrorResponse(BadRequest("malformed email"));
  if (password->size() < 8) {
    return ErrorResponse(BadRequest("password must have at least 8 characters"));
  }
  auto org = identity::ParseOrgName(*org_name);
  auto role = identity::ParseRole(*role_name);
  if (!org || !identity::IsPeerOrg(*org)) {
    return ErrorResponse(BadRequest("org must be OwnersOrg, WorkshopsOrg or CertifiersOrg"));
  }
  if (!role) return ErrorResponse(BadRequest("unknown role " + *role_name));
  if (identity::RoleForOrg(*org) != *role) {
    return ErrorResponse(Error(ErrorCode::kRoleOrgMismatch,
                               *role_name + " is not a role of " + *org_name));
  }
  std::string user_id;
  if (body.contains("userId")) {
    auto requested = StringField(body, "userId");
    if (!requested.ok()) return ErrorResponse(requested.error());
    if (!identity::IsValidUserId(*requested)) {
      return ErrorResponse(BadRequest("userId may use letters, digits, '-', '_' and '.'"));
    }
    user_id = *requested;
  } else {
    user_id = "u" + ulids_.Next(clock_->WallMillis());
  }
  if (users_->FindByEmail(*email).ok()) {
    return ErrorResponse(Error(ErrorCode::kEmailExists, "email already registered"));
  }
  auto hash = crypto::HashPassword(
      *password, {config_.argon2_ops_limit, config_.argon2_mem_limit_kib * 1024});
  if (!hash.ok()) return ErrorResponse(hash.error());

  UserRecord rec;
  rec.user_id = user_id;
  rec.display_name = *display;
  rec.email = *email;
  rec.password_hash = *hash;
  rec.org = *org;
  rec.role = *role;
  rec.identity_ref = std::string(identity::OrgNameString(*org)) + "/" + user_id;
  rec.created_at = clock_->WallMillis();
  if (Status s = users_->Insert(rec); !s.ok()) return ErrorResponse(s.error());

  bool enrolled = false;
  auto fail = [&](const Error& cause) {
    if (enrolled) (void)membership_->Remove(*org, user_id);
    (void)users_->Remove(user_id);
    return ErrorResponse(Error(ErrorCode::kEnrollmentFailure,
                               "identity enrollment failed: " + cause.ToString()));
  };
  if (hooks_.before_enroll) {
    if (Status s = hooks_.before_enroll(rec); !s.ok()) return fail(s.error());
  }
  auto id = membership_->Enroll(*org, user_id, *role);
  if (!id.ok()) {
    if (id.code() == ErrorCode::kDuplicateUser) {
      (void)users_->Remove(user_id);
      return ErrorResponse(id.error());
    }
    return fail(id.error());
  }
  enrolled = true;
  auto tx = Submit(*id, contracts::fn::kRegisterUser, {});
  if (!tx.ok()) return fail(tx.error());

  return Ok(Json{{"displayName", rec.display_name},
                 {"email", rec.email},
                 {"org", identity::OrgNameString(rec.org)},
                 {"role", identity::RoleName(rec.role)},
                 {"txId", tx->tx_id},
                 {"userId", rec.user_id}},
            201);
}

ApiResponse Gateway::Login(const Json& body) {
  auto email = StringField(body, "email");
  auto password = StringField(body, "password", true);
  if (!email.ok()) return ErrorResponse(email.error());
  if (!password.ok()) return ErrorResponse(password.error());
  const Error denied(ErrorCode::kBadCredentials, "invalid email or password");
  auto rec = users_->FindByEmail(*email);
  if (!rec.ok()) {
    (void)crypto::VerifyPassword(dummy_hash_, *password);
    return ErrorResponse(denied);
  }
  if (!crypto::VerifyPassword(rec->password_hash, *password)) return ErrorResponse(denied);
  std::string token = tokens_->Issue(rec->user_id, rec->org, rec->role);
  auto claims = tokens_->Verify(token);
  if (!claims.ok()) return ErrorResponse(claims.error());
  return Ok(Json{{"expiresAt", claims->expires_at},
                 {"org", identity::OrgNameString(rec->org)},
                 {"role", identity::RoleName(rec->role)},
                 {"token", token},
                 {"userId", rec->user_id}});
}

Result<SessionClaims> Gateway::Authenticate(const std::string& authorization) const {
  constexpr std::string_view kBearer = "Bearer ";
  if (authorization.size() <= kBearer.size() ||
      authorization.compare(0, kBearer.size(), kBearer) != 0) {
    return Error(ErrorCode::kTokenInvalid, "missing bearer token");
  }
  return tokens_->Verify(authorization.substr(kBearer.size()));
}

ApiResponse Gateway::ListClassics(const SessionClaims& who, const std::string& user_id) {
  return Query(who, contracts::fn::kListClassicsForUser, {user_id});
}

ApiResponse Gateway::ListEvents(const SessionClaims& who, const std::string& user_id) {
  if (who.user_id != user_id) {
    return ErrorResponse(Error(ErrorCode::kAuthDenied, "users may only read their own events"));
  }
  Json events = Json::array();
  for (const auto& e : notifier_->EventsFor(user_id)) events.push_back(e.ToJson());
  return Ok(Json{{"events", events}, {"userId", user_id}});
}

// --- vehicles ----------------------------------------------------------------

ApiResponse Gateway::RegisterClassic(const SessionClaims& who, const Json& body) {
  auto vin = StringField(body, "vin");
  auto reg = StringField(body, "registrationNumber");
  auto make = StringField(body, "make");
  auto model = StringField(body, "model");
  auto owner = StringField(body, "ownerUserId");
  for (const auto* r : {&vin, &reg, &make, &model, &owner}) {
    if (!r->ok()) return ErrorResponse(r->error());
  }
  if (!body.contains("year") || !body["year"].is_number_integer()) {
    return ErrorResponse(BadRequest("year must be an integer"));
  }
  Json details = {{"make", *make},
                  {"model", *model},
                  {"registrationNumber", *reg},
                  {"year", body["year"]}};
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = Submit(*caller, contracts::fn::kRegisterClassic, {*vin, Canonical(details), *owner});
  if (!r.ok()) return ErrorResponse(r.error());
  auto card = ParseResponse(r->response);
  if (!card.ok()) return ErrorResponse(card.error());
  return Ok(Json{{"card", *card}, {"txId", r->tx_id}}, 201);
}

ApiResponse Gateway::AddRestoration(const SessionClaims& who, const std::string& vin,
                                    const Json& metadata,
                                    const std::vector<StoredFile>& files) {
  if (!metadata.is_object()) return ErrorResponse(BadRequest("metadata must be an object"));
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  Json step = metadata;
  step["stepId"] = ulids_.Next(clock_->WallMillis());
  Json evidence = Json::array();
  for (const auto& f : files) evidence.push_back(RefInput(f));

  const bool sync = config_.anchor_mode == AnchorMode::kSync;
  if (sync) {
    if (Status s = AnchorNow(*caller, vin, RefKind::kEvidence, files); !s.ok()) {
      return ErrorResponse(s.error());
    }
  }
  auto r = Submit(*caller, contracts::fn::kAddRestorationStep,
                  {vin, Canonical(step), Canonical(evidence)});
  if (!r.ok()) return ErrorResponse(r.error());

  Json out_evidence = Json::array();
  for (const auto& f : files) {
    Json e = RefInput(f);
    const std::string cid = f.cid.ToString();
    if (ledger_->GetState(contracts::AnchorKey(vin, cid))) {
      e["anchorState"] = "anchored";
    } else {
      auto job = anchors_->Enqueue(cid, vin, RefKind::kEvidence, who.user_id);
      if (!job.ok()) return ErrorResponse(job.error());
      e["anchorState"] = "pending";
      e["jobId"] = *job;
    }
    out_evidence.push_back(std::move(e));
  }
  return Ok(Json{{"anchorMode", AnchorModeName(config_.anchor_mode)},
                 {"evidence", out_evidence},
                 {"stepId", step["stepId"]},
                 {"txId", r->tx_id},
                 {"vin", vin}},
            201);
}

ApiResponse Gateway::AddDocument(const SessionClaims& who, const std::string& vin,
                                 const std::vector<StoredFile>& files) {
  if (files.size() != 1) {
    return ErrorResponse(BadRequest("exactly one file part is required"));
  }
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  const StoredFile& f = files.front();
  if (config_.anchor_mode == AnchorMode::kSync) {
    if (Status s = AnchorNow(*caller, vin, RefKind::kDocument, files); !s.ok()) {
      return ErrorResponse(s.error());
    }
  }
  auto r = Submit(*caller, contracts::fn::kAddDocument, {vin, Canonical(RefInput(f))});
  if (!r.ok()) return ErrorResponse(r.error());
  auto card = ParseResponse(r->response);
  if (!card.ok()) return ErrorResponse(card.error());
  Json doc = RefInput(f);
  const std::string cid = f.cid.ToString();
  if (ledger_->GetState(contracts::AnchorKey(vin, cid))) {
    doc["anchorState"] = "anchored";
  } else {
    auto job = anchors_->Enqueue(cid, vin, RefKind::kDocument, who.user_id);
    if (!job.ok()) return ErrorResponse(job.error());
    doc["anchorState"] = "pending";
    doc["jobId"] = *job;
  }
  return Ok(Json{{"card", *card}, {"document", doc}, {"txId", r->tx_id}}, 201);
}

ApiResponse Gateway::GetCard(const SessionClaims& who, const std::string& vin) {
  return Query(who, contracts::fn::kGetVehicleCard, {vin});
}

ApiResponse Gateway::GetHistory(const SessionClaims& who, const std::string& vin) {
  return Query(who, contracts::fn::kGetVehicleCardHistory, {vin});
}

ApiResponse Gateway::GrantAccess(const SessionClaims& who, const std::string& vin,
                                 const Json& body) {
  auto user = StringField(body, "userId");
  auto level = StringField(body, "level");
  if (!user.ok()) return ErrorResponse(user.error());
  if (!level.ok()) return ErrorResponse(level.error());
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = Submit(*caller, contracts::fn::kGrantAccess, {vin, *user, *level});
  if (!r.ok()) return ErrorResponse(r.error());
  auto access = ParseResponse(r->response);
  if (!access.ok()) return ErrorResponse(access.error());
  return Ok(Json{{"access", *access}, {"txId", r->tx_id}});
}

ApiResponse Gateway::RevokeAccess(const SessionClaims& who, const std::string& vin,
                                  const std::string& user_id) {
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = Submit(*caller, contracts::fn::kRevokeAccess, {vin, user_id});
  if (!r.ok()) return ErrorResponse(r.error());
  auto access = ParseResponse(r->response);
  if (!access.ok()) return ErrorResponse(access.error());
  return Ok(Json{{"access", *access}, {"txId", r->tx_id}});
}

ApiResponse Gateway::TransferOwnership(const SessionClaims& who, const std::string& vin,
                                       const Json& body) {
  auto owner = StringField(body, "newOwnerUserId");
  if (!owner.ok()) return ErrorResponse(owner.error());
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = Submit(*caller, contracts::fn::kTransferOwnership, {vin, *owner});
  if (!r.ok()) return ErrorResponse(r.error());
  auto card = ParseResponse(r->response);
  if (!card.ok()) return ErrorResponse(card.error());
  return Ok(Json{{"card", *card}, {"txId", r->tx_id}});
}

ApiResponse Gateway::Certify(const SessionClaims& who, const std::string& vin) {
  auto caller = CallerIdentity(who);
  if (!caller.ok()) return ErrorResponse(caller.error());
  auto r = Submit(*caller, contracts::fn::kCertifyVehicle, {vin});
  if (!r.ok()) return ErrorResponse(r.error());
  auto card = ParseResponse(r->response);
  if (!card.ok()) return ErrorResponse(card.error());
  return Ok(Json{{"card", *card}, {"txId", r->tx_id}});
}

Result<std::string> Gateway::GetMedia(const SessionClaims& who, const std::string& vin,
                                      const std::string& cid) {
  auto parsed = media::ContentId::Parse(cid);
  if (!parsed) return Error(ErrorCode::kBadEvidence, "malformed cid");
  CC_ASSIGN_OR_RETURN(Identity caller, CallerIdentity(who));
  CC_ASSIGN_OR_RETURN(std::string raw,
                      ledger_->EvaluateQuery(caller, contracts::fn::kGetVehicleCard, {vin}));
  CC_ASSIGN_OR_RETURN(Json card, ParseResponse(raw));
  bool referenced = false;
  auto scan = [&](const Json& refs) {
    if (!refs.is_array()) return;
    for (const auto& r : refs) {
      if (r.value("cid", "") == cid) referenced = true;
    }
  };
  scan(card.value("documents", Json::array()));
  for (const auto& s : card.value("steps", Json::array())) {
    scan(s.value("evidence", Json::array()));
  }
  if (!referenced) return Error(ErrorCode::kNotFound, cid + " is not part of " + vin);
  return media_->Get(*parsed);
}

ApiResponse Gateway::GetAnchorJob(const SessionClaims& who, const std::string& job_id) {
  std::uint64_t id = 0;
  try {
    std::size_t used = 0;
    id = std::stoull(job_id, &used);
    if (used != job_id.size()) throw std::invalid_argument(job_id);
  } catch (const std::exception&) {
    return ErrorResponse(BadRequest("jobId must be a number"));
  }
  auto job = anchors_->Get(id);
  if (!job) return ErrorResponse(Error(ErrorCode::kNotFound, "no anchor job " + job_id));
  if (job->user_id != who.user_id) {
    return ErrorResponse(Error(ErrorCode::kAuthDenied, "job belongs to another user"));
  }
  return Ok(JobJson(*job));
}

ApiResponse Gateway::Health() const {
  return Ok(Json{{"anchorMode", AnchorModeName(config_.anchor_mode)},
                 {"height", ledger_->Height()},
                 {"pendingAnchors", anchors_->PendingCount()},
                 {"status", "ok"}});
}

}  // namespace classicschain::gateway
