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


#include "classicschain/contracts/classics_contract.h"

#include <ctime>
#include <functional>
#include <map>
#include <set>

#include "classicschain/common/crypto.h"
#include "classicschain/common/ulid.h"
#include "classicschain/media/cid.h"

namespace classicschain::contracts {

namespace {

using identity::OrgName;
using identity::Role;
using ledger::TxContext;

constexpr std::int64_t kFirstCarYear = 1886;

struct Caller {
  std::string user_id;
  OrgName org = OrgName::kOwners;
  Role role = Role::kOwner;
};

Error Denied(const Caller& c, Operation op, std::string_view vin) {
  return Error(ErrorCode::kAuthDenied,
               c.user_id + " (" + std::string(identity::RoleName(c.role)) +
                   ") may not " + std::string(OperationName(op)) + " on " +
                   std::string(vin));
}

Error BadArgs(std::string why) {
  return Error(ErrorCode::kInvalidArgument, std::move(why));
}

Status ExpectArgs(const TxContext& ctx, std::size_t n) {
  if (ctx.args().size() != n) {
    return BadArgs(ctx.function() + " takes " + std::to_string(n) +
                   " argument(s)");
  }
  return Status::Ok();
}

std::int64_t YearOf(std::int64_t wall_ms) {
  std::time_t secs = static_cast<std::time_t>(wall_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return tm.tm_year + 1900;
}

Result<Json> ParseArgJson(const std::string& arg, std::string_view what,
                          ErrorCode code = ErrorCode::kInvalidArgument) {
  auto parsed = ParseJson(arg);
  if (!parsed.ok()) {
    return Error(code, std::string(what) + " is not valid JSON");
  }
  return std::move(parsed).value();
}

Result<std::string> RequiredString(const Json& j, const char* field,
                                   bool allow_empty = false) {
  if (!j.contains(field) || !j[field].is_string()) {
    return BadArgs(std::string(field) + " must be a string");
  }
  std::string v = j[field].get<std::string>();
  if (!allow_empty && v.empty()) {
    return BadArgs(std::string(field) + " must not be empty");
  }
  return v;
}

Result<std::vector<std::string>> OptionalStringList(const Json& j,
                                                    const char* field) {
  std::vector<std::string> out;
  if (!j.contains(field)) return out;
  if (!j[field].is_array()) return BadArgs(std::string(field) + " must be a list");
  for (const auto& item : j[field]) {
    if (!item.is_string()) {
      return BadArgs(std::string(field) + " must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

// --- state helpers ------------------------------------------------------------

Result<Caller> ResolveCaller(TxContext& ctx) {
  const identity::Certificate& cert = ctx.creator();
  auto role = cert.role();
  if (!role || *role == Role::kCa || *role == Role::kOrderer) {
    return Error(ErrorCode::kAuthDenied, "caller holds no end-user role");
  }
  auto raw = ctx.GetState(UserKey(cert.user_id));
  if (!raw) {
    return Error(ErrorCode::kAuthDenied,
                 cert.user_id + " is not registered on the ledger");
  }
  CC_ASSIGN_OR_RETURN(Json j, ParseArgJson(*raw, "user entry", ErrorCode::kInternal));
  CC_ASSIGN_OR_RETURN(UserEntry entry, UserEntry::FromJson(j));
  if (entry.org != identity::OrgNameString(cert.org) ||
      entry.public_key_hex != crypto::HexEncode(cert.public_key)) {
    return Error(ErrorCode::kAuthDenied,
                 "certificate does not match the registered identity");
  }
  return Caller{cert.user_id, cert.org, *role};
}

Status RequireUser(TxContext& ctx, const std::string& user_id) {
  if (!identity::IsValidUserId(user_id) || !ctx.GetState(UserKey(user_id))) {
    return Error(ErrorCode::kUnknownUser, user_id);
  }
  return Status::Ok();
}

template <typename T>
Result<T> Decode(const std::string& raw, std::string_view what) {
  auto j = ParseJson(raw);
  if (!j.ok()) {
    return Error(ErrorCode::kInternal, "corrupt " + std::string(what));
  }
  return T::FromJson(*j);
}

Result<Classic> LoadClassic(TxContext& ctx, const std::string& vin) {
  if (!IsValidVin(vin)) return Error(ErrorCode::kBadVin, vin);
  auto raw = ctx.GetState(ClassicKey(vin));
  if (!raw) return Error(ErrorCode::kUnknownVin, vin);
  return Decode<Classic>(*raw, "classic");
}

Result<Access> LoadAccess(TxContext& ctx, const std::string& vin) {
  auto raw = ctx.GetState(AccessKey(vin));
  if (!raw) return Access{vin, {}};
  return Decode<Access>(*raw, "access");
}

Subject SubjectFor(const Caller& caller, const Classic& classic,
                   const Access& access) {
  Subject s;
  s.role = caller.role;
  s.is_owner = classic.owner_user_id == caller.user_id;
  if (const AccessEntry* e = access.Find(caller.user_id)) s.grant = e->level;
  return s;
}

void SaveClassic(TxContext& ctx, Classic& classic) {
  classic.revision += 1;
  ctx.PutState(ClassicKey(classic.vin), Canonical(classic.ToJson()));
}

void SaveAccess(TxContext& ctx, const Access& access) {
  ctx.PutState(AccessKey(access.vin), Canonical(access.ToJson()));
}

// Loads the vehicle and checks `op` for the caller in one step.
struct Loaded {
  Caller caller;
  Classic classic;
  Access access;
};

Result<Loaded> Authorize(TxContext& ctx, Operation op, const std::string& vin) {
  CC_ASSIGN_OR_RETURN(Caller caller, ResolveCaller(ctx));
  CC_ASSIGN_OR_RETURN(Classic classic, LoadClassic(ctx, vin));
  CC_ASSIGN_OR_RETURN(Access access, LoadAccess(ctx, vin));
  if (!IsAllowed(op, SubjectFor(caller, classic, access))) {
    return Denied(caller, op, vin);
  }
  return Loaded{std::move(caller), std::move(classic), std::move(access)};
}

// --- card assembly (reads here are not recorded) -----------------------------------

Json RefsWithAnchorState(const TxContext& ctx, const std::string& vin,
                         const std::vector<MediaRef>& refs) {
  Json out = Json::array();
  for (const auto& r : refs) {
    Json j = r.ToJson();
    j["anchorState"] =
        ctx.PeekState(AnchorKey(vin, r.cid)) ? "anchored" : "pending";
    out.push_back(std::move(j));
  }
  return out;
}

Json CardJson(const TxContext& ctx, const Classic& classic,
              const Access& access) {
  const std::string classic_key = ClassicKey(classic.vin);
  auto history = ctx.GetHistoryForKey(classic_key);
  bool pending_write = ctx.writes(classic_key);

  Json c = classic.ToJson();
  c["documents"] = RefsWithAnchorState(ctx, classic.vin, classic.documents);
  Json certification = nullptr;
  if (classic.certified) {
    Json tx_id = nullptr;
    bool certifying_now =
        pending_write && ctx.function() == fn::kCertifyVehicle;
    if (!certifying_now) {
      for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->function == fn::kCertifyVehicle) {
          tx_id = it->tx_id;
          break;
        }
      }
    }
    certification = Json{{"certifierUserId", classic.certifier_user_id},
                         {"txId", tx_id}};
  }
  c["certification"] = certification;

  Json steps = Json::array();
  for (const auto& id : classic.step_ids) {
    auto raw = ctx.PeekState(StepKey(classic.vin, id));
    if (!raw) continue;
    auto step = Decode<RestorationStep>(*raw, "step");
    if (!step.ok()) continue;
    Json s = step->ToJson();
    s["evidence"] = RefsWithAnchorState(ctx, classic.vin, step->evidence);
    steps.push_back(std::move(s));
  }
  return Json{{"access", access.ToJson()},
              {"classic", c},
              {"steps", steps},
              {"versionCount", history.size() + (pending_write ? 1 : 0)}};
}

Json HistoryJson(const TxContext& ctx, const Classic& classic) {
  std::vector<std::string> keys = {ClassicKey(classic.vin),
                                   AccessKey(classic.vin)};
  for (const auto& id : classic.step_ids) keys.push_back(StepKey(classic.vin, id));

  struct Version {
    ledger::HistoryRecord head;
    std::map<std::string, Json> writes;
  };
  std::map<ledger::Version, Version> versions;
  for (const auto& key : keys) {
    for (auto& rec : ctx.GetHistoryForKey(key)) {
      auto& v = versions[rec.version];
      Json value = nullptr;
      if (!rec.is_delete) {
        auto parsed = ParseJson(rec.value);
        value = parsed.ok() ? *parsed : Json(rec.value);
      }
      v.writes[key] = Json{{"isDelete", rec.is_delete},
                           {"key", key},
                           {"value", value}};
      v.head = std::move(rec);
    }
  }
  Json out = Json::array();
  for (auto& [version, v] : versions) {
    Json writes = Json::array();
    for (auto& [k, w] : v.writes) writes.push_back(std::move(w));
    out.push_back(Json{{"function", v.head.function},
                       {"submitter",
                        {{"org", v.head.submitter_org},
                         {"userId", v.head.submitter_user}}},
                       {"timestamp", v.head.timestamp},
                       {"txId", v.head.tx_id},
                       {"writes", writes}});
  }
  return Json{{"versions", out}, {"vin", classic.vin}};
}

// --- functions ---------------------------------------------------------------------

Result<std::string> RegisterUser(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 0));
  const identity::Certificate& cert = ctx.creator();
  auto role = cert.role();
  if (!role || *role == Role::kCa || *role == Role::kOrderer) {
    return Error(ErrorCode::kAuthDenied, "only end users register");
  }
  if (ctx.GetState(UserKey(cert.user_id))) {
    return Error(ErrorCode::kDuplicateUser, cert.user_id);
  }
  UserEntry entry{cert.user_id, std::string(identity::OrgNameString(cert.org)),
                  std::string(identity::RoleName(*role)),
                  crypto::HexEncode(cert.public_key), ctx.timestamp()};
  std::string value = Canonical(entry.ToJson());
  ctx.PutState(UserKey(cert.user_id), value);
  return value;
}

Result<std::string> RegisterClassic(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 3));
  const auto& args = ctx.args();
  const std::string& vin = args[0];
  CC_ASSIGN_OR_RETURN(Caller caller, ResolveCaller(ctx));
  if (!IsAllowed(Operation::kRegisterClassic, Subject{caller.role, false, {}})) {
    return Denied(caller, Operation::kRegisterClassic, vin);
  }
  if (!IsValidVin(vin)) return Error(ErrorCode::kBadVin, vin);
  if (ctx.GetState(ClassicKey(vin))) return Error(ErrorCode::kVinExists, vin);

  CC_ASSIGN_OR_RETURN(Json details, ParseArgJson(args[1], "details"));
  if (!details.is_object()) return BadArgs("details must be an object");
  Classic c;
  c.vin = vin;
  CC_ASSIGN_OR_RETURN(c.registration_number,
                      RequiredString(details, "registrationNumber"));
  CC_ASSIGN_OR_RETURN(c.make, RequiredString(details, "make"));
  CC_ASSIGN_OR_RETURN(c.model, RequiredString(details, "model"));
  if (!details.contains("year") || !details["year"].is_number_integer()) {
    return BadArgs("year must be an integer");
  }
  c.year = details["year"].get<std::int64_t>();
  if (c.year < kFirstCarYear || c.year > YearOf(ctx.timestamp())) {
    return BadArgs("year out of range");
  }
  c.owner_user_id = args[2];
  CC_RETURN_IF_ERROR(RequireUser(ctx, c.owner_user_id));
  c.registered_by_org = std::string(identity::OrgNameString(caller.org));
  c.registered_by_user = caller.user_id;
  c.registered_at = ctx.timestamp();

  Access access{vin, {}};
  SaveClassic(ctx, c);
  SaveAccess(ctx, access);
  return Canonical(CardJson(ctx, c, access));
}

Result<std::string> AddRestorationStep(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 3));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l,
                      Authorize(ctx, Operation::kAddRestorationStep, args[0]));
  CC_ASSIGN_OR_RETURN(Json in, ParseArgJson(args[1], "step"));
  if (!in.is_object()) return BadArgs("step must be an object");
  RestorationStep s;
  s.vin = l.classic.vin;
  CC_ASSIGN_OR_RETURN(s.step_id, RequiredString(in, "stepId"));
  if (!IsUlid(s.step_id)) return BadArgs("stepId must be a ULID");
  for (const auto& existing : l.classic.step_ids) {
    if (existing == s.step_id) return BadArgs("duplicate stepId");
  }
  CC_ASSIGN_OR_RETURN(s.title, RequiredString(in, "title"));
  CC_ASSIGN_OR_RETURN(std::string type, RequiredString(in, "activityType"));
  auto activity = ParseActivityType(type);
  if (!activity) return BadArgs("unknown activityType " + type);
  s.activity_type = *activity;
  if (in.contains("description")) {
    CC_ASSIGN_OR_RETURN(s.description, RequiredString(in, "description", true));
  }
  CC_ASSIGN_OR_RETURN(s.materials, OptionalStringList(in, "materials"));
  CC_ASSIGN_OR_RETURN(s.tools, OptionalStringList(in, "tools"));

  CC_ASSIGN_OR_RETURN(Json evidence,
                      ParseArgJson(args[2], "evidence", ErrorCode::kBadEvidence));
  if (!evidence.is_array()) {
    return Error(ErrorCode::kBadEvidence, "evidence must be a list");
  }
  for (const auto& item : evidence) {
    CC_ASSIGN_OR_RETURN(MediaRef ref, MediaRef::FromInput(item, ctx.timestamp()));
    s.evidence.push_back(std::move(ref));
  }
  s.performed_by_user_id = l.caller.user_id;
  s.workshop_org = std::string(identity::OrgNameString(l.caller.org));
  s.created_at = ctx.timestamp();

  ctx.PutState(StepKey(s.vin, s.step_id), Canonical(s.ToJson()));
  l.classic.step_ids.push_back(s.step_id);
  l.classic.certified = false;
  l.classic.certifier_user_id.clear();
  SaveClassic(ctx, l.classic);
  return Canonical(Json{{"stepId", s.step_id}, {"vin", s.vin}});
}

Result<std::string> AddDocument(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 2));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l, Authorize(ctx, Operation::kAddDocument, args[0]));
  CC_ASSIGN_OR_RETURN(Json in,
                      ParseArgJson(args[1], "document", ErrorCode::kBadEvidence));
  CC_ASSIGN_OR_RETURN(MediaRef ref, MediaRef::FromInput(in, ctx.timestamp()));
  l.classic.documents.push_back(std::move(ref));
  SaveClassic(ctx, l.classic);
  return Canonical(CardJson(ctx, l.classic, l.access));
}

Result<std::string> CertifyVehicle(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 1));
  CC_ASSIGN_OR_RETURN(Loaded l,
                      Authorize(ctx, Operation::kCertifyVehicle, ctx.args()[0]));
  l.classic.certified = true;
  l.classic.certifier_user_id = l.caller.user_id;
  SaveClassic(ctx, l.classic);
  return Canonical(CardJson(ctx, l.classic, l.access));
}

Result<std::string> GrantAccess(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 3));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l, Authorize(ctx, Operation::kGrantAccess, args[0]));
  auto level = ParseAccessLevel(args[2]);
  if (!level) return BadArgs("level must be read, write or certify");
  const std::string& grantee = args[1];
  CC_RETURN_IF_ERROR(RequireUser(ctx, grantee));
  if (grantee == l.classic.owner_user_id) {
    return BadArgs("the owner already has full access");
  }
  l.access.Upsert(AccessEntry{grantee, *level, l.caller.user_id, ctx.timestamp()});
  SaveAccess(ctx, l.access);
  SaveClassic(ctx, l.classic);
  return Canonical(l.access.ToJson());
}

Result<std::string> RevokeAccess(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 2));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l, Authorize(ctx, Operation::kRevokeAccess, args[0]));
  if (!l.access.Remove(args[1])) {
    return Error(ErrorCode::kNoSuchGrant, args[1] + " has no grant on " + args[0]);
  }
  SaveAccess(ctx, l.access);
  SaveClassic(ctx, l.classic);
  return Canonical(l.access.ToJson());
}

Result<std::string> TransferOwnership(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 2));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l,
                      Authorize(ctx, Operation::kTransferOwnership, args[0]));
  const std::string& new_owner = args[1];
  if (new_owner == l.caller.user_id) {
    return Error(ErrorCode::kSelfTransfer, "cannot transfer to yourself");
  }
  CC_RETURN_IF_ERROR(RequireUser(ctx, new_owner));
  l.classic.owner_user_id = new_owner;
  l.access.entries.clear();
  SaveAccess(ctx, l.access);
  SaveClassic(ctx, l.classic);
  return Canonical(CardJson(ctx, l.classic, l.access));
}

Result<std::string> AnchorMedia(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 3));
  const auto& args = ctx.args();
  CC_ASSIGN_OR_RETURN(Loaded l, Authorize(ctx, Operation::kAnchorMedia, args[0]));
  auto kind = ParseRefKind(args[1]);
  if (!kind) return BadArgs("refKind must be document or evidence");
  if (!media::ContentId::Parse(args[2])) {
    return Error(ErrorCode::kBadEvidence, "malformed cid");
  }
  const std::string key = AnchorKey(l.classic.vin, args[2]);
  if (auto existing = ctx.GetState(key)) return *existing;
  AnchorRecord rec{args[2], *kind, l.caller.user_id, ctx.timestamp()};
  std::string value = Canonical(rec.ToJson());
  ctx.PutState(key, value);
  return value;
}

Result<std::string> GetVehicleCard(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 1));
  CC_ASSIGN_OR_RETURN(Loaded l,
                      Authorize(ctx, Operation::kGetVehicleCard, ctx.args()[0]));
  return Canonical(CardJson(ctx, l.classic, l.access));
}

Result<std::string> GetVehicleCardHistory(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 1));
  CC_ASSIGN_OR_RETURN(
      Loaded l, Authorize(ctx, Operation::kGetVehicleCardHistory, ctx.args()[0]));
  return Canonical(HistoryJson(ctx, l.classic));
}

Result<std::string> ListClassicsForUser(TxContext& ctx) {
  CC_RETURN_IF_ERROR(ExpectArgs(ctx, 1));
  const std::string& user_id = ctx.args()[0];
  CC_ASSIGN_OR_RETURN(Caller caller, ResolveCaller(ctx));
  if (caller.user_id != user_id) {
    return Error(ErrorCode::kAuthDenied, "users may only list their own classics");
  }
  Json list = Json::array();
  for (const auto& [key, raw] : ctx.GetStateByPrefix(std::string(kClassicPrefix))) {
    auto classic = Decode<Classic>(raw, "classic");
    if (!classic.ok()) continue;
    std::string role;
    if (classic->owner_user_id == user_id) {
      role = "owner";
    } else if (auto access_raw = ctx.PeekState(AccessKey(classic->vin))) {
      auto access = Decode<Access>(*access_raw, "access");
      if (access.ok()) {
        if (const AccessEntry* e = access->Find(user_id)) {
          role = std::string(AccessLevelName(e->level));
        }
      }
    }
    if (role.empty()) continue;
    list.push_back(Json{{"certified", classic->certified},
                        {"make", classic->make},
                        {"model", classic->model},
                        {"ownerUserId", classic->owner_user_id},
                        {"registrationNumber", classic->registration_number},
                        {"role", role},
                        {"vin", classic->vin},
                        {"year", classic->year}});
  }
  return Canonical(Json{{"classics", list}, {"userId", user_id}});
}

using Handler = Result<std::string> (*)(TxContext&);

const std::map<std::string, Handler, std::less<>>& Handlers() {
  static const auto* handlers = new std::map<std::string, Handler, std::less<>>{
      {fn::kRegisterUser, &RegisterUser},
      {fn::kRegisterClassic, &RegisterClassic},
      {fn::kAddRestorationStep, &AddRestorationStep},
      {fn::kAddDocument, &AddDocument},
      {fn::kCertifyVehicle, &CertifyVehicle},
      {fn::kGrantAccess, &GrantAccess},
      {fn::kRevokeAccess, &RevokeAccess},
      {fn::kTransferOwnership, &TransferOwnership},
      {fn::kAnchorMedia, &AnchorMedia},
      {fn::kGetVehicleCard, &GetVehicleCard},
      {fn::kGetVehicleCardHistory, &GetVehicleCardHistory},
      {fn::kListClassicsForUser, &ListClassicsForUser},
  };
  return *handlers;
}

}  // namespace

bool IsQueryFunction(std::string_view function) {
  return function == fn::kGetVehicleCard ||
         function == fn::kGetVehicleCardHistory ||
         function == fn::kListClassicsForUser;
}

bool ClassicsContract::Knows(const std::string& function) const {
  return Handlers().count(function) != 0;
}

Result<std::string> ClassicsContract::Invoke(TxContext& ctx) const {
  auto it = Handlers().find(ctx.function());
  if (it == Handlers().end()) {
    return Error(ErrorCode::kUnknownFunction, ctx.function());
  }
  try {
    return it->second(ctx);
  } catch (const std::exception& e) {
    return Error(ErrorCode::kInternal, e.what());
  }
}

}  // namespace classicschain::contracts
