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


#include "classicschain/contracts/assets.h"

#include <algorithm>
#include <array>

#include "classicschain/media/cid.h"

namespace classicschain::contracts {

namespace {

template <typename T>
Result<T> Corrupt(const std::exception& e, std::string_view what) {
  return Error(ErrorCode::kInternal,
               "corrupt " + std::string(what) + " record: " + e.what());
}

Json RefList(const std::vector<MediaRef>& refs) {
  Json out = Json::array();
  for (const auto& r : refs) out.push_back(r.ToJson());
  return out;
}

Result<std::vector<MediaRef>> ParseRefList(const Json& json) {
  std::vector<MediaRef> out;
  for (const auto& item : json) {
    CC_ASSIGN_OR_RETURN(MediaRef ref, MediaRef::FromJson(item));
    out.push_back(std::move(ref));
  }
  return out;
}

constexpr std::array<std::string_view, 3> kLevelNames = {"read", "write",
                                                         "certify"};
constexpr std::array<std::string_view, 7> kActivityNames = {
    "bodywork", "paint", "mechanical", "upholstery",
    "electrical", "inspection", "other"};

}  // namespace

std::string ClassicKey(std::string_view vin) {
  return "classic:" + std::string(vin);
}
std::string StepKey(std::string_view vin, std::string_view step_id) {
  return "step:" + std::string(vin) + ":" + std::string(step_id);
}
std::string AccessKey(std::string_view vin) {
  return "access:" + std::string(vin);
}
std::string AnchorKey(std::string_view vin, std::string_view cid) {
  return "anchor:" + std::string(vin) + ":" + std::string(cid);
}
std::string UserKey(std::string_view user_id) {
  return "user:" + std::string(user_id);
}

bool IsValidVin(std::string_view vin) {
  if (vin.size() < 5 || vin.size() > 17) return false;
  return std::all_of(vin.begin(), vin.end(), [](char c) {
    bool digit = c >= '0' && c <= '9';
    bool upper = c >= 'A' && c <= 'Z' && c != 'I' && c != 'O' && c != 'Q';
    return digit || upper;
  });
}

std::string_view AccessLevelName(AccessLevel level) {
  return kLevelNames[static_cast<int>(level) - 1];
}

std::optional<AccessLevel> ParseAccessLevel(std::string_view name) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == name) return static_cast<AccessLevel>(i + 1);
  }
  return std::nullopt;
}

std::string_view ActivityTypeName(ActivityType type) {
  return kActivityNames[static_cast<int>(type)];
}

std::optional<ActivityType> ParseActivityType(std::string_view name) {
  for (std::size_t i = 0; i < kActivityNames.size(); ++i) {
    if (kActivityNames[i] == name) return static_cast<ActivityType>(i);
  }
  return std::nullopt;
}

std::string_view RefKindName(RefKind kind) {
  return kind == RefKind::kDocument ? "document" : "evidence";
}

std::optional<RefKind> ParseRefKind(std::string_view name) {
  if (name == "document") return RefKind::kDocument;
  if (name == "evidence") return RefKind::kEvidence;
  return std::nullopt;
}

// --- MediaRef -----------------------------------------------------------------

Json MediaRef::ToJson() const {
  return Json{{"addedAt", added_at},
              {"cid", cid},
              {"filename", filename},
              {"mediaType", media_type},
              {"sizeBytes", size_bytes}};
}

Result<MediaRef> MediaRef::FromJson(const Json& j) {
  try {
    MediaRef r;
    r.added_at = j.at("addedAt").get<std::int64_t>();
    r.cid = j.at("cid").get<std::string>();
    r.filename = j.at("filename").get<std::string>();
    r.media_type = j.at("mediaType").get<std::string>();
    r.size_bytes = j.at("sizeBytes").get<std::int64_t>();
    return r;
  } catch (const Json::exception& e) {
    return Corrupt<MediaRef>(e, "media ref");
  }
}

Result<MediaRef> MediaRef::FromInput(const Json& j, std::int64_t now) {
  auto bad = [](std::string why) {
    return Error(ErrorCode::kBadEvidence, std::move(why));
  };
  if (!j.is_object()) return bad("media ref must be an object");
  if (!j.contains("cid") || !j["cid"].is_string() ||
      !media::ContentId::Parse(j["cid"].get<std::string>())) {
    return bad("malformed cid");
  }
  MediaRef r;
  r.cid = j["cid"].get<std::string>();
  r.added_at = now;
  if (j.contains("filename")) {
    if (!j["filename"].is_string()) return bad("filename must be a string");
    r.filename = j["filename"].get<std::string>();
  }
  if (j.contains("mediaType")) {
    if (!j["mediaType"].is_string()) return bad("mediaType must be a string");
    r.media_type = j["mediaType"].get<std::string>();
  }
  if (j.contains("sizeBytes")) {
    if (!j["sizeBytes"].is_number_integer() ||
        j["sizeBytes"].get<std::int64_t>() < 0) {
      return bad("sizeBytes must be a non-negative integer");
    }
    r.size_bytes = j["sizeBytes"].get<std::int64_t>();
  }
  return r;
}

// --- Classic ------------------------------------------------------------------

Json Classic::ToJson() const {
  Json steps = Json::array();
  for (const auto& s : step_ids) steps.push_back(s);
  return Json{{"certified", certified},
              {"certifierUserId", certifier_user_id},
              {"documents", RefList(documents)},
              {"make", make},
              {"model", model},
              {"ownerUserId", owner_user_id},
              {"registeredAt", registered_at},
              {"registeredBy",
               {{"org", registered_by_org}, {"userId", registered_by_user}}},
              {"registrationNumber", registration_number},
              {"revision", revision},
              {"stepIds", steps},
              {"vin", vin},
              {"year", year}};
}

Result<Classic> Classic::FromJson(const Json& j) {
  try {
    Classic c;
    c.certified = j.at("certified").get<bool>();
    c.certifier_user_id = j.at("certifierUserId").get<std::string>();
    CC_ASSIGN_OR_RETURN(c.documents, ParseRefList(j.at("documents")));
    c.make = j.at("make").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.owner_user_id = j.at("ownerUserId").get<std::string>();
    c.registered_at = j.at("registeredAt").get<std::int64_t>();
    c.registered_by_org = j.at("registeredBy").at("org").get<std::string>();
    c.registered_by_user = j.at("registeredBy").at("userId").get<std::string>();
    c.registration_number = j.at("registrationNumber").get<std::string>();
    c.revision = j.at("revision").get<std::int64_t>();
    c.step_ids = j.at("stepIds").get<std::vector<std::string>>();
    c.vin = j.at("vin").get<std::string>();
    c.year = j.at("year").get<std::int64_t>();
    return c;
  } catch (const Json::exception& e) {
    return Corrupt<Classic>(e, "classic");
  }
}

// --- RestorationStep ------------------------------------------------------------

Json RestorationStep::ToJson() const {
  return Json{{"activityType", ActivityTypeName(activity_type)},
              {"createdAt", created_at},
              {"description", description},
              {"evidence", RefList(evidence)},
              {"materials", materials},
              {"performedByUserId", performed_by_user_id},
              {"stepId", step_id},
              {"title", title},
              {"tools", tools},
              {"vin", vin},
              {"workshopOrg", workshop_org}};
}

Result<RestorationStep> RestorationStep::FromJson(const Json& j) {
  try {
    RestorationStep s;
    auto type = ParseActivityType(j.at("activityType").get<std::string>());
    if (!type) return Error(ErrorCode::kInternal, "corrupt step activity");
    s.activity_type = *type;
    s.created_at = j.at("createdAt").get<std::int64_t>();
    s.description = j.at("description").get<std::string>();
    CC_ASSIGN_OR_RETURN(s.evidence, ParseRefList(j.at("evidence")));
    s.materials = j.at("materials").get<std::vector<std::string>>();
    s.performed_by_user_id = j.at("performedByUserId").get<std::string>();
    s.step_id = j.at("stepId").get<std::string>();
    s.title = j.at("title").get<std::string>();
    s.tools = j.at("tools").get<std::vector<std::string>>();
    s.vin = j.at("vin").get<std::string>();
    s.workshop_org = j.at("workshopOrg").get<std::string>();
    return s;
  } catch (const Json::exception& e) {
    return Corrupt<RestorationStep>(e, "step");
  }
}

// --- Access ---------------------------------------------------------------------

const AccessEntry* Access::Find(std::string_view user_id) const {
  for (const auto& e : entries) {
    if (e.grantee_user_id == user_id) return &e;
  }
  return nullptr;
}

void Access::Upsert(AccessEntry entry) {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), entry.grantee_user_id,
      [](const AccessEntry& e, const std::string& id) {
        return e.grantee_user_id < id;
      });
  if (it != entries.end() && it->grantee_user_id == entry.grantee_user_id) {
    *it = std::move(entry);
  } else {
    entries.insert(it, std::move(entry));
  }
}

bool Access::Remove(std::string_view user_id) {
  auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) {
    return e.grantee_user_id == user_id;
  });
  if (it == entries.end()) return false;
  entries.erase(it);
  return true;
}

Json Access::ToJson() const {
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back(Json{{"grantedAt", e.granted_at},
                        {"grantedByUserId", e.granted_by_user_id},
                        {"granteeUserId", e.grantee_user_id},
                        {"level", AccessLevelName(e.level)}});
  }
  return Json{{"entries", list}, {"vin", vin}};
}

Result<Access> Access::FromJson(const Json& j) {
  try {
    Access a;
    a.vin = j.at("vin").get<std::string>();
    for (const auto& item : j.at("entries")) {
      AccessEntry e;
      e.granted_at = item.at("grantedAt").get<std::int64_t>();
      e.granted_by_user_id = item.at("grantedByUserId").get<std::string>();
      e.grantee_user_id = item.at("granteeUserId").get<std::string>();
      auto level = ParseAccessLevel(item.at("level").get<std::string>());
      if (!level) return Error(ErrorCode::kInternal, "corrupt access level");
      e.level = *level;
      a.entries.push_back(std::move(e));
    }
    return a;
  } catch (const Json::exception& e) {
    return Corrupt<Access>(e, "access");
  }
}

// --- AnchorRecord / UserEntry -----------------------------------------------------

Json AnchorRecord::ToJson() const {
  return Json{{"anchoredAt", anchored_at},
              {"anchoredByUserId", anchored_by_user_id},
              {"cid", cid},
              {"refKind", RefKindName(ref_kind)}};
}

Result<AnchorRecord> AnchorRecord::FromJson(const Json& j) {
  try {
    AnchorRecord a;
    a.anchored_at = j.at("anchoredAt").get<std::int64_t>();
    a.anchored_by_user_id = j.at("anchoredByUserId").get<std::string>();
    a.cid = j.at("cid").get<std::string>();
    auto kind = ParseRefKind(j.at("refKind").get<std::string>());
    if (!kind) return Error(ErrorCode::kInternal, "corrupt anchor kind");
    a.ref_kind = *kind;
    return a;
  } catch (const Json::exception& e) {
    return Corrupt<AnchorRecord>(e, "anchor");
  }
}

Json UserEntry::ToJson() const {
  return Json{{"org", org},
              {"publicKey", public_key_hex},
              {"registeredAt", registered_at},
              {"role", role},
              {"userId", user_id}};
}

Result<UserEntry> UserEntry::FromJson(const Json& j) {
  try {
    UserEntry u;
    u.org = j.at("org").get<std::string>();
    u.public_key_hex = j.at("publicKey").get<std::string>();
    u.registered_at = j.at("registeredAt").get<std::int64_t>();
    u.role = j.at("role").get<std::string>();
    u.user_id = j.at("userId").get<std::string>();
    return u;
  } catch (const Json::exception& e) {
    return Corrupt<UserEntry>(e, "user");
  }
}

}  // namespace classicschain::contracts
