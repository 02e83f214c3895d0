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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/status.h"

// On-ledger records of the vehicle contract and their world-state keys:
//   classic:<vin>            Classic
//   step:<vin>:<stepId>      RestorationStep
//   access:<vin>             Access
//   anchor:<vin>:<cid>       AnchorRecord
//   user:<userId>            UserEntry (certificate binding only, no PII)
namespace classicschain::contracts {

std::string ClassicKey(std::string_view vin);
std::string StepKey(std::string_view vin, std::string_view step_id);
std::string AccessKey(std::string_view vin);
std::string AnchorKey(std::string_view vin, std::string_view cid);
std::string UserKey(std::string_view user_id);
inline constexpr std::string_view kClassicPrefix = "classic:";

// 5-17 characters from 0-9 and A-Z except I, O and Q.
bool IsValidVin(std::string_view vin);

enum class AccessLevel { kRead = 1, kWrite = 2, kCertify = 3 };
std::string_view AccessLevelName(AccessLevel level);
std::optional<AccessLevel> ParseAccessLevel(std::string_view name);

enum class ActivityType {
  kBodywork,
  kPaint,
  kMechanical,
  kUpholstery,
  kElectrical,
  kInspection,
  kOther,
};
std::string_view ActivityTypeName(ActivityType type);
std::optional<ActivityType> ParseActivityType(std::string_view name);

enum class RefKind { kDocument, kEvidence };
std::string_view RefKindName(RefKind kind);
std::optional<RefKind> ParseRefKind(std::string_view name);

// A media file referenced from a document list or a restoration step.
// Anchor state is not stored here; it is derived from anchor records.
struct MediaRef {
  std::string cid;
  std::string filename;
  std::string media_type;
  std::int64_t size_bytes = 0;
  std::int64_t added_at = 0;

  Json ToJson() const;
  static Result<MediaRef> FromJson(const Json& json);
  // Client-supplied form: {cid, filename, mediaType, sizeBytes}. Fails with
  // BAD_EVIDENCE on a malformed ref.
  static Result<MediaRef> FromInput(const Json& json, std::int64_t now);
};

struct Classic {
  std::string vin;
  std::string registration_number;
  std::string make;
  std::string model;
  std::int64_t year = 0;
  std::string owner_user_id;
  bool certified = false;
  std::string certifier_user_id;  // set while certified
  std::vector<MediaRef> documents;
  std::vector<std::string> step_ids;
  std::string registered_by_org;
  std::string registered_by_user;
  std::int64_t registered_at = 0;
  // Incremented by every transaction on the vehicle.
  std::int64_t revision = 0;

  Json ToJson() const;
  static Result<Classic> FromJson(const Json& json);
};

struct RestorationStep {
  std::string step_id;
  std::string vin;
  std::string title;
  ActivityType activity_type = ActivityType::kOther;
  std::string description;
  std::vector<std::string> materials;
  std::vector<std::string> tools;
  std::string performed_by_user_id;
  std::string workshop_org;
  std::vector<MediaRef> evidence;
  std::int64_t created_at = 0;

  Json ToJson() const;
  static Result<RestorationStep> FromJson(const Json& json);
};

struct AccessEntry {
  std::string grantee_user_id;
  AccessLevel level = AccessLevel::kRead;
  std::string granted_by_user_id;
  std::int64_t granted_at = 0;
};

struct Access {
  std::string vin;
  std::vector<AccessEntry> entries;  // ordered by grantee

  const AccessEntry* Find(std::string_view user_id) const;
  void Upsert(AccessEntry entry);
  bool Remove(std::string_view user_id);

  Json ToJson() const;
  static Result<Access> FromJson(const Json& json);
};

struct AnchorRecord {
  std::string cid;
  RefKind ref_kind = RefKind::kEvidence;
  std::string anchored_by_user_id;
  std::int64_t anchored_at = 0;

  Json ToJson() const;
  static Result<AnchorRecord> FromJson(const Json& json);
};

struct UserEntry {
  std::string user_id;
  std::string org;
  std::string role;
  std::string public_key_hex;
  std::int64_t registered_at = 0;

  Json ToJson() const;
  static Result<UserEntry> FromJson(const Json& json);
};

}  // namespace classicschain::contracts
