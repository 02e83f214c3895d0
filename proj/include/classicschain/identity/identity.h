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

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/status.h"

namespace classicschain::identity {

enum class OrgName { kOwners, kWorkshops, kCertifiers, kOrderers };

inline constexpr std::array<OrgName, 4> kAllOrgs = {
    OrgName::kOwners, OrgName::kWorkshops, OrgName::kCertifiers,
    OrgName::kOrderers};

std::string_view OrgNameString(OrgName org);
std::optional<OrgName> ParseOrgName(std::string_view name);

enum class Role { kOwner, kRestorer, kCertifier, kOrderer, kCa };

std::string_view RoleName(Role role);
std::optional<Role> ParseRole(std::string_view name);

// The only role an end identity of `org` may hold.
Role RoleForOrg(OrgName org);

// Organizations whose members submit transactions (the peer organizations).
bool IsPeerOrg(OrgName org);

bool IsValidUserId(std::string_view user_id);

// CA-signed binding of (userId, org, attributes, public key). Root
// certificates are self-signed with role "ca".
struct Certificate {
  std::string user_id;
  OrgName org = OrgName::kOwners;
  std::map<std::string, std::string> attributes;  // role, userId[, shopName]
  std::string public_key;                         // 32 raw bytes
  std::string signature;                          // 64 raw bytes

  // Attribute read straight from the certificate; nullopt when absent or
  // unrecognized.
  std::optional<Role> role() const;

  Json ToJson() const;
  static Result<Certificate> FromJson(const Json& json);

  // Canonical bytes covered by the CA signature (everything but signature).
  std::string SigningPayload() const;
  std::string Fingerprint() const;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

// An enrolled participant. `secret_key` is empty for identities known only by
// their certificate.
struct Identity {
  Certificate certificate;
  std::string secret_key;

  const std::string& user_id() const { return certificate.user_id; }
  OrgName org() const { return certificate.org; }
  bool has_key() const { return !secret_key.empty(); }
};

Result<std::string> Sign(const Identity& identity, std::string_view message);

// The four organization roots. Every check here is a pure function of the
// certificate and the roots.
class TrustRoots {
 public:
  TrustRoots() = default;
  explicit TrustRoots(std::vector<Certificate> roots);

  // MALFORMED_CERT unless `cert` is signed by the root of its own org and its
  // attributes are consistent with that org.
  Status VerifyCertificate(const Certificate& cert) const;

  // MALFORMED_CERT for an invalid certificate; otherwise whether `signature`
  // over `message` verifies under the certificate key.
  Result<bool> Verify(const Certificate& cert, std::string_view message,
                      std::string_view signature) const;

  Result<bool> CheckAttribute(const Certificate& cert, Role required) const;

  const std::vector<Certificate>& roots() const { return roots_; }
  const Certificate* RootFor(OrgName org) const;

  Json ToJson() const;
  static Result<TrustRoots> FromJson(const Json& json);

 private:
  std::vector<Certificate> roots_;
};

// Per-organization certificate authorities plus the wallet of enrolled
// identities.
//
// Wallet layout (all files canonical JSON):
//   <wallet>/<Org>/ca.json              {"certificate":{...},"secretKey":hex}
//   <wallet>/<Org>/users/<userId>.json  {"certificate":{...},"secretKey":hex}
class Membership {
 public:
  // Loads the wallet at `wallet_dir`, creating any missing CA. An empty path
  // keeps everything in memory.
  static Result<std::unique_ptr<Membership>> Open(
      const std::filesystem::path& wallet_dir);

  Result<Identity> Enroll(OrgName org, const std::string& user_id, Role role,
                          std::map<std::string, std::string> extra = {});

  Result<Identity> Find(OrgName org, const std::string& user_id) const;
  // Searches every organization.
  Result<Identity> FindUser(const std::string& user_id) const;
  std::vector<Certificate> List(std::optional<OrgName> org = {}) const;

  // Removes a wallet entry (used to roll back a failed registration).
  Status Remove(OrgName org, const std::string& user_id);

  const TrustRoots& roots() const { return roots_; }

 private:
  struct OrgState {
    Identity ca;
    std::map<std::string, Identity> users;
    mutable std::mutex mu;
  };

  Membership() = default;
  Status Persist(OrgName org, const Identity& id, bool is_ca) const;
  OrgState& state(OrgName org) { return *orgs_[static_cast<int>(org)]; }
  const OrgState& state(OrgName org) const {
    return *orgs_[static_cast<int>(org)];
  }

  std::filesystem::path dir_;
  std::array<std::unique_ptr<OrgState>, 4> orgs_;
  TrustRoots roots_;
};

}  // namespace classicschain::identity
