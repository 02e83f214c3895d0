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

#include "classicschain/identity/identity.h"

#include <fstream>
#include <sstream>
#include <system_error>

#include "classicschain/common/crypto.h"

namespace classicschain::identity {

namespace fs = std::filesystem;

std::string_view OrgNameString(OrgName org) {
  switch (org) {
    case OrgName::kOwners: return "OwnersOrg";
    case OrgName::kWorkshops: return "WorkshopsOrg";
    case OrgName::kCertifiers: return "CertifiersOrg";
    case OrgName::kOrderers: return "OrderersOrg";
  }
  return "OwnersOrg";
}

std::optional<OrgName> ParseOrgName(std::string_view name) {
  for (OrgName org : kAllOrgs) {
    if (OrgNameString(org) == name) return org;
  }
  return std::nullopt;
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kOwner: return "owner";
    case Role::kRestorer: return "restorer";
    case Role::kCertifier: return "certifier";
    case Role::kOrderer: return "orderer";
    case Role::kCa: return "ca";
  }
  return "owner";
}

std::optional<Role> ParseRole(std::string_view name) {
  for (Role r : {Role::kOwner, Role::kRestorer, Role::kCertifier,
                 Role::kOrderer, Role::kCa}) {
    if (RoleName(r) == name) return r;
  }
  return std::nullopt;
}

Role RoleForOrg(OrgName org) {
  switch (org) {
    case OrgName::kOwners: return Role::kOwner;
    case OrgName::kWorkshops: return Role::kRestorer;
    case OrgName::kCertifiers: return Role::kCertifier;
    case OrgName::kOrderers: return Role::kOrderer;
  }
  return Role::kOwner;
}

bool IsPeerOrg(OrgName org) { return org != OrgName::kOrderers; }

bool IsValidUserId(std::string_view user_id) {
  if (user_id.empty() || user_id.size() > 64) return false;
  for (char c : user_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return user_id != "." && user_id != "..";
}

// --- Certificate ------------------------------------------------------------

std::optional<Role> Certificate::role() const {
  auto it = attributes.find("role");
  if (it == attributes.end()) return std::nullopt;
  return ParseRole(it->second);
}

Json Certificate::ToJson() const {
  Json attrs = Json::object();
  for (const auto& [k, v] : attributes) attrs[k] = v;
  return Json{{"attributes", attrs},
              {"org", std::string(OrgNameString(org))},
              {"publicKey", crypto::HexEncode(public_key)},
              {"signature", crypto::HexEncode(signature)},
              {"userId", user_id}};
}

Result<Certificate> Certificate::FromJson(const Json& json) {
  auto bad = [](std::string why) {
    return Error(ErrorCode::kMalformedCert, std::move(why));
  };
  if (!json.is_object() || json.size() != 5) return bad("unexpected shape");
  for (const char* key : {"attributes", "org", "publicKey", "signature",
                          "userId"}) {
    if (!json.contains(key)) return bad(std::string("missing ") + key);
  }
  if (!json["attributes"].is_object() || !json["org"].is_string() ||
      !json["publicKey"].is_string() || !json["signature"].is_string() ||
      !json["userId"].is_string()) {
    return bad("wrong field types");
  }
  Certificate cert;
  cert.user_id = json["userId"].get<std::string>();
  auto org = ParseOrgName(json["org"].get<std::string>());
  if (!org) return bad("unknown org");
  cert.org = *org;
  for (const auto& [k, v] : json["attributes"].items()) {
    if (!v.is_string()) return bad("attribute values must be strings");
    cert.attributes[k] = v.get<std::string>();
  }
  auto pk = crypto::HexDecode(json["publicKey"].get<std::string>());
  auto sig = crypto::HexDecode(json["signature"].get<std::string>());
  if (!pk || pk->size() != 32) return bad("bad public key");
  if (!sig || sig->size() != 64) return bad("bad signature encoding");
  cert.public_key = std::move(*pk);
  cert.signature = std::move(*sig);
  return cert;
}

std::string Certificate::SigningPayload() const {
  Json j = ToJson();
  j.erase("signature");
  return Canonical(j);
}

std::string Certificate::Fingerprint() const {
  return crypto::Sha256Hex(Canonical(ToJson()));
}

Result<std::string> Sign(const Identity& identity, std::string_view message) {
  if (!identity.has_key()) {
    return Error(ErrorCode::kUnknownKey,
                 "no private key for " + identity.user_id());
  }
  auto sig = crypto::Ed25519Sign(identity.secret_key, message);
  if (!sig) return Error(ErrorCode::kUnknownKey, "unusable private key");
  return *sig;
}

// --- TrustRoots -------------------------------------------------------------

TrustRoots::TrustRoots(std::vector<Certificate> roots)
    : roots_(std::move(roots)) {}

const Certificate* TrustRoots::RootFor(OrgName org) const {
  for (const auto& r : roots_) {
    if (r.org == org) return &r;
  }
  return nullptr;
}

Status TrustRoots::VerifyCertificate(const Certificate& cert) const {
  const Certificate* root = RootFor(cert.org);
  if (root == nullptr) {
    return Error(ErrorCode::kMalformedCert, "no trust root for org");
  }
  auto uid = cert.attributes.find("userId");
  if (uid == cert.attributes.end() || uid->second != cert.user_id) {
    return Error(ErrorCode::kMalformedCert, "userId attribute mismatch");
  }
  auto role = cert.role();
  if (!role) return Error(ErrorCode::kMalformedCert, "missing role attribute");
  if (*role == Role::kCa) {
    if (!(cert == *root)) {
      return Error(ErrorCode::kMalformedCert, "not the org root");
    }
  } else if (*role != RoleForOrg(cert.org)) {
    return Error(ErrorCode::kMalformedCert, "role inconsistent with org");
  }
  if (!crypto::Ed25519Verify(root->public_key, cert.SigningPayload(),
                             cert.signature)) {
    return Error(ErrorCode::kMalformedCert,
                 "certificate signature does not verify under " +
                     std::string(OrgNameString(cert.org)) + " CA");
  }
  return Status::Ok();
}

Result<bool> TrustRoots::Verify(const Certificate& cert,
                                std::string_view message,
                                std::string_view signature) const {
  CC_RETURN_IF_ERROR(VerifyCertificate(cert));
  return crypto::Ed25519Verify(cert.public_key, message, signature);
}

Result<bool> TrustRoots::CheckAttribute(const Certificate& cert,
                                        Role required) const {
  CC_RETURN_IF_ERROR(VerifyCertificate(cert));
  return cert.role() == required;
}

Json TrustRoots::ToJson() const {
  Json arr = Json::array();
  for (const auto& r : roots_) arr.push_back(r.ToJson());
  return arr;
}

Result<TrustRoots> TrustRoots::FromJson(const Json& json) {
  if (!json.is_array()) return Error(ErrorCode::kMalformedCert, "roots");
  std::vector<Certificate> roots;
  for (const auto& item : json) {
    CC_ASSIGN_OR_RETURN(Certificate c, Certificate::FromJson(item));
    if (c.role() != Role::kCa ||
        !crypto::Ed25519Verify(c.public_key, c.SigningPayload(),
                               c.signature)) {
      return Error(ErrorCode::kMalformedCert, "root is not self-signed");
    }
    roots.push_back(std::move(c));
  }
  return TrustRoots(std::move(roots));
}

// --- Membership -------------------------------------------------------------

namespace {

Json IdentityFile(const Identity& id) {
  return Json{{"certificate", id.certificate.ToJson()},
              {"secretKey", crypto::HexEncode(id.secret_key)}};
}

Result<Identity> ReadIdentityFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  CC_ASSIGN_OR_RETURN(Json j, ParseCanonical(ss.str()));
  if (!j.is_object() || !j.contains("certificate") ||
      !j.contains("secretKey") || !j["secretKey"].is_string()) {
    return Error(ErrorCode::kMalformedCert, "bad wallet file " + path.string());
  }
  Identity id;
  CC_ASSIGN_OR_RETURN(id.certificate, Certificate::FromJson(j["certificate"]));
  auto sk = crypto::HexDecode(j["secretKey"].get<std::string>());
  if (!sk) return Error(ErrorCode::kMalformedCert, "bad secret key");
  id.secret_key = std::move(*sk);
  return id;
}

Identity MakeCa(OrgName org) {
  auto kp = crypto::GenerateKeyPair();
  Identity ca;
  ca.certificate.user_id = "ca";
  ca.certificate.org = org;
  ca.certificate.attributes = {{"role", "ca"}, {"userId", "ca"}};
  ca.certificate.public_key = kp.public_key;
  ca.secret_key = kp.secret_key;
  ca.certificate.signature =
      *crypto::Ed25519Sign(kp.secret_key, ca.certificate.SigningPayload());
  return ca;
}

}  // namespace

Result<std::unique_ptr<Membership>> Membership::Open(
    const fs::path& wallet_dir) {
  crypto::Init();
  std::unique_ptr<Membership> m(new Membership());
  m->dir_ = wallet_dir;
  std::vector<Certificate> roots;
  for (OrgName org : kAllOrgs) {
    auto st = std::make_unique<OrgState>();
    const std::string org_name(OrgNameString(org));
    bool loaded = false;
    if (!wallet_dir.empty()) {
      std::error_code ec;
      fs::create_directories(wallet_dir / org_name / "users", ec);
      if (ec) return Error(ErrorCode::kIoFailure, ec.message());
      fs::path ca_path = wallet_dir / org_name / "ca.json";
      if (fs::exists(ca_path)) {
        CC_ASSIGN_OR_RETURN(st->ca, ReadIdentityFile(ca_path));
        loaded = true;
      }
      for (const auto& entry :
           fs::directory_iterator(wallet_dir / org_name / "users")) {
        if (entry.path().extension() != ".json") continue;
        CC_ASSIGN_OR_RETURN(Identity id, ReadIdentityFile(entry.path()));
        st->users.emplace(id.user_id(), std::move(id));
      }
    }
    if (!loaded) st->ca = MakeCa(org);
    roots.push_back(st->ca.certificate);
    m->orgs_[static_cast<int>(org)] = std::move(st);
    if (!loaded && !wallet_dir.empty()) {
      CC_RETURN_IF_ERROR(m->Persist(org, m->state(org).ca, /*is_ca=*/true));
    }
  }
  m->roots_ = TrustRoots(std::move(roots));
  for (OrgName org : kAllOrgs) {
    for (const auto& [uid, id] : m->state(org).users) {
      CC_RETURN_IF_ERROR(m->roots_.VerifyCertificate(id.certificate));
    }
  }
  return m;
}

Status Membership::Persist(OrgName org, const Identity& id, bool is_ca) const {
  if (dir_.empty()) return Status::Ok();
  const fs::path base = dir_ / std::string(OrgNameString(org));
  const fs::path path =
      is_ca ? base / "ca.json" : base / "users" / (id.user_id() + ".json");
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    out << Canonical(IdentityFile(id));
    if (!out) return Error(ErrorCode::kIoFailure, "write failed");
  }
  std::error_code ec;
  fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, ec);
  fs::rename(tmp, path, ec);
  if (ec) return Error(ErrorCode::kIoFailure, ec.message());
  return Status::Ok();
}

Result<Identity> Membership::Enroll(OrgName org, const std::string& user_id,
                                    Role role,
                                    std::map<std::string, std::string> extra) {
  if (!IsValidUserId(user_id) || user_id == "ca") {
    return Error(ErrorCode::kInvalidArgument, "invalid userId");
  }
  if (role != RoleForOrg(org)) {
    return Error(ErrorCode::kRoleOrgMismatch,
                 std::string(RoleName(role)) + " cannot enroll in " +
                     std::string(OrgNameString(org)));
  }
  OrgState& st = state(org);
  std::lock_guard<std::mutex> lock(st.mu);
  if (st.users.count(user_id) != 0) {
    return Error(ErrorCode::kDuplicateUser, user_id + " already enrolled");
  }
  auto kp = crypto::GenerateKeyPair();
  Identity id;
  id.certificate.user_id = user_id;
  id.certificate.org = org;
  id.certificate.attributes = std::move(extra);
  id.certificate.attributes["role"] = std::string(RoleName(role));
  id.certificate.attributes["userId"] = user_id;
  id.certificate.public_key = kp.public_key;
  id.certificate.signature =
      *crypto::Ed25519Sign(st.ca.secret_key, id.certificate.SigningPayload());
  id.secret_key = kp.secret_key;
  CC_RETURN_IF_ERROR(Persist(org, id, /*is_ca=*/false));
  st.users.emplace(user_id, id);
  return id;
}

Result<Identity> Membership::Find(OrgName org,
                                  const std::string& user_id) const {
  const OrgState& st = state(org);
  std::lock_guard<std::mutex> lock(st.mu);
  auto it = st.users.find(user_id);
  if (it == st.users.end()) {
    return Error(ErrorCode::kUnknownUser, user_id + " not enrolled in " +
                                              std::string(OrgNameString(org)));
  }
  return it->second;
}

Result<Identity> Membership::FindUser(const std::string& user_id) const {
  for (OrgName org : kAllOrgs) {
    auto r = Find(org, user_id);
    if (r.ok()) return r;
  }
  return Error(ErrorCode::kUnknownUser, user_id + " not enrolled");
}

std::vector<Certificate> Membership::List(std::optional<OrgName> org) const {
  std::vector<Certificate> out;
  for (OrgName o : kAllOrgs) {
    if (org && *org != o) continue;
    const OrgState& st = state(o);
    std::lock_guard<std::mutex> lock(st.mu);
    for (const auto& [uid, id] : st.users) out.push_back(id.certificate);
  }
  return out;
}

Status Membership::Remove(OrgName org, const std::string& user_id) {
  OrgState& st = state(org);
  std::lock_guard<std::mutex> lock(st.mu);
  if (st.users.erase(user_id) == 0) {
    return Error(ErrorCode::kUnknownUser, user_id);
  }
  if (!dir_.empty()) {
    std::error_code ec;
    fs::remove(dir_ / std::string(OrgNameString(org)) / "users" /
                   (user_id + ".json"),
               ec);
  }
  return Status::Ok();
}

}  // namespace classicschain::identity
