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


#include "classicschain/gateway/token.h"

#include "classicschain/common/canonical.h"
#include "classicschain/common/crypto.h"

namespace classicschain::gateway {

namespace {

const std::string& HeaderSegment() {
  static const std::string* h = new std::string(
      crypto::Base64UrlEncode(R"({"alg":"HS256","typ":"JWT"})"));
  return *h;
}

}  // namespace

TokenSigner::TokenSigner(std::string key, std::int64_t ttl_seconds,
                         std::shared_ptr<Clock> clock)
    : key_(std::move(key)), ttl_seconds_(ttl_seconds), clock_(std::move(clock)) {}

std::string TokenSigner::Issue(const std::string& user_id, identity::OrgName org,
                               identity::Role role) const {
  std::int64_t now = clock_->WallMillis() / 1000;
  Json claims = {{"exp", now + ttl_seconds_},
                 {"iat", now},
                 {"org", identity::OrgNameString(org)},
                 {"role", identity::RoleName(role)},
                 {"sub", user_id}};
  std::string body = HeaderSegment() + "." + crypto::Base64UrlEncode(Canonical(claims));
  return body + "." + crypto::Base64UrlEncode(crypto::HmacSha256(key_, body));
}

Result<SessionClaims> TokenSigner::Verify(const std::string& token) const {
  auto invalid = [] { return Error(ErrorCode::kTokenInvalid, "invalid session token"); };
  auto first = token.find('.');
  auto second = token.find('.', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) return invalid();
  std::string body = token.substr(0, second);
  auto mac = crypto::Base64UrlDecode(token.substr(second + 1));
  if (!mac || !crypto::ConstantTimeEquals(*mac, crypto::HmacSha256(key_, body))) {
    return invalid();
  }
  if (token.substr(0, first) != HeaderSegment()) return invalid();
  auto raw = crypto::Base64UrlDecode(token.substr(first + 1, second - first - 1));
  if (!raw) return invalid();
  auto claims = ParseJson(*raw);
  if (!claims.ok() || !claims->is_object()) return invalid();
  try {
    SessionClaims c;
    c.user_id = claims->at("sub").get<std::string>();
    auto org = identity::ParseOrgName(claims->at("org").get<std::string>());
    auto role = identity::ParseRole(claims->at("role").get<std::string>());
    if (!org || !role) return invalid();
    c.org = *org;
    c.role = *role;
    c.issued_at = claims->at("iat").get<std::int64_t>();
    c.expires_at = claims->at("exp").get<std::int64_t>();
    if (clock_->WallMillis() / 1000 >= c.expires_at) {
      return Error(ErrorCode::kTokenExpired, "session token expired");
    }
    return c;
  } catch (const Json::exception&) {
    return invalid();
  }
}

}  // namespace classicschain::gateway
