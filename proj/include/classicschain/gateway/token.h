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
#include <memory>
#include <string>

#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/identity/identity.h"

namespace classicschain::gateway {

struct SessionClaims {
  std::string user_id;
  identity::OrgName org = identity::OrgName::kOwners;
  identity::Role role = identity::Role::kOwner;
  std::int64_t issued_at = 0;   // seconds since the epoch
  std::int64_t expires_at = 0;  // seconds since the epoch
};

// JWT-shaped session tokens: base64url(header).base64url(claims).
// base64url(HMAC-SHA256). Header {"alg":"HS256","typ":"JWT"}; claims
// {exp, iat, org, role, sub}.
class TokenSigner {
 public:
  TokenSigner(std::string key, std::int64_t ttl_seconds,
              std::shared_ptr<Clock> clock = DefaultClock());

  std::string Issue(const std::string& user_id, identity::OrgName org,
                    identity::Role role) const;
  // TOKEN_INVALID for a malformed or forged token, TOKEN_EXPIRED once
  // exp has passed.
  Result<SessionClaims> Verify(const std::string& token) const;

 private:
  std::string key_;
  std::int64_t ttl_seconds_;
  std::shared_ptr<Clock> clock_;
};

}  // namespace classicschain::gateway
