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
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "classicschain/common/status.h"
#include "classicschain/identity/identity.h"

struct sqlite3;

namespace classicschain::gateway {

// Off-ledger user directory entry. Personal data lives only here.
struct UserRecord {
  std::string user_id;
  std::string display_name;
  std::string email;
  std::string password_hash;  // Argon2id encoded string
  identity::OrgName org = identity::OrgName::kOwners;
  identity::Role role = identity::Role::kOwner;
  std::string identity_ref;  // "<Org>/<userId>" in the wallet
  std::int64_t created_at = 0;
};

// One SQLite database per peer organization under <dir>/<Org>.db. Emails
// are unique across all of them.
//
//   CREATE TABLE users (user_id TEXT PRIMARY KEY, display_name TEXT,
//     email TEXT UNIQUE COLLATE NOCASE, password_hash TEXT, org TEXT,
//     role TEXT, identity_ref TEXT, created_at INTEGER)
class UserStore {
 public:
  // Empty dir: in-memory databases.
  static Result<std::unique_ptr<UserStore>> Open(const std::filesystem::path& dir);
  ~UserStore();

  // EMAIL_EXISTS if any organization already holds the email.
  Status Insert(const UserRecord& record);
  Status Remove(const std::string& user_id);
  Result<UserRecord> FindByEmail(const std::string& email) const;
  Result<UserRecord> FindById(const std::string& user_id) const;
  std::vector<UserRecord> List() const;

 private:
  UserStore() = default;
  sqlite3* db(identity::OrgName org) const;

  mutable std::mutex mu_;
  std::array<sqlite3*, 3> dbs_{};  // owners, workshops, certifiers
};

}  // namespace classicschain::gateway
