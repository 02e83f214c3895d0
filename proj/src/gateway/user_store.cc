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


#include "classicschain/gateway/user_store.h"

#include <sqlite3.h>

namespace classicschain::gateway {

namespace {

using identity::OrgName;

constexpr OrgName kPeerOrgs[] = {OrgName::kOwners, OrgName::kWorkshops,
                                 OrgName::kCertifiers};

constexpr char kSchema[] =
    "CREATE TABLE IF NOT EXISTS users ("
    " user_id TEXT PRIMARY KEY,"
    " display_name TEXT NOT NULL,"
    " email TEXT NOT NULL UNIQUE COLLATE NOCASE,"
    " password_hash TEXT NOT NULL,"
    " org TEXT NOT NULL,"
    " role TEXT NOT NULL,"
    " identity_ref TEXT NOT NULL,"
    " created_at INTEGER NOT NULL);";

constexpr char kColumns[] =
    "user_id, display_name, email, password_hash, org, role, identity_ref, "
    "created_at";

Error SqlError(sqlite3* db, const std::string& what) {
  return Error(ErrorCode::kIoFailure, what + ": " + sqlite3_errmsg(db));
}

// Minimal RAII statement wrapper.
class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) stmt_ = nullptr;
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  bool ok() const { return stmt_ != nullptr; }
  void Bind(int i, const std::string& s) {
    sqlite3_bind_text(stmt_, i, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT);
  }
  void Bind(int i, std::int64_t v) { sqlite3_bind_int64(stmt_, i, v); }
  int Step() { return sqlite3_step(stmt_); }
  std::string Text(int i) const {
    auto* p = sqlite3_column_text(stmt_, i);
    return p ? reinterpret_cast<const char*>(p) : "";
  }
  std::int64_t Int(int i) const { return sqlite3_column_int64(stmt_, i); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

std::optional<UserRecord> RowToRecord(const Stmt& s) {
  UserRecord r;
  r.user_id = s.Text(0);
  r.display_name = s.Text(1);
  r.email = s.Text(2);
  r.password_hash = s.Text(3);
  auto org = identity::ParseOrgName(s.Text(4));
  auto role = identity::ParseRole(s.Text(5));
  if (!org || !role) return std::nullopt;
  r.org = *org;
  r.role = *role;
  r.identity_ref = s.Text(6);
  r.created_at = s.Int(7);
  return r;
}

}  // namespace

Result<std::unique_ptr<UserStore>> UserStore::Open(const std::filesystem::path& dir) {
  std::unique_ptr<UserStore> store(new UserStore());
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    std::string path =
        dir.empty() ? ":memory:"
                    : (dir / (std::string(identity::OrgNameString(kPeerOrgs[i])) + ".db"))
                          .string();
    sqlite3* db = nullptr;
    if (sqlite3_open_v2(path.c_str(), &db,
                        SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
      Error e = SqlError(db, "cannot open " + path);
      sqlite3_close(db);
      return e;
    }
    store->dbs_[i] = db;
    char* err = nullptr;
    if (sqlite3_exec(db, kSchema, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "schema";
      sqlite3_free(err);
      return Error(ErrorCode::kIoFailure, msg);
    }
    sqlite3_exec(db, "PRAGMA journal_mode=WAL;", nullptr, nullptr, nullptr);
  }
  return store;
}

UserStore::~UserStore() {
  for (sqlite3* db : dbs_) sqlite3_close(db);
}

sqlite3* UserStore::db(identity::OrgName org) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (kPeerOrgs[i] == org) return dbs_[i];
  }
  return nullptr;
}

Status UserStore::Insert(const UserRecord& r) {
  std::lock_guard lock(mu_);
  sqlite3* target = db(r.org);
  if (target == nullptr) {
    return Error(ErrorCode::kRoleOrgMismatch, "users belong to a peer organization");
  }
  // Uniqueness across organizations; the UNIQUE constraint covers the
  // target database itself.
  for (sqlite3* other : dbs_) {
    Stmt q(other, "SELECT 1 FROM users WHERE email = ?1 OR user_id = ?2");
    q.Bind(1, r.email);
    q.Bind(2, r.user_id);
    if (q.Step() == SQLITE_ROW) return Error(ErrorCode::kEmailExists, r.email);
  }
  Stmt ins(target,
           "INSERT INTO users (user_id, display_name, email, password_hash, org, "
           "role, identity_ref, created_at) VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)");
  if (!ins.ok()) return SqlError(target, "prepare insert");
  ins.Bind(1, r.user_id);
  ins.Bind(2, r.display_name);
  ins.Bind(3, r.email);
  ins.Bind(4, r.password_hash);
  ins.Bind(5, std::string(identity::OrgNameString(r.org)));
  ins.Bind(6, std::string(identity::RoleName(r.role)));
  ins.Bind(7, r.identity_ref);
  ins.Bind(8, r.created_at);
  int rc = ins.Step();
  if (rc == SQLITE_CONSTRAINT) return Error(ErrorCode::kEmailExists, r.email);
  if (rc != SQLITE_DONE) return SqlError(target, "insert user");
  return Status::Ok();
}

Status UserStore::Remove(const std::string& user_id) {
  std::lock_guard lock(mu_);
  for (sqlite3* d : dbs_) {
    Stmt del(d, "DELETE FROM users WHERE user_id = ?1");
    del.Bind(1, user_id);
    if (del.Step() != SQLITE_DONE) return SqlError(d, "delete user");
  }
  return Status::Ok();
}

Result<UserRecord> UserStore::FindByEmail(const std::string& email) const {
  std::lock_guard lock(mu_);
  std::string sql = std::string("SELECT ") + kColumns + " FROM users WHERE email = ?1";
  for (sqlite3* d : dbs_) {
    Stmt q(d, sql.c_str());
    q.Bind(1, email);
    if (q.Step() == SQLITE_ROW) {
      if (auto r = RowToRecord(q)) return *r;
    }
  }
  return Error(ErrorCode::kNotFound, "no user with that email");
}

Result<UserRecord> UserStore::FindById(const std::string& user_id) const {
  std::lock_guard lock(mu_);
  std::string sql = std::string("SELECT ") + kColumns + " FROM users WHERE user_id = ?1";
  for (sqlite3* d : dbs_) {
    Stmt q(d, sql.c_str());
    q.Bind(1, user_id);
    if (q.Step() == SQLITE_ROW) {
      if (auto r = RowToRecord(q)) return *r;
    }
  }
  return Error(ErrorCode::kUnknownUser, user_id);
}

std::vector<UserRecord> UserStore::List() const {
  std::lock_guard lock(mu_);
  std::vector<UserRecord> out;
  std::string sql = std::string("SELECT ") + kColumns + " FROM users ORDER BY user_id";
  for (sqlite3* d : dbs_) {
    Stmt q(d, sql.c_str());
    while (q.Step() == SQLITE_ROW) {
      if (auto r = RowToRecord(q)) out.push_back(*r);
    }
  }
  return out;
}

}  // namespace classicschain::gateway
