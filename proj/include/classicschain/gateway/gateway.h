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

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/common/ulid.h"
#include "classicschain/gateway/config.h"
#include "classicschain/gateway/notifier.h"
#include "classicschain/gateway/token.h"
#include "classicschain/gateway/user_store.h"
#include "classicschain/identity/identity.h"
#include "classicschain/ledger/ledger.h"
#include "classicschain/media/anchor_queue.h"
#include "classicschain/media/media_store.h"

namespace classicschain::gateway {

// HTTP status for every engine error code. Total: each code has exactly one
// mapping.
int HttpStatusFor(ErrorCode code);
// Transient failures a client may retry unchanged.
bool IsRetryable(ErrorCode code);
// {"error": {"code", "message", "retryable"}}
Json ErrorBody(const Error& error);

struct ApiResponse {
  int status = 200;
  Json body = Json::object();
};
ApiResponse ErrorResponse(const Error& error);

// A media file already written to the store.
struct StoredFile {
  media::ContentId cid;
  std::string filename;
  std::string media_type;
  std::uint64_t size = 0;
};

// Test seams.
struct GatewayHooks {
  // Runs between the user record insert and identity enrollment; an error
  // aborts the registration.
  std::function<Status(const UserRecord&)> before_enroll;
  std::shared_ptr<Clock> clock;
};

// The application layer behind the REST routes. Each method is one route:
// it authorizes through the session claims, calls the contract and maps the
// outcome to a status and JSON body. Write routes return after the ledger
// commit and carry the txId.
//
// Data layout under dataDir:
//   ledger/blocks.dat   wallet/   users/<Org>.db   media/   tmp/
//   anchors/jobs.jsonl  events/events.jsonl events/deliveries.jsonl
//   token.key
class Gateway {
 public:
  static Result<std::unique_ptr<Gateway>> Open(GatewayConfig config,
                                               GatewayHooks hooks = {});
  ~Gateway();

  // POST /users
  ApiResponse RegisterUser(const Json& body);
  // POST /auth/login
  ApiResponse Login(const Json& body);
  // Bearer token from an Authorization header value.
  Result<SessionClaims> Authenticate(const std::string& authorization) const;

  // GET /users/{id}/classics
  ApiResponse ListClassics(const SessionClaims& who, const std::string& user_id);
  // GET /users/{id}/events
  ApiResponse ListEvents(const SessionClaims& who, const std::string& user_id);
  // POST /classics
  ApiResponse RegisterClassic(const SessionClaims& who, const Json& body);
  // POST /classics/{vin}/restorations
  ApiResponse AddRestoration(const SessionClaims& who, const std::string& vin,
                             const Json& metadata, const std::vector<StoredFile>& files);
  // POST /classics/{vin}/documents
  ApiResponse AddDocument(const SessionClaims& who, const std::string& vin,
                          const std::vector<StoredFile>& files);
  // GET /classics/{vin}/card
  ApiResponse GetCard(const SessionClaims& who, const std::string& vin);
  // GET /classics/{vin}/history
  ApiResponse GetHistory(const SessionClaims& who, const std::string& vin);
  // POST /classics/{vin}/access
  ApiResponse GrantAccess(const SessionClaims& who, const std::string& vin,
                          const Json& body);
  // DELETE /classics/{vin}/access/{userId}
  ApiResponse RevokeAccess(const SessionClaims& who, const std::string& vin,
                           const std::string& user_id);
  // POST /classics/{vin}/owner
  ApiResponse TransferOwnership(const SessionClaims& who, const std::string& vin,
                                const Json& body);
  // POST /classics/{vin}/certify
  ApiResponse Certify(const SessionClaims& who, const std::string& vin);
  // GET /classics/{vin}/media/{cid}: bytes of a file referenced by the card.
  Result<std::string> GetMedia(const SessionClaims& who, const std::string& vin,
                               const std::string& cid);
  // GET /anchors/{jobId} (the uploader only)
  ApiResponse GetAnchorJob(const SessionClaims& who, const std::string& job_id);
  // GET /health
  ApiResponse Health() const;

  const GatewayConfig& config() const { return config_; }
  ledger::Ledger& ledger() { return *ledger_; }
  media::MediaStore& media() { return *media_; }
  media::AnchorQueue& anchors() { return *anchors_; }
  UserStore& users() { return *users_; }
  Notifier& notifier() { return *notifier_; }
  identity::Membership& membership() { return *membership_; }
  const TokenSigner& tokens() const { return *tokens_; }

  void Close();

 private:
  Gateway() = default;
  Result<identity::Identity> CallerIdentity(const SessionClaims& who) const;
  // Submits with up to mvcc_retries re-simulations after MVCC_CONFLICT.
  Result<ledger::SubmitResult> Submit(const identity::Identity& caller,
                                      const std::string& function,
                                      std::vector<std::string> args);
  ApiResponse Query(const SessionClaims& who, const std::string& function,
                    std::vector<std::string> args);
  // Sync mode: the per-file remote cost and anchoring transaction before the
  // referencing transaction is submitted.
  Status AnchorNow(const identity::Identity& caller, const std::string& vin,
                   contracts::RefKind kind, const std::vector<StoredFile>& files);
  Status AnchorJob(const media::AnchorJob& job);
  void OnBlock(const ledger::Block& block);

  GatewayConfig config_;
  GatewayHooks hooks_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<identity::Membership> membership_;
  std::unique_ptr<ledger::Ledger> ledger_;
  std::unique_ptr<media::MediaStore> media_;
  std::unique_ptr<media::AnchorQueue> anchors_;
  std::unique_ptr<UserStore> users_;
  std::unique_ptr<Notifier> notifier_;
  std::unique_ptr<TokenSigner> tokens_;
  std::string dummy_hash_;  // equalizes login timing for unknown emails
  mutable UlidGenerator ulids_;
  std::atomic<bool> closed_{false};
};

}  // namespace classicschain::gateway
