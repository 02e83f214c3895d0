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
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "classicschain/bench/report.h"
#include "classicschain/common/ulid.h"
#include "classicschain/gateway/client.h"
#include "classicschain/gateway/gateway.h"
#include "classicschain/gateway/server.h"
#include "classicschain/identity/identity.h"
#include "classicschain/ledger/ledger.h"

namespace classicschain::bench {

// Receives "OK" or an error code name. May run on any thread.
using Completion = std::function<void(std::string status)>;

// A system under load. Prepare seeds vehicles and identities once;
// Execute starts one operation and is safe to call concurrently.
class Target {
 public:
  virtual ~Target() = default;
  virtual Status Prepare(const WorkloadSpec& spec) = 0;
  virtual void Execute(const std::string& op, std::uint64_t seq, Completion done) = 0;
  // Whether Execute returns before the operation completes.
  virtual bool asynchronous() const = 0;
};

// Direct contract invocations against an in-process ledger: queries go to
// evaluateQuery, writes are submitted without waiting (open loop).
class LedgerTarget final : public Target {
 public:
  // Opens a ledger in `data_dir` (empty: memory) configured from the spec.
  static Result<std::unique_ptr<LedgerTarget>> Open(const WorkloadSpec& spec,
                                                    const std::filesystem::path& data_dir = {});
  ~LedgerTarget() override;

  Status Prepare(const WorkloadSpec& spec) override;
  void Execute(const std::string& op, std::uint64_t seq, Completion done) override;
  bool asynchronous() const override { return true; }
  ledger::Ledger& ledger() { return *ledger_; }

 private:
  LedgerTarget() = default;
  std::string Vin(std::uint64_t seq) const;

  std::shared_ptr<identity::Membership> membership_;
  std::unique_ptr<ledger::Ledger> ledger_;
  identity::Identity owner_;
  identity::Identity shop_;
  std::vector<std::string> vins_;
  std::string salt_;
  std::mutex ulid_mu_;
  UlidGenerator ulids_;
  std::atomic<std::uint64_t> write_seq_{0};
  bool prepared_ = false;
};

// The REST routes of a running gateway.
class RestTarget final : public Target {
 public:
  RestTarget(std::string host, int port, bool tls);
  ~RestTarget() override;

  Status Prepare(const WorkloadSpec& spec) override;
  void Execute(const std::string& op, std::uint64_t seq, Completion done) override;
  bool asynchronous() const override { return false; }
  // Evidence files attached to each "step" request.
  void set_files_per_request(int n) { files_per_request_ = n; }

 private:
  enum class As { kOwner, kShop };
  gateway::ApiClient& ClientFor(As who);
  static std::string StatusOf(const gateway::ClientResponse& r, int expected);

  std::string host_;
  int port_;
  bool tls_;
  std::string owner_token_;
  std::string shop_token_;
  std::string owner_id_;
  std::vector<std::string> vins_;
  std::string salt_;
  int files_per_request_ = 0;
  std::size_t file_bytes_ = 0;
  std::mutex mu_;
  std::map<std::thread::id, std::unique_ptr<gateway::ApiClient>> clients_;
  std::atomic<std::uint64_t> write_seq_{0};
  bool prepared_ = false;
};

// A test-mode gateway with its HTTP server, for REST runs on one host.
class EmbeddedGateway {
 public:
  EmbeddedGateway() = default;
  static Result<std::unique_ptr<EmbeddedGateway>> Start(gateway::GatewayConfig config);
  ~EmbeddedGateway();
  int port() const { return server_->port(); }
  gateway::Gateway& gateway() { return *gateway_; }
  void Stop();

 private:
  std::unique_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<gateway::ApiServer> server_;
};

// Gateway settings for embedded benchmark runs. The HTTP server needs one
// thread per concurrent client connection, so size `threads` to the
// harness's worker count.
gateway::GatewayConfig BenchGatewayConfig(const std::filesystem::path& data_dir,
                                          int client_workers = 64);

}  // namespace classicschain::bench
