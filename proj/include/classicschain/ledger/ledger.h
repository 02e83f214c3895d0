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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/identity/identity.h"
#include "classicschain/ledger/block_cutter.h"
#include "classicschain/ledger/block_store.h"
#include "classicschain/ledger/raft_cluster.h"
#include "classicschain/ledger/types.h"
#include "classicschain/ledger/world_state.h"

namespace classicschain::ledger {

// Decides whether a transaction is endorsed. The default accepts any
// transaction submitted by a member of a peer organization.
using EndorsementPolicy = std::function<Status(const LedgerTransaction&)>;
Status DefaultEndorsementPolicy(const LedgerTransaction& tx);

struct LedgerConfig {
  // Holds blocks.dat. Empty: blocks are kept in memory only.
  std::filesystem::path data_dir;
  std::size_t max_messages_per_block = 10;
  Millis batch_timeout{500};
  bool fsync = true;
  raft::ClusterConfig ordering;
  // Batches proposed to the ordering cluster but not yet committed.
  std::size_t max_inflight_batches = 4;
  // Upper bound on how long SubmitTransaction waits for the commit.
  Millis commit_timeout{30000};
  EndorsementPolicy endorsement_policy;
  std::shared_ptr<Clock> clock;
};

struct SubmitResult {
  std::string tx_id;
  std::string response;  // bytes returned by the contract function
  std::uint64_t block = 0;
  std::uint64_t tx_index = 0;
};

// A simulated and signed transaction that has not been submitted yet.
struct PreparedTransaction {
  LedgerTransaction tx;
  std::string response;
};

using SubmitCallback = std::function<void(Result<SubmitResult>)>;
using BlockListener = std::function<void(const Block&)>;

// One channel: simulation against snapshots, a batching ordering service
// backed by the Raft cluster, and a single serialized commit pipeline that
// validates, persists and applies each block.
class Ledger {
 public:
  static Result<std::unique_ptr<Ledger>> Open(
      LedgerConfig config, std::shared_ptr<identity::Membership> membership,
      std::shared_ptr<const Chaincode> chaincode);
  ~Ledger();

  // Simulates, signs, orders and commits; returns once the transaction's
  // block is committed. Fails with the contract error, MVCC_CONFLICT,
  // BAD_SIGNATURE, ENDORSEMENT_FAIL or ORDERING_UNAVAILABLE.
  Result<SubmitResult> SubmitTransaction(const identity::Identity& caller,
                                         const std::string& function,
                                         std::vector<std::string> args);
  // As SubmitTransaction; `done` runs on the commit pipeline thread (or
  // inline for simulation failures).
  void SubmitAsync(const identity::Identity& caller,
                   const std::string& function, std::vector<std::string> args,
                   SubmitCallback done);

  // Runs a contract function against a snapshot; nothing is ordered.
  Result<std::string> EvaluateQuery(const identity::Identity& caller,
                                    const std::string& function,
                                    std::vector<std::string> args) const;

  // Simulation and signing only. Useful to stage racing transactions.
  Result<PreparedTransaction> Simulate(const identity::Identity& caller,
                                       const std::string& function,
                                       std::vector<std::string> args,
                                       std::optional<std::int64_t> timestamp =
                                           std::nullopt) const;
  void SubmitPreparedAsync(PreparedTransaction prepared, SubmitCallback done);
  Result<SubmitResult> SubmitPrepared(PreparedTransaction prepared);

  std::vector<HistoryRecord> GetHistoryForKey(const std::string& key) const;
  std::optional<StateValue> GetState(const std::string& key) const;
  VersionedStore::Snapshot Snapshot() const { return state_.TakeSnapshot(); }

  // Number of blocks including genesis.
  std::uint64_t Height() const;
  Result<Block> GetBlock(std::uint64_t number) const;
  ChainReport VerifyChain() const;

  // Listeners run on the commit pipeline thread after a block is applied and
  // before the submitters of its transactions are completed.
  std::uint64_t AddBlockListener(BlockListener listener);
  void RemoveBlockListener(std::uint64_t id);

  raft::RaftCluster& ordering() { return *cluster_; }
  const identity::TrustRoots& roots() const { return membership_->roots(); }
  const identity::Membership& membership() const { return *membership_; }
  const LedgerConfig& config() const { return config_; }
  std::filesystem::path block_file() const { return store_->path(); }

  // Stops ordering; pending submissions fail with ORDERING_UNAVAILABLE.
  void Close();

 private:
  struct Waiter {
    SubmitCallback done;
  };

  Ledger() = default;
  Status Bootstrap();
  Block MakeGenesis() const;
  void CutterLoop();
  void ProposeBatch(std::vector<LedgerTransaction> batch);
  void FailBatch(const std::vector<std::string>& tx_ids, const Error& error);
  void OnCommitted(const std::string& data);
  ValidationCode Validate(const LedgerTransaction& tx,
                          const StateReader& state,
                          const std::set<std::string>& block_writes,
                          const std::unordered_set<std::string>& block_tx_ids);
  Result<const identity::Identity*> OrdererIdentity(raft::NodeId node) const;

  LedgerConfig config_;
  std::shared_ptr<identity::Membership> membership_;
  std::shared_ptr<const Chaincode> chaincode_;
  std::unique_ptr<BlockStore> store_;
  VersionedStore state_;
  std::unique_ptr<raft::RaftCluster> cluster_;
  std::map<raft::NodeId, identity::Identity> orderers_;

  // Commit pipeline state. Serialized by commit_mu_.
  mutable std::mutex commit_mu_;
  std::string last_header_digest_;
  std::unordered_set<std::string> committed_tx_ids_;
  std::unordered_set<std::string> verified_certs_;

  // Ordering service.
  std::mutex cut_mu_;
  std::condition_variable cut_cv_;
  std::unique_ptr<BlockCutter> cutter_;
  std::deque<std::vector<LedgerTransaction>> ready_;
  std::size_t inflight_ = 0;
  bool stopping_ = false;
  std::thread cutter_thread_;

  std::mutex waiters_mu_;
  std::multimap<std::string, Waiter> waiters_;

  mutable std::mutex listeners_mu_;
  std::map<std::uint64_t, BlockListener> listeners_;
  std::uint64_t next_listener_ = 1;

  std::atomic<bool> closed_{false};
};

}  // namespace classicschain::ledger
