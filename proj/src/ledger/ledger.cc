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


#include "classicschain/ledger/ledger.h"

#include <cstdio>
#include <future>

#include "classicschain/common/crypto.h"

namespace classicschain::ledger {

namespace fs = std::filesystem;

namespace {

constexpr const char kBlockFileName[] = "blocks.dat";

ErrorCode CodeForFlag(ValidationCode code) {
  switch (code) {
    case ValidationCode::kValid: return ErrorCode::kOk;
    case ValidationCode::kMvccConflict: return ErrorCode::kMvccConflict;
    case ValidationCode::kBadSignature: return ErrorCode::kBadSignature;
    case ValidationCode::kEndorsementFailure:
      return ErrorCode::kEndorsementFailure;
  }
  return ErrorCode::kInternal;
}

std::string OrdererUserId(raft::NodeId id) {
  return "orderer" + std::to_string(id);
}

}  // namespace

Status DefaultEndorsementPolicy(const LedgerTransaction& tx) {
  if (!identity::IsPeerOrg(tx.submitter.org)) {
    return Error(ErrorCode::kEndorsementFailure,
                 "submitter is not a member of a peer organization");
  }
  return Status::Ok();
}

Result<std::unique_ptr<Ledger>> Ledger::Open(
    LedgerConfig config, std::shared_ptr<identity::Membership> membership,
    std::shared_ptr<const Chaincode> chaincode) {
  if (!membership || !chaincode) {
    return Error(ErrorCode::kInvalidArgument, "membership and chaincode required");
  }
  crypto::Init();
  std::unique_ptr<Ledger> ledger(new Ledger());
  if (!config.clock) config.clock = DefaultClock();
  if (!config.endorsement_policy) {
    config.endorsement_policy = DefaultEndorsementPolicy;
  }
  ledger->config_ = std::move(config);
  ledger->membership_ = std::move(membership);
  ledger->chaincode_ = std::move(chaincode);

  for (raft::NodeId id : ledger->config_.ordering.nodes) {
    auto found = ledger->membership_->Find(identity::OrgName::kOrderers,
                                           OrdererUserId(id));
    if (!found.ok()) {
      found = ledger->membership_->Enroll(identity::OrgName::kOrderers,
                                          OrdererUserId(id),
                                          identity::Role::kOrderer);
    }
    if (!found.ok()) return found.error();
    if (!found->has_key()) {
      return Error(ErrorCode::kUnknownKey, "orderer key missing from wallet");
    }
    ledger->orderers_.emplace(id, std::move(found).value());
  }

  fs::path block_path;
  if (!ledger->config_.data_dir.empty()) {
    std::error_code ec;
    fs::create_directories(ledger->config_.data_dir, ec);
    if (ec) return Error(ErrorCode::kIoFailure, ec.message());
    block_path = ledger->config_.data_dir / kBlockFileName;
  }
  CC_ASSIGN_OR_RETURN(ledger->store_,
                      BlockStore::Open(block_path, ledger->config_.fsync));
  CC_RETURN_IF_ERROR(ledger->Bootstrap());

  ledger->cutter_ = std::make_unique<BlockCutter>(
      ledger->config_.max_messages_per_block, ledger->config_.batch_timeout);
  ledger->cluster_ =
      std::make_unique<raft::RaftCluster>(ledger->config_.ordering);
  Ledger* raw = ledger.get();
  CC_RETURN_IF_ERROR(ledger->cluster_->Start(
      [raw](std::uint64_t, const std::string& data) { raw->OnCommitted(data); }));
  ledger->cutter_thread_ = std::thread([raw] { raw->CutterLoop(); });
  return ledger;
}

Ledger::~Ledger() { Close(); }

Block Ledger::MakeGenesis() const {
  Block genesis;
  genesis.number = 0;
  genesis.previous_hash = ZeroHash();
  genesis.config = Json{
      {"batch",
       {{"batchTimeoutMs", config_.batch_timeout.count()},
        {"maxMessageCount", config_.max_messages_per_block}}},
      {"channel", kChannelName},
      {"roots", membership_->roots().ToJson()}};
  genesis.data_hash = genesis.ComputeDataHash();
  const identity::Identity& signer = orderers_.begin()->second;
  genesis.orderer_signature.orderer = signer.certificate;
  genesis.orderer_signature.signature =
      identity::Sign(signer, genesis.HeaderPayload()).value();
  return genesis;
}

Status Ledger::Bootstrap() {
  if (store_->size() == 0) {
    Block genesis = MakeGenesis();
    CC_RETURN_IF_ERROR(store_->Append(genesis));
    last_header_digest_ = genesis.HeaderDigest();
    return Status::Ok();
  }
  if (!store_->path().empty()) {
    ChainReport report = VerifyChainFile(store_->path());
    if (!report.ok) {
      return Error(ErrorCode::kIntegrityFailure,
                   "block file fails verification at block " +
                       std::to_string(report.first_bad_block) + ": " +
                       report.reason);
    }
  }
  CC_ASSIGN_OR_RETURN(Block genesis, store_->Read(0));
  if (!genesis.config || (*genesis.config)["roots"] !=
                             membership_->roots().ToJson()) {
    return Error(ErrorCode::kIntegrityFailure,
                 "genesis trust roots do not match the wallet");
  }
  last_header_digest_ = genesis.HeaderDigest();
  for (std::uint64_t n = 1; n < store_->size(); ++n) {
    CC_ASSIGN_OR_RETURN(Block b, store_->Read(n));
    state_.ApplyBlock(b);
    for (const auto& tx : b.transactions) committed_tx_ids_.insert(tx.tx_id);
    last_header_digest_ = b.HeaderDigest();
  }
  return Status::Ok();
}

// --- simulation ---------------------------------------------------------------

Result<PreparedTransaction> Ledger::Simulate(
    const identity::Identity& caller, const std::string& function,
    std::vector<std::string> args, std::optional<std::int64_t> timestamp) const {
  if (!chaincode_->Knows(function)) {
    return Error(ErrorCode::kUnknownFunction, function);
  }
  if (!caller.has_key()) {
    return Error(ErrorCode::kUnknownKey, "caller cannot sign");
  }
  CC_RETURN_IF_ERROR(roots().VerifyCertificate(caller.certificate));
  auto snapshot = state_.TakeSnapshot();
  std::int64_t ts = timestamp.value_or(config_.clock->WallMillis());
  TxContext ctx(snapshot, caller.certificate, function, args, ts);
  CC_ASSIGN_OR_RETURN(std::string response, chaincode_->Invoke(ctx));

  PreparedTransaction out;
  LedgerTransaction& tx = out.tx;
  tx.submitter = caller.certificate;
  tx.function = function;
  tx.args = std::move(args);
  tx.read_set = ctx.read_set();
  tx.write_set = ctx.write_set();
  tx.timestamp = ts;
  CC_ASSIGN_OR_RETURN(tx.client_signature,
                      identity::Sign(caller, tx.SigningPayload()));
  tx.tx_id = tx.ComputeTxId();
  out.response = std::move(response);
  return out;
}

Result<std::string> Ledger::EvaluateQuery(const identity::Identity& caller,
                                          const std::string& function,
                                          std::vector<std::string> args) const {
  if (!chaincode_->Knows(function)) {
    return Error(ErrorCode::kUnknownFunction, function);
  }
  CC_RETURN_IF_ERROR(roots().VerifyCertificate(caller.certificate));
  auto snapshot = state_.TakeSnapshot();
  TxContext ctx(snapshot, caller.certificate, function, std::move(args),
                config_.clock->WallMillis());
  return chaincode_->Invoke(ctx);
}

// --- submission -----------------------------------------------------------------

Result<SubmitResult> Ledger::SubmitTransaction(const identity::Identity& caller,
                                               const std::string& function,
                                               std::vector<std::string> args) {
  CC_ASSIGN_OR_RETURN(PreparedTransaction prepared,
                      Simulate(caller, function, std::move(args)));
  return SubmitPrepared(std::move(prepared));
}

void Ledger::SubmitAsync(const identity::Identity& caller,
                         const std::string& function,
                         std::vector<std::string> args, SubmitCallback done) {
  auto prepared = Simulate(caller, function, std::move(args));
  if (!prepared.ok()) {
    done(prepared.error());
    return;
  }
  SubmitPreparedAsync(std::move(prepared).value(), std::move(done));
}

Result<SubmitResult> Ledger::SubmitPrepared(PreparedTransaction prepared) {
  auto promise = std::make_shared<std::promise<Result<SubmitResult>>>();
  auto future = promise->get_future();
  SubmitPreparedAsync(std::move(prepared), [promise](Result<SubmitResult> r) {
    promise->set_value(std::move(r));
  });
  if (future.wait_for(config_.commit_timeout) != std::future_status::ready) {
    return Error(ErrorCode::kTimeout, "commit not observed in time");
  }
  return future.get();
}

void Ledger::SubmitPreparedAsync(PreparedTransaction prepared,
                                 SubmitCallback done) {
  if (closed_) {
    done(Error(ErrorCode::kOrderingUnavailable, "ledger closed"));
    return;
  }
  std::string tx_id = prepared.tx.tx_id;
  std::string response = std::move(prepared.response);
  {
    std::lock_guard lock(waiters_mu_);
    waiters_.emplace(tx_id, Waiter{[done = std::move(done), tx_id,
                                    response](Result<SubmitResult> r) {
                       if (r.ok()) r->response = response;
                       done(std::move(r));
                     }});
  }
  {
    std::lock_guard lock(cut_mu_);
    auto batch = cutter_->Add(std::move(prepared.tx), config_.clock->Now());
    if (batch) ready_.push_back(std::move(*batch));
  }
  cut_cv_.notify_all();
}

// --- ordering service -------------------------------------------------------------

void Ledger::CutterLoop() {
  std::unique_lock lock(cut_mu_);
  while (!stopping_) {
    if (auto batch = cutter_->Poll(config_.clock->Now())) {
      ready_.push_back(std::move(*batch));
    }
    while (!ready_.empty() && inflight_ < config_.max_inflight_batches &&
           !stopping_) {
      auto batch = std::move(ready_.front());
      ready_.pop_front();
      ++inflight_;
      lock.unlock();
      ProposeBatch(std::move(batch));
      lock.lock();
    }
    Millis wait{50};
    if (auto deadline = cutter_->deadline()) {
      auto left = std::chrono::duration_cast<Millis>(*deadline -
                                                     config_.clock->Now());
      wait = std::clamp(left + Millis(1), Millis(1), Millis(50));
    }
    cut_cv_.wait_for(lock, wait);
  }
}

void Ledger::ProposeBatch(std::vector<LedgerTransaction> batch) {
  raft::NodeId orderer =
      cluster_->Leader().value_or(config_.ordering.nodes.front());
  Json txs = Json::array();
  std::vector<std::string> ids;
  for (const auto& tx : batch) {
    txs.push_back(tx.ToJson());
    ids.push_back(tx.tx_id);
  }
  std::string payload =
      Canonical(Json{{"orderer", orderer}, {"transactions", txs}});
  cluster_->ProposeAsync(
      std::move(payload),
      [this, ids = std::move(ids)](Result<std::uint64_t> r) {
        if (!r.ok()) FailBatch(ids, r.error());
        {
          std::lock_guard lock(cut_mu_);
          --inflight_;
        }
        cut_cv_.notify_all();
      });
}

void Ledger::FailBatch(const std::vector<std::string>& tx_ids,
                       const Error& error) {
  std::vector<Waiter> failed;
  {
    std::lock_guard lock(waiters_mu_);
    for (const auto& id : tx_ids) {
      auto [first, last] = waiters_.equal_range(id);
      for (auto it = first; it != last; ++it) failed.push_back(std::move(it->second));
      waiters_.erase(first, last);
    }
  }
  for (auto& w : failed) w.done(error);
}

// --- commit pipeline --------------------------------------------------------------

Result<const identity::Identity*> Ledger::OrdererIdentity(
    raft::NodeId node) const {
  auto it = orderers_.find(node);
  if (it == orderers_.end()) {
    return Error(ErrorCode::kInvalidArgument, "unknown orderer node");
  }
  return &it->second;
}

ValidationCode Ledger::Validate(
    const LedgerTransaction& tx, const StateReader& state,
    const std::set<std::string>& block_writes,
    const std::unordered_set<std::string>& block_tx_ids) {
  if (tx.channel != kChannelName || tx.ComputeTxId() != tx.tx_id) {
    return ValidationCode::kBadSignature;
  }
  std::string fp = tx.submitter.Fingerprint();
  if (!verified_certs_.count(fp)) {
    if (!roots().VerifyCertificate(tx.submitter).ok()) {
      return ValidationCode::kBadSignature;
    }
    verified_certs_.insert(fp);
  }
  if (!crypto::Ed25519Verify(tx.submitter.public_key, tx.SigningPayload(),
                             tx.client_signature)) {
    return ValidationCode::kBadSignature;
  }
  if (committed_tx_ids_.count(tx.tx_id) || block_tx_ids.count(tx.tx_id)) {
    return ValidationCode::kMvccConflict;
  }
  if (!config_.endorsement_policy(tx).ok()) {
    return ValidationCode::kEndorsementFailure;
  }
  for (const ReadItem& r : tx.read_set) {
    if (block_writes.count(r.key)) return ValidationCode::kMvccConflict;
    if (state.VersionOf(r.key) != r.version) {
      return ValidationCode::kMvccConflict;
    }
  }
  return ValidationCode::kValid;
}

void Ledger::OnCommitted(const std::string& data) {
  Block block;
  bool committed = false;
  std::vector<std::pair<std::string, Result<SubmitResult>>> outcomes;
  {
    std::lock_guard commit_lock(commit_mu_);
    auto parsed = ParseCanonical(data);
    if (!parsed.ok() || !HasExactKeys(*parsed, {"orderer", "transactions"})) {
      std::fprintf(stderr, "ledger: dropping malformed ordered batch\n");
      return;
    }
    auto orderer = OrdererIdentity((*parsed)["orderer"].get<raft::NodeId>());
    if (!orderer.ok()) {
      std::fprintf(stderr, "ledger: batch from unknown orderer\n");
      return;
    }
    for (const auto& j : (*parsed)["transactions"]) {
      auto tx = LedgerTransaction::FromJson(j);
      if (!tx.ok()) continue;
      block.transactions.push_back(std::move(tx).value());
    }
    if (block.transactions.empty()) return;

    block.number = store_->size();
    block.previous_hash = last_header_digest_;
    auto snapshot = state_.TakeSnapshot();
    std::set<std::string> block_writes;
    std::unordered_set<std::string> block_tx_ids;
    for (const auto& tx : block.transactions) {
      ValidationCode code = Validate(tx, snapshot, block_writes, block_tx_ids);
      block_tx_ids.insert(tx.tx_id);
      if (code == ValidationCode::kValid) {
        for (const auto& w : tx.write_set) block_writes.insert(w.key);
      }
      block.validation_flags.push_back(code);
    }
    block.data_hash = block.ComputeDataHash();
    block.orderer_signature.orderer = (*orderer)->certificate;
    block.orderer_signature.signature =
        identity::Sign(**orderer, block.HeaderPayload()).value();

    Status appended = store_->Append(block);
    if (!appended.ok()) {
      std::fprintf(stderr, "ledger: block append failed: %s\n",
                   appended.ToString().c_str());
      for (const auto& tx : block.transactions) {
        outcomes.emplace_back(tx.tx_id, Error(ErrorCode::kIoFailure,
                                              appended.error().message()));
      }
    } else {
      state_.ApplyBlock(block);
      committed = true;
      last_header_digest_ = block.HeaderDigest();
      for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const auto& tx = block.transactions[i];
        committed_tx_ids_.insert(tx.tx_id);
        ValidationCode code = block.validation_flags[i];
        if (code == ValidationCode::kValid) {
          outcomes.emplace_back(tx.tx_id,
                                SubmitResult{tx.tx_id, {}, block.number, i});
        } else {
          outcomes.emplace_back(
              tx.tx_id,
              Error(CodeForFlag(code),
                    std::string(ValidationCodeName(code)) + " in block " +
                        std::to_string(block.number)));
        }
      }
    }
  }

  // Listeners see the block before any submitter is told of its commit.
  if (committed) {
    std::vector<BlockListener> listeners;
    {
      std::lock_guard lock(listeners_mu_);
      for (const auto& [id, l] : listeners_) listeners.push_back(l);
    }
    for (const auto& l : listeners) l(block);
  }

  std::vector<std::pair<Waiter, Result<SubmitResult>>> ready;
  {
    std::lock_guard lock(waiters_mu_);
    for (auto& [id, outcome] : outcomes) {
      auto [first, last] = waiters_.equal_range(id);
      for (auto it = first; it != last; ++it) {
        ready.emplace_back(std::move(it->second), outcome);
      }
      waiters_.erase(first, last);
    }
  }
  for (auto& [w, r] : ready) w.done(std::move(r));
}

// --- reads ------------------------------------------------------------------------

std::vector<HistoryRecord> Ledger::GetHistoryForKey(const std::string& key) const {
  return state_.TakeSnapshot().History(key);
}

std::optional<StateValue> Ledger::GetState(const std::string& key) const {
  return state_.TakeSnapshot().Get(key);
}

std::uint64_t Ledger::Height() const { return store_->size(); }

Result<Block> Ledger::GetBlock(std::uint64_t number) const {
  return store_->Read(number);
}

ChainReport Ledger::VerifyChain() const {
  std::lock_guard lock(commit_mu_);
  if (!store_->path().empty()) return VerifyChainFile(store_->path());
  std::vector<std::string> records;
  for (std::uint64_t n = 0; n < store_->size(); ++n) {
    auto b = store_->Read(n);
    if (!b.ok()) {
      ChainReport bad;
      bad.ok = false;
      bad.first_bad_block = n;
      bad.reason = "MALFORMED_BLOCK";
      bad.detail = b.error().message();
      return bad;
    }
    records.push_back(b->Encode());
  }
  return ledger::VerifyChain(records);
}

std::uint64_t Ledger::AddBlockListener(BlockListener listener) {
  std::lock_guard lock(listeners_mu_);
  std::uint64_t id = next_listener_++;
  listeners_.emplace(id, std::move(listener));
  return id;
}

void Ledger::RemoveBlockListener(std::uint64_t id) {
  std::lock_guard lock(listeners_mu_);
  listeners_.erase(id);
}

void Ledger::Close() {
  if (closed_.exchange(true)) return;
  std::vector<std::string> orphaned;
  {
    std::lock_guard lock(cut_mu_);
    stopping_ = true;
    if (!cutter_) return;
    if (auto batch = cutter_->Flush()) ready_.push_back(std::move(*batch));
    for (auto& b : ready_) {
      for (auto& tx : b) orphaned.push_back(tx.tx_id);
    }
    ready_.clear();
  }
  cut_cv_.notify_all();
  if (cutter_thread_.joinable()) cutter_thread_.join();
  if (cluster_) cluster_->Stop();
  FailBatch(orphaned, Error(ErrorCode::kOrderingUnavailable, "ledger closed"));
}

}  // namespace classicschain::ledger
