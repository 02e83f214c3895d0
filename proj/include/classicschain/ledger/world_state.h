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
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "classicschain/ledger/types.h"

namespace classicschain::ledger {

// One VALID write to a key.
struct HistoryRecord {
  Version version;
  std::string tx_id;
  std::int64_t timestamp = 0;
  std::string submitter_org;
  std::string submitter_user;
  std::string function;
  std::string value;
  bool is_delete = false;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

// Current value of a key as seen by a snapshot.
struct StateValue {
  std::string value;
  Version version;
};

// Read-only view of world state.
class StateReader {
 public:
  virtual ~StateReader() = default;
  // Latest live value (nullopt for absent or deleted keys).
  virtual std::optional<StateValue> Get(const std::string& key) const = 0;
  // Version of the latest write including deletes, for MVCC read sets.
  virtual std::optional<Version> VersionOf(const std::string& key) const = 0;
  // Live keys with the given prefix, ascending.
  virtual std::vector<std::pair<std::string, StateValue>> Scan(
      const std::string& prefix) const = 0;
  // Every VALID write to `key`, oldest first.
  virtual std::vector<HistoryRecord> History(const std::string& key) const = 0;
};

// Multi-version world state. Every VALID write is retained, so the same
// structure serves as the per-key history index. Readers pin a block height
// and see exactly the state after that block; commits append versions and
// then publish the new height.
class VersionedStore {
 public:
  class Snapshot final : public StateReader {
   public:
    Snapshot(const VersionedStore* store, std::uint64_t height)
        : store_(store), height_(height) {}
    std::optional<StateValue> Get(const std::string& key) const override;
    std::optional<Version> VersionOf(const std::string& key) const override;
    std::vector<std::pair<std::string, StateValue>> Scan(
        const std::string& prefix) const override;
    std::vector<HistoryRecord> History(const std::string& key) const override;
    std::uint64_t height() const { return height_; }

   private:
    const VersionedStore* store_;
    std::uint64_t height_;
  };

  // Height of the last applied block; 0 before any non-genesis block.
  std::uint64_t height() const { return height_.load(std::memory_order_acquire); }
  Snapshot TakeSnapshot() const { return Snapshot(this, height()); }

  // Applies the writes of every VALID transaction of `block` and publishes
  // block.number as the new height.
  void ApplyBlock(const Block& block);

  // All keys ever written.
  std::vector<std::string> Keys() const;

 private:
  const HistoryRecord* LatestAt(const std::vector<HistoryRecord>& versions,
                                std::uint64_t height) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::vector<HistoryRecord>> keys_;
  std::atomic<std::uint64_t> height_{0};
};

// Simulation context handed to a chaincode. Records a read set (first read
// version per key) and a write set (last write per key, ordered by key).
// Reads observe the transaction's own pending writes.
class TxContext {
 public:
  TxContext(const StateReader& state, identity::Certificate creator,
            std::string function, std::vector<std::string> args,
            std::int64_t timestamp);

  std::optional<std::string> GetState(const std::string& key);
  std::vector<std::pair<std::string, std::string>> GetStateByPrefix(
      const std::string& prefix);
  // Reads that are not recorded in the read set: for assembling responses
  // whose contents must not make the transaction conflict.
  std::optional<std::string> PeekState(const std::string& key) const;
  std::vector<HistoryRecord> GetHistoryForKey(const std::string& key) const;
  void PutState(const std::string& key, std::string value);
  void DelState(const std::string& key);

  const identity::Certificate& creator() const { return creator_; }
  const std::string& function() const { return function_; }
  const std::vector<std::string>& args() const { return args_; }
  std::int64_t timestamp() const { return timestamp_; }

  std::vector<ReadItem> read_set() const;
  std::vector<WriteItem> write_set() const;
  bool writes(const std::string& key) const { return writes_.count(key) != 0; }

 private:
  void RecordRead(const std::string& key);

  const StateReader& state_;
  identity::Certificate creator_;
  std::string function_;
  std::vector<std::string> args_;
  std::int64_t timestamp_;
  std::map<std::string, std::optional<Version>> reads_;
  std::vector<std::string> read_order_;
  std::map<std::string, WriteItem> writes_;
};

// Smart-contract interface implemented by the contracts layer.
class Chaincode {
 public:
  virtual ~Chaincode() = default;
  virtual bool Knows(const std::string& function) const = 0;
  // Runs `ctx.function()`; the returned bytes are the function's response.
  virtual Result<std::string> Invoke(TxContext& ctx) const = 0;
};

}  // namespace classicschain::ledger
