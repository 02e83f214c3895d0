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

#include "classicschain/ledger/world_state.h"

#include <mutex>

namespace classicschain::ledger {

namespace {
bool StartsWith(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}
}  // namespace

const HistoryRecord* VersionedStore::LatestAt(
    const std::vector<HistoryRecord>& versions, std::uint64_t height) const {
  for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
    if (it->version.block <= height) return &*it;
  }
  return nullptr;
}

void VersionedStore::ApplyBlock(const Block& block) {
  {
    std::unique_lock<std::shared_mutex> lock(mu_);
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
      if (block.validation_flags[i] != ValidationCode::kValid) continue;
      const LedgerTransaction& tx = block.transactions[i];
      for (const auto& w : tx.write_set) {
        HistoryRecord rec;
        rec.version = Version{block.number, i};
        rec.tx_id = tx.tx_id;
        rec.timestamp = tx.timestamp;
        rec.submitter_org = std::string(identity::OrgNameString(tx.submitter.org));
        rec.submitter_user = tx.submitter.user_id;
        rec.function = tx.function;
        rec.value = w.is_delete ? std::string() : w.value;
        rec.is_delete = w.is_delete;
        keys_[w.key].push_back(std::move(rec));
      }
    }
  }
  height_.store(block.number, std::memory_order_release);
}

std::vector<std::string> VersionedStore::Keys() const {
  std::shared_lock<std::shared_mutex> lock(mu_);
  std::vector<std::string> out;
  out.reserve(keys_.size());
  for (const auto& [k, v] : keys_) out.push_back(k);
  return out;
}

std::optional<StateValue> VersionedStore::Snapshot::Get(
    const std::string& key) const {
  std::shared_lock<std::shared_mutex> lock(store_->mu_);
  auto it = store_->keys_.find(key);
  if (it == store_->keys_.end()) return std::nullopt;
  const HistoryRecord* rec = store_->LatestAt(it->second, height_);
  if (rec == nullptr || rec->is_delete) return std::nullopt;
  return StateValue{rec->value, rec->version};
}

std::optional<Version> VersionedStore::Snapshot::VersionOf(
    const std::string& key) const {
  std::shared_lock<std::shared_mutex> lock(store_->mu_);
  auto it = store_->keys_.find(key);
  if (it == store_->keys_.end()) return std::nullopt;
  const HistoryRecord* rec = store_->LatestAt(it->second, height_);
  if (rec == nullptr) return std::nullopt;
  return rec->version;
}

std::vector<std::pair<std::string, StateValue>>
VersionedStore::Snapshot::Scan(const std::string& prefix) const {
  std::vector<std::pair<std::string, StateValue>> out;
  std::shared_lock<std::shared_mutex> lock(store_->mu_);
  for (auto it = store_->keys_.lower_bound(prefix);
       it != store_->keys_.end() && StartsWith(it->first, prefix); ++it) {
    const HistoryRecord* rec = store_->LatestAt(it->second, height_);
    if (rec == nullptr || rec->is_delete) continue;
    out.emplace_back(it->first, StateValue{rec->value, rec->version});
  }
  return out;
}

std::vector<HistoryRecord> VersionedStore::Snapshot::History(
    const std::string& key) const {
  std::vector<HistoryRecord> out;
  std::shared_lock<std::shared_mutex> lock(store_->mu_);
  auto it = store_->keys_.find(key);
  if (it == store_->keys_.end()) return out;
  for (const auto& rec : it->second) {
    if (rec.version.block > height_) break;
    out.push_back(rec);
  }
  return out;
}

// --- TxContext --------------------------------------------------------------

TxContext::TxContext(const StateReader& state, identity::Certificate creator,
                     std::string function, std::vector<std::string> args,
                     std::int64_t timestamp)
    : state_(state),
      creator_(std::move(creator)),
      function_(std::move(function)),
      args_(std::move(args)),
      timestamp_(timestamp) {}

void TxContext::RecordRead(const std::string& key) {
  if (reads_.count(key) != 0 || writes_.count(key) != 0) return;
  reads_.emplace(key, state_.VersionOf(key));
  read_order_.push_back(key);
}

std::optional<std::string> TxContext::GetState(const std::string& key) {
  auto w = writes_.find(key);
  if (w != writes_.end()) {
    if (w->second.is_delete) return std::nullopt;
    return w->second.value;
  }
  RecordRead(key);
  auto v = state_.Get(key);
  if (!v) return std::nullopt;
  return std::move(v->value);
}

std::vector<std::pair<std::string, std::string>> TxContext::GetStateByPrefix(
    const std::string& prefix) {
  std::map<std::string, std::string> merged;
  for (auto& [k, v] : state_.Scan(prefix)) {
    RecordRead(k);
    merged[k] = std::move(v.value);
  }
  for (const auto& [k, w] : writes_) {
    if (!StartsWith(k, prefix)) continue;
    if (w.is_delete) {
      merged.erase(k);
    } else {
      merged[k] = w.value;
    }
  }
  return {merged.begin(), merged.end()};
}

std::optional<std::string> TxContext::PeekState(const std::string& key) const {
  auto w = writes_.find(key);
  if (w != writes_.end()) {
    if (w->second.is_delete) return std::nullopt;
    return w->second.value;
  }
  auto v = state_.Get(key);
  if (!v) return std::nullopt;
  return std::move(v->value);
}

std::vector<HistoryRecord> TxContext::GetHistoryForKey(
    const std::string& key) const {
  return state_.History(key);
}

void TxContext::PutState(const std::string& key, std::string value) {
  writes_[key] = WriteItem{key, std::move(value), false};
}

void TxContext::DelState(const std::string& key) {
  writes_[key] = WriteItem{key, std::string(), true};
}

std::vector<ReadItem> TxContext::read_set() const {
  std::vector<ReadItem> out;
  out.reserve(read_order_.size());
  for (const auto& k : read_order_) out.push_back(ReadItem{k, reads_.at(k)});
  return out;
}

std::vector<WriteItem> TxContext::write_set() const {
  std::vector<WriteItem> out;
  out.reserve(writes_.size());
  for (const auto& [k, w] : writes_) out.push_back(w);
  return out;
}

}  // namespace classicschain::ledger
