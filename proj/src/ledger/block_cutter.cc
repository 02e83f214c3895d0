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


#include "classicschain/ledger/block_cutter.h"

#include <algorithm>

namespace classicschain::ledger {

BlockCutter::BlockCutter(std::size_t max_messages, Millis batch_timeout)
    : max_messages_(std::max<std::size_t>(1, max_messages)),
      batch_timeout_(batch_timeout) {}

std::optional<std::vector<LedgerTransaction>> BlockCutter::Add(
    LedgerTransaction tx, SteadyTime now) {
  if (pending_.empty()) first_arrival_ = now;
  pending_.push_back(std::move(tx));
  if (pending_.size() >= max_messages_) return Flush();
  return std::nullopt;
}

std::optional<std::vector<LedgerTransaction>> BlockCutter::Poll(
    SteadyTime now) {
  if (pending_.empty() || now < first_arrival_ + batch_timeout_) {
    return std::nullopt;
  }
  return Flush();
}

std::optional<std::vector<LedgerTransaction>> BlockCutter::Flush() {
  if (pending_.empty()) return std::nullopt;
  std::vector<LedgerTransaction> batch;
  batch.swap(pending_);
  return batch;
}

std::optional<SteadyTime> BlockCutter::deadline() const {
  if (pending_.empty()) return std::nullopt;
  return first_arrival_ + batch_timeout_;
}

}  // namespace classicschain::ledger
