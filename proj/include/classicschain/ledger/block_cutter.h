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

#include <cstddef>
#include <optional>
#include <vector>

#include "classicschain/common/clock.h"
#include "classicschain/ledger/types.h"

namespace classicschain::ledger {

// Groups pending transactions into batches. A batch is cut when it reaches
// max_messages, or when batch_timeout has elapsed since its first
// transaction arrived. Pure: time is passed in by the caller.
class BlockCutter {
 public:
  BlockCutter(std::size_t max_messages, Millis batch_timeout);

  // Returns a full batch if `tx` completed one.
  std::optional<std::vector<LedgerTransaction>> Add(LedgerTransaction tx,
                                                    SteadyTime now);
  // Returns the pending batch if its timeout has expired.
  std::optional<std::vector<LedgerTransaction>> Poll(SteadyTime now);
  // Cuts whatever is pending regardless of time.
  std::optional<std::vector<LedgerTransaction>> Flush();

  // When the pending batch times out; nullopt while nothing is pending.
  std::optional<SteadyTime> deadline() const;
  std::size_t pending() const { return pending_.size(); }

 private:
  std::size_t max_messages_;
  Millis batch_timeout_;
  std::vector<LedgerTransaction> pending_;
  SteadyTime first_arrival_{};
};

}  // namespace classicschain::ledger
