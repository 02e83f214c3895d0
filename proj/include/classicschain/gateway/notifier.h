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

#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/ledger/types.h"

namespace classicschain::gateway {

enum class EventType {
  kAccessGranted,
  kAccessRevoked,
  kOwnershipTransferred,
  kStepAdded,
  kCertified,
};
std::string_view EventTypeName(EventType type);

struct NotificationEvent {
  std::uint64_t seq = 0;
  EventType type = EventType::kStepAdded;
  std::string vin;
  std::string actor_user_id;
  std::string recipient_user_id;
  std::int64_t timestamp = 0;
  std::string tx_id;
  Json payload = Json::object();

  Json ToJson() const;
  static Result<NotificationEvent> FromJson(const Json& json);
};

// Events for one committed transaction. `owner_after` is the vehicle owner
// once the transaction has been applied.
std::vector<NotificationEvent> EventsForTransaction(const ledger::LedgerTransaction& tx,
                                                    const std::string& owner_after);

struct NotifierConfig {
  // <dir>/events.jsonl holds every event; <dir>/deliveries.jsonl records
  // webhook acknowledgements. Empty: memory only.
  std::filesystem::path dir;
  std::vector<std::string> webhooks;  // http(s)://host[:port]/path
  int max_attempts = 5;
  Millis backoff{500};
};

// Durable event log plus at-least-once webhook delivery. Emit never blocks
// on delivery; one dispatcher thread POSTs each event (JSON body) to every
// webhook and retries failures with exponential backoff. Deliveries not
// acknowledged before a restart are resent.
class Notifier {
 public:
  static Result<std::unique_ptr<Notifier>> Open(NotifierConfig config);
  ~Notifier();

  // Assigns the sequence number, appends to the log and queues delivery.
  Status Emit(NotificationEvent event);

  std::vector<NotificationEvent> Events() const;
  std::vector<NotificationEvent> EventsFor(const std::string& recipient) const;

  struct DeliveryStats {
    std::uint64_t delivered = 0;
    std::uint64_t attempts = 0;
    std::uint64_t failures = 0;   // failed attempts
    std::uint64_t abandoned = 0;  // gave up after max_attempts
  };
  DeliveryStats stats() const;
  // Waits until no delivery is queued or in flight.
  bool WaitIdle(Millis timeout) const;
  void Stop();

 private:
  struct Delivery {
    std::uint64_t seq;
    std::string url;
    int attempts = 0;
    SteadyTime due;
  };

  Notifier() = default;
  Status Replay();
  void DispatchLoop();
  bool Post(const std::string& url, const std::string& body) const;
  void Append(std::FILE* f, const Json& record);

  NotifierConfig config_;
  std::FILE* events_file_ = nullptr;
  std::FILE* deliveries_file_ = nullptr;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<NotificationEvent> events_;
  std::deque<Delivery> queue_;
  int in_flight_ = 0;
  DeliveryStats stats_;
  bool stopping_ = false;
  std::thread dispatcher_;
};

}  // namespace classicschain::gateway
