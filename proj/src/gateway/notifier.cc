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


#include "classicschain/gateway/notifier.h"

#include <unistd.h>

#include <fstream>
#include <regex>

#include "httplib.h"

namespace classicschain::gateway {

namespace {

constexpr std::array<std::string_view, 5> kEventNames = {
    "access-granted", "access-revoked", "ownership-transferred", "step-added",
    "certified"};

std::optional<EventType> ParseEventType(std::string_view s) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s) return static_cast<EventType>(i);
  }
  return std::nullopt;
}

template <typename F>
void ForEachLine(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    auto j = ParseJson(line);
    if (j.ok() && j->is_object()) f(*j);  // torn tail lines are skipped
  }
}

}  // namespace

std::string_view EventTypeName(EventType type) {
  return kEventNames[static_cast<int>(type)];
}

Json NotificationEvent::ToJson() const {
  return Json{{"actorUserId", actor_user_id},
              {"eventType", EventTypeName(type)},
              {"payload", payload},
              {"recipientUserId", recipient_user_id},
              {"seq", seq},
              {"timestamp", timestamp},
              {"txId", tx_id},
              {"vin", vin}};
}

Result<NotificationEvent> NotificationEvent::FromJson(const Json& j) {
  try {
    NotificationEvent e;
    auto type = ParseEventType(j.at("eventType").get<std::string>());
    if (!type) return Error(ErrorCode::kInternal, "unknown event type");
    e.type = *type;
    e.actor_user_id = j.at("actorUserId").get<std::string>();
    e.payload = j.at("payload");
    e.recipient_user_id = j.at("recipientUserId").get<std::string>();
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp = j.at("timestamp").get<std::int64_t>();
    e.tx_id = j.at("txId").get<std::string>();
    e.vin = j.at("vin").get<std::string>();
    return e;
  } catch (const Json::exception& ex) {
    return Error(ErrorCode::kInternal, ex.what());
  }
}

std::vector<NotificationEvent> EventsForTransaction(const ledger::LedgerTransaction& tx,
                                                    const std::string& owner_after) {
  std::vector<NotificationEvent> out;
  const auto& a = tx.args;
  auto make = [&](EventType type, const std::string& recipient, Json payload) {
    NotificationEvent e;
    e.type = type;
    e.vin = a.empty() ? "" : a[0];
    e.actor_user_id = tx.submitter.user_id;
    e.recipient_user_id = recipient;
    e.timestamp = tx.timestamp;
    e.tx_id = tx.tx_id;
    e.payload = std::move(payload);
    out.push_back(std::move(e));
  };
  if (tx.function == "GrantAccess" && a.size() == 3) {
    make(EventType::kAccessGranted, a[1], {{"level", a[2]}});
  } else if (tx.function == "RevokeAccess" && a.size() == 2) {
    make(EventType::kAccessRevoked, a[1], Json::object());
  } else if (tx.function == "TransferOwnership" && a.size() == 2) {
    Json p = {{"newOwnerUserId", a[1]}, {"previousOwnerUserId", tx.submitter.user_id}};
    make(EventType::kOwnershipTransferred, tx.submitter.user_id, p);
    make(EventType::kOwnershipTransferred, a[1], p);
  } else if (tx.function == "AddRestorationStep" && a.size() == 3) {
    auto step = ParseJson(a[1]);
    Json p = Json::object();
    if (step.ok() && step->is_object() && step->contains("stepId")) {
      p["stepId"] = (*step)["stepId"];
    }
    make(EventType::kStepAdded, owner_after, p);
  } else if (tx.function == "CertifyVehicle" && a.size() == 1) {
    make(EventType::kCertified, owner_after, Json::object());
  }
  return out;
}

Result<std::unique_ptr<Notifier>> Notifier::Open(NotifierConfig config) {
  std::unique_ptr<Notifier> n(new Notifier());
  n->config_ = std::move(config);
  if (!n->config_.dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(n->config_.dir, ec);
    CC_RETURN_IF_ERROR(n->Replay());
    n->events_file_ = std::fopen((n->config_.dir / "events.jsonl").c_str(), "ab");
    n->deliveries_file_ =
        std::fopen((n->config_.dir / "deliveries.jsonl").c_str(), "ab");
    if (n->events_file_ == nullptr || n->deliveries_file_ == nullptr) {
      return Error(ErrorCode::kIoFailure, "cannot open event log");
    }
  }
  Notifier* raw = n.get();
  n->dispatcher_ = std::thread([raw] { raw->DispatchLoop(); });
  return n;
}

Notifier::~Notifier() { Stop(); }

Status Notifier::Replay() {
  ForEachLine(config_.dir / "events.jsonl", [&](const Json& j) {
    auto e = NotificationEvent::FromJson(j);
    if (e.ok()) events_.push_back(std::move(e).value());
  });
  std::set<std::pair<std::uint64_t, std::string>> settled;
  ForEachLine(config_.dir / "deliveries.jsonl", [&](const Json& j) {
    if (j.contains("seq") && j.contains("url")) {
      settled.insert({j["seq"].get<std::uint64_t>(), j["url"].get<std::string>()});
    }
  });
  auto now = std::chrono::steady_clock::now();
  for (const auto& e : events_) {
    for (const auto& url : config_.webhooks) {
      if (!settled.count({e.seq, url})) queue_.push_back(Delivery{e.seq, url, 0, now});
    }
  }
  return Status::Ok();
}

void Notifier::Append(std::FILE* f, const Json& record) {
  if (f == nullptr) return;
  std::string line = Canonical(record) + "\n";
  std::fwrite(line.data(), 1, line.size(), f);
  std::fflush(f);
  ::fdatasync(fileno(f));
}

Status Notifier::Emit(NotificationEvent event) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return Error(ErrorCode::kInternal, "notifier stopped");
    event.seq = events_.empty() ? 1 : events_.back().seq + 1;
    Append(events_file_, event.ToJson());
    auto now = std::chrono::steady_clock::now();
    for (const auto& url : config_.webhooks) {
      queue_.push_back(Delivery{event.seq, url, 0, now});
    }
    events_.push_back(std::move(event));
  }
  cv_.notify_all();
  return Status::Ok();
}

std::vector<NotificationEvent> Notifier::Events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::vector<NotificationEvent> Notifier::EventsFor(const std::string& recipient) const {
  std::lock_guard lock(mu_);
  std::vector<NotificationEvent> out;
  for (const auto& e : events_) {
    if (e.recipient_user_id == recipient) out.push_back(e);
  }
  return out;
}

Notifier::DeliveryStats Notifier::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

bool Notifier::WaitIdle(Millis timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return queue_.empty() && in_flight_ == 0; });
}

bool Notifier::Post(const std::string& url, const std::string& body) const {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) return false;
  httplib::Client client(m[1].str());
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(5, 0);
  client.enable_server_certificate_verification(false);
  std::string path = m[2].matched ? m[2].str() : "/";
  auto res = client.Post(path, body, "application/json");
  return res && res->status >= 200 && res->status < 300;
}

void Notifier::DispatchLoop() {
  std::unique_lock lock(mu_);
  while (!stopping_) {
    if (queue_.empty()) {
      cv_.wait(lock);
      continue;
    }
    auto it = std::min_element(queue_.begin(), queue_.end(),
                               [](const Delivery& a, const Delivery& b) {
                                 return a.due < b.due;
                               });
    if (it->due > std::chrono::steady_clock::now()) {
      cv_.wait_until(lock, it->due);
      continue;
    }
    Delivery d = *it;
    queue_.erase(it);
    std::string body;
    for (const auto& e : events_) {
      if (e.seq == d.seq) body = Canonical(e.ToJson());
    }
    ++in_flight_;
    lock.unlock();
    bool ok = Post(d.url, body);
    lock.lock();
    --in_flight_;
    ++stats_.attempts;
    ++d.attempts;
    if (ok) {
      ++stats_.delivered;
      Append(deliveries_file_, Json{{"seq", d.seq}, {"status", "delivered"}, {"url", d.url}});
    } else {
      ++stats_.failures;
      if (d.attempts >= config_.max_attempts) {
        ++stats_.abandoned;
        Append(deliveries_file_, Json{{"seq", d.seq}, {"status", "abandoned"}, {"url", d.url}});
        std::fprintf(stderr, "notifier: giving up on event %llu to %s\n",
                     static_cast<unsigned long long>(d.seq), d.url.c_str());
      } else {
        d.due = std::chrono::steady_clock::now() +
                config_.backoff * (1 << std::min(d.attempts - 1, 10));
        queue_.push_back(d);
      }
    }
    cv_.notify_all();
  }
}

void Notifier::Stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  if (dispatcher_.joinable()) dispatcher_.join();
  for (std::FILE** f : {&events_file_, &deliveries_file_}) {
    if (*f != nullptr) std::fclose(*f);
    *f = nullptr;
  }
}

}  // namespace classicschain::gateway
