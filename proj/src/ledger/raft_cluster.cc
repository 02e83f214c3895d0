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

#include "classicschain/ledger/raft_cluster.h"

#include <future>
#include <set>

#include <httplib.h>

#include "classicschain/common/crypto.h"

namespace classicschain::ledger::raft {

namespace {

using Clock = std::chrono::steady_clock;

// Proposals travel as an 8-byte big-endian id followed by the payload, so a
// proposal re-sent after a lost forward is delivered only once.
std::string Envelope(std::uint64_t pid, const std::string& data) {
  std::string out(8, '\0');
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<char>(pid & 0xff);
    pid >>= 8;
  }
  return out + data;
}

bool OpenEnvelope(const std::string& raw, std::uint64_t* pid,
                  std::string* data) {
  if (raw.size() < 8) return false;
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(raw[i]);
  *pid = v;
  *data = raw.substr(8);
  return true;
}

constexpr int kResendTicks = 50;

}  // namespace

// --- InMemoryTransport ------------------------------------------------------

Status InMemoryTransport::Start(Deliver deliver) {
  std::lock_guard lock(mu_);
  deliver_ = std::move(deliver);
  return Status::Ok();
}

void InMemoryTransport::Send(const Message& msg) {
  Deliver d;
  {
    std::lock_guard lock(mu_);
    d = deliver_;
  }
  if (d) d(msg);
}

void InMemoryTransport::Stop() {
  std::lock_guard lock(mu_);
  deliver_ = nullptr;
}

// --- LoopbackTransport ------------------------------------------------------

struct LoopbackTransport::Impl {
  struct Outbound {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Message> queue;
    std::thread worker;
  };

  std::uint16_t base_port;
  std::vector<NodeId> nodes;
  Deliver deliver;
  std::map<NodeId, std::unique_ptr<httplib::Server>> servers;
  std::vector<std::thread> server_threads;
  std::map<NodeId, std::unique_ptr<Outbound>> outbound;
  std::atomic<bool> running{false};

  void SenderLoop(NodeId to, Outbound* out) {
    httplib::Client client("127.0.0.1", base_port + to);
    client.set_connection_timeout(0, 200000);
    client.set_read_timeout(1, 0);
    client.set_keep_alive(true);
    client.set_tcp_nodelay(true);
    while (true) {
      std::vector<Message> batch;
      {
        std::unique_lock lock(out->mu);
        out->cv.wait(lock, [&] { return !running || !out->queue.empty(); });
        if (!running) return;
        while (!out->queue.empty()) {
          batch.push_back(std::move(out->queue.front()));
          out->queue.pop_front();
        }
      }
      Json body = Json::array();
      for (const auto& m : batch) body.push_back(m.ToJson());
      // Loss is tolerated by the protocol; failures are simply dropped.
      (void)client.Post("/raft", Canonical(body), "application/json");
    }
  }
};

LoopbackTransport::LoopbackTransport(std::uint16_t base_port,
                                     std::vector<NodeId> nodes)
    : impl_(std::make_unique<Impl>()) {
  impl_->base_port = base_port;
  impl_->nodes = std::move(nodes);
}

LoopbackTransport::~LoopbackTransport() { Stop(); }

Status LoopbackTransport::Start(Deliver deliver) {
  impl_->deliver = std::move(deliver);
  impl_->running = true;
  for (NodeId id : impl_->nodes) {
    auto server = std::make_unique<httplib::Server>();
    server->set_tcp_nodelay(true);
    Impl* impl = impl_.get();
    server->Post("/raft", [impl](const httplib::Request& req,
                                 httplib::Response& res) {
      auto body = ParseJson(req.body);
      if (!body.ok() || !body->is_array()) {
        res.status = 400;
        return;
      }
      for (const auto& j : *body) {
        auto m = Message::FromJson(j);
        if (m.ok() && impl->running) impl->deliver(std::move(*m));
      }
      res.status = 204;
    });
    if (!server->bind_to_port("127.0.0.1", impl_->base_port + id)) {
      Stop();
      return Error(ErrorCode::kIoFailure,
                   "cannot bind raft port " +
                       std::to_string(impl_->base_port + id));
    }
    httplib::Server* raw = server.get();
    impl_->servers[id] = std::move(server);
    impl_->server_threads.emplace_back([raw] { raw->listen_after_bind(); });
    raw->wait_until_ready();
  }
  for (NodeId id : impl_->nodes) {
    auto out = std::make_unique<Impl::Outbound>();
    Impl::Outbound* raw = out.get();
    Impl* impl = impl_.get();
    out->worker = std::thread([impl, id, raw] { impl->SenderLoop(id, raw); });
    impl_->outbound[id] = std::move(out);
  }
  return Status::Ok();
}

void LoopbackTransport::Send(const Message& msg) {
  auto it = impl_->outbound.find(msg.to);
  if (it == impl_->outbound.end()) return;
  {
    std::lock_guard lock(it->second->mu);
    it->second->queue.push_back(msg);
  }
  it->second->cv.notify_one();
}

void LoopbackTransport::Stop() {
  if (!impl_) return;
  impl_->running = false;
  for (auto& [id, out] : impl_->outbound) {
    {
      std::lock_guard lock(out->mu);
    }
    out->cv.notify_all();
    if (out->worker.joinable()) out->worker.join();
  }
  impl_->outbound.clear();
  for (auto& [id, server] : impl_->servers) server->stop();
  for (auto& t : impl_->server_threads) {
    if (t.joinable()) t.join();
  }
  impl_->server_threads.clear();
  impl_->servers.clear();
}

// --- RaftCluster --------------------------------------------------------------

RaftCluster::RaftCluster(ClusterConfig config) : config_(std::move(config)) {
  std::uint64_t seed = config_.seed ? config_.seed : crypto::RandomU64();
  pid_salt_ = seed;
  for (NodeId id : config_.nodes) {
    std::vector<NodeId> peers;
    for (NodeId p : config_.nodes) {
      if (p != id) peers.push_back(p);
    }
    Node n;
    n.storage = std::make_shared<Storage>();
    n.raft = std::make_unique<RaftNode>(id, peers, config_.raft, n.storage,
                                        seed + id);
    nodes_.emplace(id, std::move(n));
  }
  if (config_.transport == TransportKind::kLoopback) {
    transport_ = std::make_unique<LoopbackTransport>(config_.loopback_base_port,
                                                     config_.nodes);
  } else {
    transport_ = std::make_unique<InMemoryTransport>();
  }
}

RaftCluster::~RaftCluster() { Stop(); }

Status RaftCluster::Start(CommitHandler handler) {
  handler_ = std::move(handler);
  CC_RETURN_IF_ERROR(
      transport_->Start([this](Message m) { OnMessage(std::move(m)); }));
  running_ = true;
  driver_ = std::thread([this] { DriverLoop(); });
  delivery_ = std::thread([this] { DeliveryLoop(); });
  return Status::Ok();
}

void RaftCluster::Stop() {
  if (!running_.exchange(false)) return;
  cv_.notify_all();
  delivery_cv_.notify_all();
  if (driver_.joinable()) driver_.join();
  if (delivery_.joinable()) delivery_.join();
  transport_->Stop();
  std::map<std::uint64_t, Pending> orphans;
  {
    std::lock_guard lock(mu_);
    orphans.swap(pending_);
  }
  for (auto& [pid, p] : orphans) {
    p.done(Error(ErrorCode::kOrderingUnavailable, "ordering stopped"));
  }
}

void RaftCluster::OnMessage(Message msg) {
  {
    std::lock_guard lock(mu_);
    auto it = nodes_.find(msg.to);
    if (it == nodes_.end() || !it->second.up) return;
    if (auto from = nodes_.find(msg.from);
        from == nodes_.end() || !from->second.up) {
      return;
    }
    inbox_.push_back(std::move(msg));
  }
  cv_.notify_all();
}

void RaftCluster::ProposeAsync(std::string data, ProposeCallback done,
                               std::optional<NodeId> via) {
  if (!running_) {
    done(Error(ErrorCode::kOrderingUnavailable, "ordering not running"));
    return;
  }
  {
    std::lock_guard lock(mu_);
    std::uint64_t pid = (pid_salt_ << 32) ^ next_pid_++;
    Pending p;
    p.done = std::move(done);
    p.deadline = Clock::now() + config_.propose_timeout;
    p.data = Envelope(pid, data);
    p.via = via;
    auto [it, inserted] = pending_.emplace(pid, std::move(p));
    TryPropose(pid, it->second);
  }
  cv_.notify_all();
}

Result<std::uint64_t> RaftCluster::Propose(std::string data,
                                           std::optional<NodeId> via) {
  auto promise = std::make_shared<std::promise<Result<std::uint64_t>>>();
  auto future = promise->get_future();
  ProposeAsync(
      std::move(data),
      [promise](Result<std::uint64_t> r) { promise->set_value(std::move(r)); },
      via);
  return future.get();
}

void RaftCluster::TryPropose(std::uint64_t, Pending& p) {
  std::optional<NodeId> target = p.via;
  if (!target || !nodes_.at(*target).up) {
    target.reset();
    for (auto& [id, n] : nodes_) {
      if (n.up && n.raft->role() == Role::kLeader) target = id;
    }
    if (!target) {
      for (auto& [id, n] : nodes_) {
        if (n.up && n.raft->leader()) {
          target = id;
          break;
        }
      }
    }
  }
  if (!target) return;
  p.accepted = node(*target).raft->Propose(p.data).ok();
}

void RaftCluster::CollectLocked(std::vector<Message>* out) {
  for (auto& [id, n] : nodes_) {
    if (!n.up) continue;
    for (auto& m : n.raft->TakeMessages()) out->push_back(std::move(m));
  }
}

void RaftCluster::DriverLoop() {
  std::set<std::uint64_t> seen_pids;
  std::set<std::uint64_t> committed_pids;
  auto next_tick = Clock::now() + config_.tick;
  std::uint64_t tick_count = 0;
  while (running_) {
    std::vector<Message> outgoing;
    std::vector<Pending> expired;
    bool queued = false;
    {
      std::unique_lock lock(mu_);
      cv_.wait_until(lock, next_tick,
                     [&] { return !running_ || !inbox_.empty(); });
      if (!running_) break;
      while (!inbox_.empty()) {
        Message m = std::move(inbox_.front());
        inbox_.pop_front();
        auto it = nodes_.find(m.to);
        if (it != nodes_.end() && it->second.up) it->second.raft->Step(m);
      }
      auto now = Clock::now();
      if (now >= next_tick) {
        next_tick = now + config_.tick;
        ++tick_count;
        for (auto& [id, n] : nodes_) {
          if (n.up) n.raft->Tick();
        }
        for (auto it = pending_.begin(); it != pending_.end();) {
          Pending& p = it->second;
          if (committed_pids.count(it->first)) {
            ++it;
            continue;
          }
          if (now >= p.deadline) {
            expired.push_back(std::move(p));
            it = pending_.erase(it);
            continue;
          }
          if (!p.accepted || tick_count % kResendTicks == 0) {
            TryPropose(it->first, p);
          }
          ++it;
        }
      }

      // Every up node's committed prefix agrees, so the furthest one is used.
      const Node* best = nullptr;
      for (auto& [id, n] : nodes_) {
        if (n.up && (!best || n.raft->commit_index() > best->raft->commit_index())) {
          best = &n;
        }
      }
      if (best) {
        std::lock_guard dlock(delivery_mu_);
        while (scanned_index_ < best->raft->commit_index()) {
          const Entry& e = best->raft->log()[scanned_index_];
          ++scanned_index_;
          if (e.type != EntryType::kNormal) continue;
          std::uint64_t pid;
          std::string data;
          if (!OpenEnvelope(e.data, &pid, &data)) continue;
          if (!seen_pids.insert(pid).second) continue;
          committed_pids.insert(pid);
          deliveries_.emplace_back(pid, std::move(data));
          queued = true;
        }
      }
      CollectLocked(&outgoing);
      // Prune ids whose pending entry is gone.
      for (auto it = committed_pids.begin(); it != committed_pids.end();) {
        if (!pending_.count(*it)) {
          it = committed_pids.erase(it);
        } else {
          ++it;
        }
      }
    }
    if (queued) delivery_cv_.notify_all();
    for (const auto& m : outgoing) transport_->Send(m);
    for (auto& p : expired) {
      p.done(Error(ErrorCode::kOrderingUnavailable,
                   "no majority within " +
                       std::to_string(config_.propose_timeout.count()) + " ms"));
    }
  }
}

void RaftCluster::DeliveryLoop() {
  while (true) {
    std::pair<std::uint64_t, std::string> item;
    {
      std::unique_lock lock(delivery_mu_);
      delivery_cv_.wait(lock,
                        [&] { return !running_ || !deliveries_.empty(); });
      if (deliveries_.empty()) return;
      item = std::move(deliveries_.front());
      deliveries_.pop_front();
    }
    std::uint64_t seq = delivered_seq_.load() + 1;
    if (handler_) handler_(seq, item.second);
    delivered_seq_.store(seq);
    std::optional<Pending> p;
    {
      std::lock_guard lock(mu_);
      auto it = pending_.find(item.first);
      if (it != pending_.end()) {
        p = std::move(it->second);
        pending_.erase(it);
      }
    }
    if (p) p->done(seq);
  }
}

void RaftCluster::Crash(NodeId id) {
  std::lock_guard lock(mu_);
  Node& n = node(id);
  if (!n.up) return;
  n.up = false;
  n.raft.reset();
  std::erase_if(inbox_, [id](const Message& m) {
    return m.to == id || m.from == id;
  });
}

void RaftCluster::Restart(NodeId id) {
  std::lock_guard lock(mu_);
  Node& n = node(id);
  if (n.up) return;
  std::vector<NodeId> peers;
  for (NodeId p : config_.nodes) {
    if (p != id) peers.push_back(p);
  }
  n.raft = std::make_unique<RaftNode>(id, peers, config_.raft, n.storage,
                                      crypto::RandomU64());
  n.up = true;
}

bool RaftCluster::IsUp(NodeId id) const {
  std::lock_guard lock(mu_);
  return nodes_.at(id).up;
}

std::optional<NodeId> RaftCluster::Leader() const {
  std::lock_guard lock(mu_);
  std::optional<NodeId> leader;
  std::uint64_t best_term = 0;
  for (const auto& [id, n] : nodes_) {
    if (n.up && n.raft->role() == Role::kLeader && n.raft->term() >= best_term) {
      best_term = n.raft->term();
      leader = id;
    }
  }
  return leader;
}

NodeStatus RaftCluster::StatusOf(NodeId id) const {
  std::lock_guard lock(mu_);
  const Node& n = nodes_.at(id);
  NodeStatus s;
  s.id = id;
  s.up = n.up;
  s.term = n.storage->term;
  s.last_index = n.storage->log.size();
  if (n.up) {
    s.role = n.raft->role();
    s.commit_index = n.raft->commit_index();
  }
  return s;
}

std::vector<NodeStatus> RaftCluster::Statuses() const {
  std::vector<NodeStatus> out;
  for (NodeId id : config_.nodes) out.push_back(StatusOf(id));
  return out;
}

std::vector<Entry> RaftCluster::CommittedLog(NodeId id) const {
  std::lock_guard lock(mu_);
  const Node& n = nodes_.at(id);
  if (!n.up) return {};
  const auto& log = n.raft->log();
  return {log.begin(), log.begin() + static_cast<std::ptrdiff_t>(
                                         n.raft->commit_index())};
}

}  // namespace classicschain::ledger::raft
