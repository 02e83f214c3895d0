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

#include <array>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"
#include "classicschain/ledger/raft.h"

namespace classicschain::ledger::raft {

// Moves messages between nodes. Implementations call the delivery function
// from any thread.
class Transport {
 public:
  using Deliver = std::function<void(Message)>;
  virtual ~Transport() = default;
  virtual Status Start(Deliver deliver) = 0;
  virtual void Send(const Message& msg) = 0;
  virtual void Stop() = 0;
};

// Direct in-process hand-off.
class InMemoryTransport final : public Transport {
 public:
  Status Start(Deliver deliver) override;
  void Send(const Message& msg) override;
  void Stop() override;

 private:
  std::mutex mu_;
  Deliver deliver_;
};

// JSON messages POSTed over 127.0.0.1 to one small HTTP listener per node
// (port = base_port + node id).
class LoopbackTransport final : public Transport {
 public:
  LoopbackTransport(std::uint16_t base_port, std::vector<NodeId> nodes);
  ~LoopbackTransport() override;
  Status Start(Deliver deliver) override;
  void Send(const Message& msg) override;
  void Stop() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class TransportKind { kInMemory, kLoopback };

struct ClusterConfig {
  std::vector<NodeId> nodes{1, 2, 3};
  Millis tick{10};
  RaftConfig raft;
  // How long a proposal may wait for a leader and a majority.
  Millis propose_timeout{3000};
  TransportKind transport = TransportKind::kInMemory;
  std::uint16_t loopback_base_port = 17050;
  std::uint64_t seed = 0;  // 0: random
};

struct NodeStatus {
  NodeId id = 0;
  bool up = false;
  Role role = Role::kFollower;
  std::uint64_t term = 0;
  std::uint64_t commit_index = 0;
  std::uint64_t last_index = 0;
};

// Three (by default) in-process Raft nodes driven by a ticking thread. The
// cluster turns the nodes' commit streams into one ordered stream of
// committed proposals, delivered exactly once each to the commit handler.
class RaftCluster {
 public:
  // index: position of the proposal in the committed stream (1-based).
  using CommitHandler =
      std::function<void(std::uint64_t index, const std::string& data)>;
  using ProposeCallback = std::function<void(Result<std::uint64_t>)>;

  explicit RaftCluster(ClusterConfig config);
  ~RaftCluster();

  Status Start(CommitHandler handler);
  void Stop();

  // Replicates `data` to a majority. The callback runs after the commit
  // handler has processed the entry, or with ORDERING_UNAVAILABLE once
  // propose_timeout passes without a commit. `via` selects the node that
  // receives the proposal (it forwards to the leader).
  void ProposeAsync(std::string data, ProposeCallback done,
                    std::optional<NodeId> via = {});
  Result<std::uint64_t> Propose(std::string data,
                                std::optional<NodeId> via = {});

  // Fault injection. A crashed node loses volatile state and in-flight
  // messages but keeps its persisted term, vote and log.
  void Crash(NodeId id);
  void Restart(NodeId id);
  bool IsUp(NodeId id) const;

  std::optional<NodeId> Leader() const;
  NodeStatus StatusOf(NodeId id) const;
  std::vector<NodeStatus> Statuses() const;
  // Committed prefix of one node's log.
  std::vector<Entry> CommittedLog(NodeId id) const;
  std::uint64_t delivered() const { return delivered_seq_.load(); }
  const ClusterConfig& config() const { return config_; }

 private:
  struct Node {
    std::shared_ptr<Storage> storage;
    std::unique_ptr<RaftNode> raft;
    bool up = true;
  };
  struct Pending {
    ProposeCallback done;
    SteadyTime deadline;
    std::string data;
    std::optional<NodeId> via;
    bool accepted = false;
  };

  void DriverLoop();
  void DeliveryLoop();
  void OnMessage(Message msg);
  // Requires mu_.
  void TryPropose(std::uint64_t pid, Pending& p);
  void CollectLocked(std::vector<Message>* out);
  Node& node(NodeId id) { return nodes_.at(id); }

  ClusterConfig config_;
  std::unique_ptr<Transport> transport_;
  CommitHandler handler_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<NodeId, Node> nodes_;
  std::deque<Message> inbox_;
  std::map<std::uint64_t, Pending> pending_;
  std::uint64_t next_pid_ = 1;
  std::uint64_t pid_salt_ = 0;
  std::uint64_t scanned_index_ = 0;  // raft index consumed into deliveries_

  std::mutex delivery_mu_;
  std::condition_variable delivery_cv_;
  std::deque<std::pair<std::uint64_t, std::string>> deliveries_;  // pid, data
  std::atomic<std::uint64_t> delivered_seq_{0};

  std::atomic<bool> running_{false};
  std::thread driver_;
  std::thread delivery_;
};

}  // namespace classicschain::ledger::raft
