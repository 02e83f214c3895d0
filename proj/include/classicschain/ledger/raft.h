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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/status.h"

// Raft consensus for the ordering cluster. RaftNode is a deterministic state
// machine driven by Tick() and Step(); it never touches clocks, threads or
// sockets. Outgoing messages and newly committed entries are drained by the
// caller.
namespace classicschain::ledger::raft {

using NodeId = std::uint32_t;

enum class Role { kFollower, kCandidate, kLeader };
std::string_view RoleName(Role role);

enum class EntryType { kNormal, kNoOp };

struct Entry {
  std::uint64_t term = 0;
  std::uint64_t index = 0;
  EntryType type = EntryType::kNormal;
  std::string data;

  friend bool operator==(const Entry&, const Entry&) = default;
};

enum class MessageType {
  kVote,
  kVoteResponse,
  kAppend,
  kAppendResponse,
  kPropose,
};

struct Message {
  MessageType type = MessageType::kAppend;
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t term = 0;
  // kVote: candidate's last log term/index. kAppend: term/index of the entry
  // preceding `entries`. kAppendResponse: last matched index on success.
  std::uint64_t log_term = 0;
  std::uint64_t index = 0;
  std::vector<Entry> entries;
  std::uint64_t commit = 0;
  bool reject = false;
  std::uint64_t reject_hint = 0;

  Json ToJson() const;
  static Result<Message> FromJson(const Json& json);
};

// State that survives a crash: current term, vote and the log.
struct Storage {
  std::uint64_t term = 0;
  std::optional<NodeId> voted_for;
  std::vector<Entry> log;  // log[i].index == i + 1
};

struct RaftConfig {
  int election_ticks_min = 10;
  int election_ticks_max = 20;
  int heartbeat_ticks = 2;
  std::size_t max_entries_per_append = 64;
  // Leader steps down if it has not heard from a majority for an election
  // timeout.
  bool check_quorum = true;
};

class RaftNode {
 public:
  RaftNode(NodeId id, std::vector<NodeId> peers, RaftConfig config,
           std::shared_ptr<Storage> storage, std::uint64_t seed);

  void Tick();
  void Step(const Message& msg);

  // Appends on the leader, forwards to the known leader on a follower, and
  // fails with NO_LEADER otherwise.
  Status Propose(std::string data);

  std::vector<Message> TakeMessages();
  // Entries committed since the previous call, in index order. After a
  // restart this replays from index 1 as the commit index is relearned.
  std::vector<Entry> TakeCommitted();

  NodeId id() const { return id_; }
  Role role() const { return role_; }
  std::uint64_t term() const { return storage_->term; }
  std::optional<NodeId> leader() const { return leader_; }
  std::uint64_t commit_index() const { return commit_; }
  std::uint64_t last_index() const { return storage_->log.size(); }
  const std::vector<Entry>& log() const { return storage_->log; }

 private:
  std::uint64_t TermAt(std::uint64_t index) const;
  std::size_t Quorum() const { return (peers_.size() + 1) / 2 + 1; }

  void BecomeFollower(std::uint64_t term, std::optional<NodeId> leader);
  void BecomeCandidate();
  void BecomeLeader();
  void ResetElectionTimer();

  void Send(Message msg);
  void SendAppend(NodeId peer);
  void BroadcastAppend();
  void AppendLocal(EntryType type, std::string data);
  void MaybeAdvanceCommit();

  void HandleVote(const Message& m);
  void HandleVoteResponse(const Message& m);
  void HandleAppend(const Message& m);
  void HandleAppendResponse(const Message& m);
  void HandlePropose(const Message& m);

  NodeId id_;
  std::vector<NodeId> peers_;
  RaftConfig config_;
  std::shared_ptr<Storage> storage_;
  std::mt19937_64 rng_;

  Role role_ = Role::kFollower;
  std::optional<NodeId> leader_;
  std::uint64_t commit_ = 0;
  std::uint64_t applied_ = 0;
  int election_elapsed_ = 0;
  int heartbeat_elapsed_ = 0;
  int randomized_timeout_ = 0;

  std::map<NodeId, bool> votes_;
  std::map<NodeId, std::uint64_t> next_index_;
  std::map<NodeId, std::uint64_t> match_index_;
  std::map<NodeId, bool> recent_active_;

  std::vector<Message> outbox_;
};

}  // namespace classicschain::ledger::raft
