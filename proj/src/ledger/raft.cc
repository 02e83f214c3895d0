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

#include "classicschain/ledger/raft.h"

#include <algorithm>

#include "classicschain/common/crypto.h"

namespace classicschain::ledger::raft {

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kFollower: return "Follower";
    case Role::kCandidate: return "Candidate";
    case Role::kLeader: return "Leader";
  }
  return "Follower";
}

// --- wire form (loopback transport) -----------------------------------------

Json Message::ToJson() const {
  Json ents = Json::array();
  for (const auto& e : entries) {
    ents.push_back(Json{{"data", crypto::Base64Encode(e.data)},
                        {"index", e.index},
                        {"term", e.term},
                        {"type", e.type == EntryType::kNoOp ? "noop" : "normal"}});
  }
  return Json{{"commit", commit},     {"entries", ents},
              {"from", from},         {"index", index},
              {"logTerm", log_term},  {"reject", reject},
              {"rejectHint", reject_hint}, {"term", term},
              {"to", to},             {"type", static_cast<int>(type)}};
}

Result<Message> Message::FromJson(const Json& j) {
  try {
    Message m;
    int type = j.at("type").get<int>();
    if (type < 0 || type > static_cast<int>(MessageType::kPropose)) {
      return Error(ErrorCode::kInvalidArgument, "bad raft message type");
    }
    m.type = static_cast<MessageType>(type);
    m.from = j.at("from").get<NodeId>();
    m.to = j.at("to").get<NodeId>();
    m.term = j.at("term").get<std::uint64_t>();
    m.log_term = j.at("logTerm").get<std::uint64_t>();
    m.index = j.at("index").get<std::uint64_t>();
    m.commit = j.at("commit").get<std::uint64_t>();
    m.reject = j.at("reject").get<bool>();
    m.reject_hint = j.at("rejectHint").get<std::uint64_t>();
    for (const auto& e : j.at("entries")) {
      Entry entry;
      entry.term = e.at("term").get<std::uint64_t>();
      entry.index = e.at("index").get<std::uint64_t>();
      entry.type = e.at("type") == "noop" ? EntryType::kNoOp : EntryType::kNormal;
      auto data = crypto::Base64Decode(e.at("data").get<std::string>());
      if (!data) return Error(ErrorCode::kInvalidArgument, "bad entry data");
      entry.data = std::move(*data);
      m.entries.push_back(std::move(entry));
    }
    return m;
  } catch (const Json::exception& e) {
    return Error(ErrorCode::kInvalidArgument, e.what());
  }
}

// --- RaftNode ---------------------------------------------------------------

RaftNode::RaftNode(NodeId id, std::vector<NodeId> peers, RaftConfig config,
                   std::shared_ptr<Storage> storage, std::uint64_t seed)
    : id_(id),
      peers_(std::move(peers)),
      config_(config),
      storage_(std::move(storage)),
      rng_(seed) {
  peers_.erase(std::remove(peers_.begin(), peers_.end(), id_), peers_.end());
  ResetElectionTimer();
}

std::uint64_t RaftNode::TermAt(std::uint64_t index) const {
  if (index == 0 || index > storage_->log.size()) return 0;
  return storage_->log[index - 1].term;
}

void RaftNode::ResetElectionTimer() {
  election_elapsed_ = 0;
  std::uniform_int_distribution<int> dist(config_.election_ticks_min,
                                          config_.election_ticks_max);
  randomized_timeout_ = dist(rng_);
}

void RaftNode::BecomeFollower(std::uint64_t term, std::optional<NodeId> leader) {
  if (term > storage_->term) {
    storage_->term = term;
    storage_->voted_for.reset();
  }
  role_ = Role::kFollower;
  leader_ = leader;
  ResetElectionTimer();
}

void RaftNode::BecomeCandidate() {
  role_ = Role::kCandidate;
  storage_->term += 1;
  storage_->voted_for = id_;
  leader_.reset();
  votes_.clear();
  votes_[id_] = true;
  ResetElectionTimer();
  if (votes_.size() >= Quorum()) {
    BecomeLeader();
    return;
  }
  for (NodeId p : peers_) {
    Message m;
    m.type = MessageType::kVote;
    m.to = p;
    m.log_term = TermAt(last_index());
    m.index = last_index();
    Send(std::move(m));
  }
}

void RaftNode::BecomeLeader() {
  role_ = Role::kLeader;
  leader_ = id_;
  heartbeat_elapsed_ = 0;
  election_elapsed_ = 0;
  next_index_.clear();
  match_index_.clear();
  recent_active_.clear();
  for (NodeId p : peers_) {
    next_index_[p] = last_index() + 1;
    match_index_[p] = 0;
  }
  // Committing an entry of the new term also commits everything before it.
  AppendLocal(EntryType::kNoOp, {});
  BroadcastAppend();
}

void RaftNode::Send(Message msg) {
  msg.from = id_;
  msg.term = storage_->term;
  outbox_.push_back(std::move(msg));
}

void RaftNode::SendAppend(NodeId peer) {
  std::uint64_t next = next_index_[peer];
  Message m;
  m.type = MessageType::kAppend;
  m.to = peer;
  m.index = next - 1;
  m.log_term = TermAt(next - 1);
  m.commit = commit_;
  for (std::uint64_t i = next;
       i <= last_index() && m.entries.size() < config_.max_entries_per_append;
       ++i) {
    m.entries.push_back(storage_->log[i - 1]);
  }
  Send(std::move(m));
}

void RaftNode::BroadcastAppend() {
  for (NodeId p : peers_) SendAppend(p);
}

void RaftNode::AppendLocal(EntryType type, std::string data) {
  Entry e;
  e.term = storage_->term;
  e.index = last_index() + 1;
  e.type = type;
  e.data = std::move(data);
  storage_->log.push_back(std::move(e));
  MaybeAdvanceCommit();
}

void RaftNode::MaybeAdvanceCommit() {
  if (role_ != Role::kLeader) return;
  std::vector<std::uint64_t> matches{last_index()};
  for (NodeId p : peers_) matches.push_back(match_index_[p]);
  std::sort(matches.begin(), matches.end(), std::greater<>());
  std::uint64_t candidate = matches[Quorum() - 1];
  // Only entries from the current term are committed by counting replicas.
  if (candidate > commit_ && TermAt(candidate) == storage_->term) {
    commit_ = candidate;
  }
}

void RaftNode::Tick() {
  if (role_ == Role::kLeader) {
    if (++heartbeat_elapsed_ >= config_.heartbeat_ticks) {
      heartbeat_elapsed_ = 0;
      BroadcastAppend();
    }
    if (config_.check_quorum && ++election_elapsed_ >= config_.election_ticks_min) {
      election_elapsed_ = 0;
      std::size_t active = 1;
      for (NodeId p : peers_) active += recent_active_[p] ? 1 : 0;
      recent_active_.clear();
      if (active < Quorum()) BecomeFollower(storage_->term, std::nullopt);
    }
    return;
  }
  if (++election_elapsed_ >= randomized_timeout_) BecomeCandidate();
}

Status RaftNode::Propose(std::string data) {
  if (role_ == Role::kLeader) {
    AppendLocal(EntryType::kNormal, std::move(data));
    BroadcastAppend();
    return Status::Ok();
  }
  if (leader_) {
    Message m;
    m.type = MessageType::kPropose;
    m.to = *leader_;
    Entry e;
    e.data = std::move(data);
    m.entries.push_back(std::move(e));
    Send(std::move(m));
    return Status::Ok();
  }
  return Error(ErrorCode::kNoLeader, "no leader known");
}

void RaftNode::Step(const Message& m) {
  if (m.to != id_) return;
  if (m.term > storage_->term) {
    // A vote request does not imply a leader; an append does.
    std::optional<NodeId> leader;
    if (m.type == MessageType::kAppend) leader = m.from;
    BecomeFollower(m.term, leader);
  }
  switch (m.type) {
    case MessageType::kVote: HandleVote(m); break;
    case MessageType::kVoteResponse: HandleVoteResponse(m); break;
    case MessageType::kAppend: HandleAppend(m); break;
    case MessageType::kAppendResponse: HandleAppendResponse(m); break;
    case MessageType::kPropose: HandlePropose(m); break;
  }
}

void RaftNode::HandleVote(const Message& m) {
  Message resp;
  resp.type = MessageType::kVoteResponse;
  resp.to = m.from;
  bool can_vote = m.term == storage_->term &&
                  (!storage_->voted_for || *storage_->voted_for == m.from);
  std::uint64_t my_last_term = TermAt(last_index());
  bool up_to_date = m.log_term > my_last_term ||
                    (m.log_term == my_last_term && m.index >= last_index());
  if (can_vote && up_to_date && role_ != Role::kLeader) {
    storage_->voted_for = m.from;
    resp.reject = false;
    election_elapsed_ = 0;
  } else {
    resp.reject = true;
  }
  Send(std::move(resp));
}

void RaftNode::HandleVoteResponse(const Message& m) {
  if (role_ != Role::kCandidate || m.term != storage_->term) return;
  votes_[m.from] = !m.reject;
  std::size_t granted = 0;
  for (const auto& [id, yes] : votes_) granted += yes ? 1 : 0;
  if (granted >= Quorum()) BecomeLeader();
}

void RaftNode::HandleAppend(const Message& m) {
  Message resp;
  resp.type = MessageType::kAppendResponse;
  resp.to = m.from;
  if (m.term < storage_->term) {
    resp.reject = true;
    resp.reject_hint = last_index();
    Send(std::move(resp));
    return;
  }
  // Same term: the sender is the leader of this term.
  if (role_ != Role::kFollower || leader_ != m.from) {
    role_ = Role::kFollower;
    leader_ = m.from;
  }
  election_elapsed_ = 0;

  if (m.index > last_index() || TermAt(m.index) != m.log_term) {
    resp.reject = true;
    // Skip back over the whole conflicting term in one round trip.
    std::uint64_t hint = std::min<std::uint64_t>(m.index - 1, last_index());
    if (m.index <= last_index()) {
      std::uint64_t bad_term = TermAt(m.index);
      while (hint > 0 && TermAt(hint) == bad_term) --hint;
    }
    resp.reject_hint = hint;
    Send(std::move(resp));
    return;
  }

  for (const Entry& e : m.entries) {
    if (e.index <= last_index()) {
      if (TermAt(e.index) == e.term) continue;
      // Conflict: a committed entry can never be overwritten.
      storage_->log.resize(e.index - 1);
    }
    storage_->log.push_back(e);
  }
  std::uint64_t last_new = m.index + m.entries.size();
  if (m.commit > commit_) commit_ = std::min(m.commit, last_new);
  resp.reject = false;
  resp.index = last_new;
  Send(std::move(resp));
}

void RaftNode::HandleAppendResponse(const Message& m) {
  if (role_ != Role::kLeader || m.term != storage_->term) return;
  recent_active_[m.from] = true;
  if (m.reject) {
    std::uint64_t& next = next_index_[m.from];
    next = std::max<std::uint64_t>(1, std::min(next - 1, m.reject_hint + 1));
    SendAppend(m.from);
    return;
  }
  if (m.index > match_index_[m.from]) {
    match_index_[m.from] = m.index;
    MaybeAdvanceCommit();
  }
  next_index_[m.from] = std::max(next_index_[m.from], m.index + 1);
  if (next_index_[m.from] <= last_index()) SendAppend(m.from);
}

void RaftNode::HandlePropose(const Message& m) {
  if (role_ != Role::kLeader) {
    if (leader_ && *leader_ != id_ && m.from != *leader_) {
      Message fwd = m;
      fwd.to = *leader_;
      Send(std::move(fwd));
    }
    return;
  }
  for (const Entry& e : m.entries) AppendLocal(EntryType::kNormal, e.data);
  BroadcastAppend();
}

std::vector<Message> RaftNode::TakeMessages() {
  std::vector<Message> out;
  out.swap(outbox_);
  return out;
}

std::vector<Entry> RaftNode::TakeCommitted() {
  std::vector<Entry> out;
  while (applied_ < commit_) {
    ++applied_;
    out.push_back(storage_->log[applied_ - 1]);
  }
  return out;
}

}  // namespace classicschain::ledger::raft
