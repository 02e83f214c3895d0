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

#include <gtest/gtest.h>

#include "sim/raft_sim.h"

namespace classicschain::ledger::raft {
namespace {

using sim::RaftSim;

std::optional<NodeId> TheLeader(RaftSim& s) {
  std::optional<NodeId> leader;
  for (NodeId id : s.Up()) {
    if (s.node(id)->role() == Role::kLeader) {
      if (leader) return std::nullopt;  // two leaders in view; not settled
      leader = id;
    }
  }
  return leader;
}

TEST(RaftMessageTest, JsonRoundTrip) {
  Message m;
  m.type = MessageType::kAppend;
  m.from = 1;
  m.to = 3;
  m.term = 7;
  m.log_term = 6;
  m.index = 41;
  m.commit = 40;
  m.entries = {{7, 42, EntryType::kNormal, std::string("a\0b", 3)}, {7, 43, EntryType::kNoOp, ""}};
  auto back = Message::FromJson(m.ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->entries, m.entries);
  EXPECT_EQ(back->term, 7u);
  EXPECT_EQ(back->to, 3u);
  EXPECT_FALSE(Message::FromJson(Json{{"type", "bogus"}}).ok());
}

TEST(RaftNodeTest, ElectsOneLeaderAndReplicates) {
  RaftSim s(1);
  s.Run(100);
  auto leader = TheLeader(s);
  ASSERT_TRUE(leader.has_value());
  for (NodeId id : s.ids()) EXPECT_EQ(s.node(id)->leader(), leader);
  ASSERT_TRUE(s.Propose(*leader, "x"));
  s.Run(20);
  EXPECT_TRUE(s.CommittedOnAll("x"));
  EXPECT_TRUE(s.problems().empty());
}

TEST(RaftNodeTest, FollowerForwardsProposals) {
  RaftSim s(2);
  s.Run(100);
  auto leader = TheLeader(s);
  ASSERT_TRUE(leader);
  NodeId follower = *leader == 1 ? 2 : 1;
  ASSERT_TRUE(s.Propose(follower, "via-follower"));
  s.Run(20);
  EXPECT_TRUE(s.CommittedOnAll("via-follower"));
}

TEST(RaftNodeTest, NoLeaderRejectsProposals) {
  RaftSim s(3);
  // Before any election completes nobody knows a leader.
  EXPECT_FALSE(s.Propose(1, "early"));
}

TEST(RaftNodeTest, LeaderCrashElectsNewLeaderWithCommittedEntries) {
  RaftSim s(4);
  s.Run(100);
  auto leader = TheLeader(s);
  ASSERT_TRUE(leader);
  for (int i = 0; i < 5; ++i) ASSERT_TRUE(s.Propose(*leader, "e" + std::to_string(i)));
  s.Run(20);
  s.Crash(*leader);
  s.Run(200);
  auto next = TheLeader(s);
  ASSERT_TRUE(next);
  EXPECT_NE(*next, *leader);
  ASSERT_TRUE(s.Propose(*next, "after"));
  s.Run(20);
  s.Restart(*leader);
  s.Run(100);
  EXPECT_TRUE(s.CommittedOnAll("e4"));
  EXPECT_TRUE(s.CommittedOnAll("after"));
  EXPECT_TRUE(s.problems().empty());
}

TEST(RaftNodeTest, StaleLeaderStepsDownWithoutQuorum) {
  RaftSim s(5);
  s.Run(100);
  auto leader = TheLeader(s);
  ASSERT_TRUE(leader);
  for (NodeId id : s.ids()) {
    if (id != *leader) s.Crash(id);
  }
  s.Run(100);
  EXPECT_NE(s.node(*leader)->role(), Role::kLeader);
}

TEST(RaftNodeTest, HigherTermIsAdopted) {
  RaftSim s(6);
  s.Run(100);
  auto leader = TheLeader(s);
  ASSERT_TRUE(leader);
  std::uint64_t term = s.node(*leader)->term();
  Message m;
  m.type = MessageType::kVote;
  m.from = *leader == 1 ? 2 : 1;
  m.to = *leader;
  m.term = term + 5;
  m.log_term = 0;
  m.index = 0;
  s.node(*leader)->Step(m);
  EXPECT_EQ(s.node(*leader)->term(), term + 5);
  EXPECT_EQ(s.node(*leader)->role(), Role::kFollower);
  // The stale candidate's log is behind, so no vote is granted.
  auto out = s.node(*leader)->TakeMessages();
  ASSERT_FALSE(out.empty());
  EXPECT_TRUE(out.back().reject);
}

TEST(RaftScheduleTest, RandomSchedulesWithOneCrashStaySafeAndLive) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto r = sim::RunOneCrashSchedule(seed, 1500);
    for (const auto& p : r.problems) ADD_FAILURE() << "seed " << seed << ": " << p;
    EXPECT_TRUE(r.recovered) << "seed " << seed;
    EXPECT_GT(r.committed, 0u) << "seed " << seed;
  }
}

TEST(RaftScheduleTest, MajorityLossCommitsNothingThenRecovers) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = sim::RunMajorityLossSchedule(seed);
    EXPECT_EQ(r.committed_during, r.committed_before) << "seed " << seed;
    EXPECT_GT(r.ticks_to_recover, 0) << "seed " << seed;
    for (const auto& p : r.problems) ADD_FAILURE() << "seed " << seed << ": " << p;
  }
}

}  // namespace
}  // namespace classicschain::ledger::raft
