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

#include <gtest/gtest.h>

#include <map>
#include <random>

namespace classicschain::ledger {
namespace {

LedgerTransaction Tx(std::string id, std::vector<WriteItem> writes) {
  LedgerTransaction tx;
  tx.tx_id = std::move(id);
  tx.submitter.user_id = "alice";
  tx.submitter.org = identity::OrgName::kOwners;
  tx.function = "Put";
  tx.timestamp = 1700000000000;
  tx.write_set = std::move(writes);
  return tx;
}

Block MakeBlock(std::uint64_t n, std::vector<LedgerTransaction> txs,
                std::vector<ValidationCode> flags) {
  Block b;
  b.number = n;
  b.transactions = std::move(txs);
  b.validation_flags = std::move(flags);
  return b;
}

TEST(VersionedStoreTest, OnlyValidWritesApply) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1, {Tx("t1", {{"a", "1", false}}), Tx("t2", {{"b", "2", false}})},
                         {ValidationCode::kValid, ValidationCode::kMvccConflict}));
  auto snap = s.TakeSnapshot();
  EXPECT_EQ(snap.height(), 1u);
  EXPECT_EQ(snap.Get("a")->value, "1");
  EXPECT_EQ(snap.Get("a")->version, (Version{1, 0}));
  EXPECT_FALSE(snap.Get("b").has_value());
  EXPECT_FALSE(snap.VersionOf("b").has_value());
}

TEST(VersionedStoreTest, SnapshotsArePinned) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1, {Tx("t1", {{"k", "old", false}})}, {ValidationCode::kValid}));
  auto pinned = s.TakeSnapshot();
  s.ApplyBlock(MakeBlock(2, {Tx("t2", {{"k", "new", false}})}, {ValidationCode::kValid}));
  EXPECT_EQ(pinned.Get("k")->value, "old");
  EXPECT_EQ(s.TakeSnapshot().Get("k")->value, "new");
  EXPECT_EQ(pinned.History("k").size(), 1u);
  EXPECT_EQ(s.TakeSnapshot().History("k").size(), 2u);
}

TEST(VersionedStoreTest, DeletesHideValuesButKeepVersionAndHistory) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1, {Tx("t1", {{"k", "v", false}})}, {ValidationCode::kValid}));
  s.ApplyBlock(MakeBlock(2, {Tx("t2", {{"k", "", true}})}, {ValidationCode::kValid}));
  auto snap = s.TakeSnapshot();
  EXPECT_FALSE(snap.Get("k").has_value());
  EXPECT_EQ(snap.VersionOf("k"), (Version{2, 0}));
  auto h = snap.History("k");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].tx_id, "t1");
  EXPECT_TRUE(h[1].is_delete);
  EXPECT_EQ(h[1].submitter_org, "OwnersOrg");
  EXPECT_TRUE(snap.Scan("k").empty());
}

TEST(VersionedStoreTest, ScanIsPrefixBoundedAndOrdered) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1,
                         {Tx("t1", {{"step:A:2", "x", false},
                                    {"step:A:1", "y", false},
                                    {"step:AB:1", "z", false},
                                    {"steq", "w", false}})},
                         {ValidationCode::kValid}));
  auto rows = s.TakeSnapshot().Scan("step:A:");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].first, "step:A:1");
  EXPECT_EQ(rows[1].first, "step:A:2");
}

// Random blocks against a map-of-maps oracle: every snapshot height must
// show exactly the oracle's state after that block.
TEST(VersionedStoreTest, MatchesOracleAtEveryHeight) {
  std::mt19937_64 rng(17);
  VersionedStore s;
  std::vector<std::map<std::string, std::string>> states(1);
  for (std::uint64_t n = 1; n <= 60; ++n) {
    std::map<std::string, std::string> state = states.back();
    std::vector<LedgerTransaction> txs;
    std::vector<ValidationCode> flags;
    int count = 1 + rng() % 4;
    for (int t = 0; t < count; ++t) {
      std::vector<WriteItem> writes;
      std::map<std::string, WriteItem> by_key;
      for (int w = 0; w < 1 + static_cast<int>(rng() % 3); ++w) {
        std::string key = "k" + std::to_string(rng() % 12);
        bool del = rng() % 4 == 0;
        by_key[key] = {key, del ? "" : "v" + std::to_string(rng() % 1000), del};
      }
      for (auto& [k, w] : by_key) writes.push_back(w);
      bool valid = rng() % 3 != 0;
      if (valid) {
        for (const auto& w : writes) {
          if (w.is_delete) {
            state.erase(w.key);
          } else {
            state[w.key] = w.value;
          }
        }
      }
      txs.push_back(Tx("b" + std::to_string(n) + "t" + std::to_string(t), writes));
      flags.push_back(valid ? ValidationCode::kValid : ValidationCode::kMvccConflict);
    }
    s.ApplyBlock(MakeBlock(n, txs, flags));
    states.push_back(state);
  }
  for (std::uint64_t h = 0; h < states.size(); ++h) {
    VersionedStore::Snapshot snap(&s, h);
    std::map<std::string, std::string> seen;
    for (const auto& [k, v] : snap.Scan("k")) seen[k] = v.value;
    ASSERT_EQ(seen, states[h]) << "height " << h;
    for (int k = 0; k < 12; ++k) {
      std::string key = "k" + std::to_string(k);
      auto got = snap.Get(key);
      auto want = states[h].find(key);
      ASSERT_EQ(got.has_value(), want != states[h].end()) << key << "@" << h;
    }
  }
}

TEST(TxContextTest, RecordsFirstReadVersionAndLastWrite) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1, {Tx("t1", {{"a", "1", false}})}, {ValidationCode::kValid}));
  auto snap = s.TakeSnapshot();
  TxContext ctx(snap, {}, "Put", {}, 0);
  EXPECT_EQ(ctx.GetState("a"), "1");
  EXPECT_FALSE(ctx.GetState("missing").has_value());
  ctx.PutState("a", "2");
  EXPECT_EQ(ctx.GetState("a"), "2");  // own pending write
  ctx.PutState("a", "3");
  ctx.DelState("b");
  EXPECT_EQ(ctx.PeekState("zzz"), std::nullopt);
  auto reads = ctx.read_set();
  ASSERT_EQ(reads.size(), 2u);
  EXPECT_EQ(reads[0], (ReadItem{"a", Version{1, 0}}));
  EXPECT_EQ(reads[1], (ReadItem{"missing", std::nullopt}));
  auto writes = ctx.write_set();
  ASSERT_EQ(writes.size(), 2u);
  EXPECT_EQ(writes[0], (WriteItem{"a", "3", false}));
  EXPECT_EQ(writes[1], (WriteItem{"b", "", true}));
  EXPECT_TRUE(ctx.writes("b"));
}

TEST(TxContextTest, PrefixReadsSeePendingWrites) {
  VersionedStore s;
  s.ApplyBlock(MakeBlock(1, {Tx("t1", {{"p:1", "a", false}, {"p:2", "b", false}})},
                         {ValidationCode::kValid}));
  auto snap = s.TakeSnapshot();
  TxContext ctx(snap, {}, "Put", {}, 0);
  ctx.PutState("p:3", "c");
  ctx.DelState("p:1");
  auto rows = ctx.GetStateByPrefix("p:");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::pair<std::string, std::string>{"p:2", "b"}));
  EXPECT_EQ(rows[1], (std::pair<std::string, std::string>{"p:3", "c"}));
}

}  // namespace
}  // namespace classicschain::ledger
