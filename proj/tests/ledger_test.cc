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


#include "classicschain/ledger/ledger.h"

#include <gtest/gtest.h>

#include <atomic>
#include <future>
#include <thread>

#include "classicschain/ledger/block_cutter.h"
#include "test_util.h"

namespace classicschain::ledger {
namespace {

using identity::Identity;
using identity::Membership;
using identity::OrgName;
using identity::Role;
using testing::FastLedgerConfig;
using testing::KvChaincode;
using testing::TempDir;

std::shared_ptr<Membership> NewMembership(const std::filesystem::path& dir = {}) {
  return std::shared_ptr<Membership>(Membership::Open(dir).value().release());
}

std::unique_ptr<Ledger> OpenLedger(std::shared_ptr<Membership> m,
                                   LedgerConfig config = FastLedgerConfig()) {
  auto r = Ledger::Open(std::move(config), std::move(m),
                        std::make_shared<KvChaincode>());
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.error().ToString());
  return std::move(r).value();
}

class LedgerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    membership_ = NewMembership();
    alice_ = membership_->Enroll(OrgName::kOwners, "alice", Role::kOwner).value();
    bob_ = membership_->Enroll(OrgName::kWorkshops, "bob", Role::kRestorer).value();
    ledger_ = OpenLedger(membership_);
  }

  std::shared_ptr<Membership> membership_;
  Identity alice_;
  Identity bob_;
  std::unique_ptr<Ledger> ledger_;
};

TEST_F(LedgerTest, GenesisOnly) {
  EXPECT_EQ(ledger_->Height(), 1u);
  auto genesis = ledger_->GetBlock(0).value();
  EXPECT_EQ(genesis.previous_hash, ZeroHash());
  ASSERT_TRUE(genesis.config.has_value());
  EXPECT_EQ((*genesis.config)["channel"], "classics-main");
  EXPECT_TRUE(ledger_->VerifyChain().ok);
}

TEST_F(LedgerTest, SubmitCommitsIntoNextBlock) {
  auto r = ledger_->SubmitTransaction(alice_, "Put", {"k", "v1"});
  ASSERT_TRUE(r.ok()) << r.error().ToString();
  EXPECT_EQ(r->block, 1u);
  EXPECT_EQ(r->response, "v1");
  EXPECT_EQ(ledger_->Height(), 2u);
  auto v = ledger_->GetState("k");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->value, "v1");
  EXPECT_EQ(v->version, (Version{1, 0}));

  auto block = ledger_->GetBlock(1).value();
  ASSERT_EQ(block.transactions.size(), 1u);
  EXPECT_EQ(block.transactions[0].tx_id, r->tx_id);
  EXPECT_EQ(block.validation_flags[0], ValidationCode::kValid);
  EXPECT_EQ(block.previous_hash, ledger_->GetBlock(0)->HeaderDigest());
  EXPECT_TRUE(ledger_->VerifyChain().ok);
}

TEST_F(LedgerTest, UnknownFunctionIsRejectedBeforeOrdering) {
  auto r = ledger_->SubmitTransaction(alice_, "Nope", {});
  EXPECT_EQ(r.code(), ErrorCode::kUnknownFunction);
  EXPECT_EQ(ledger_->Height(), 1u);
}

TEST_F(LedgerTest, ContractErrorIsReturnedAndNothingCommits) {
  auto r = ledger_->SubmitTransaction(alice_, "Fail", {"AUTH_DENIED"});
  EXPECT_EQ(r.code(), ErrorCode::kAuthDenied);
  EXPECT_EQ(ledger_->Height(), 1u);
}

TEST_F(LedgerTest, HistoryListsEveryWriteOldestFirst) {
  EXPECT_TRUE(ledger_->GetHistoryForKey("never").empty());
  for (int i = 0; i < 4; ++i) {
    ASSERT_TRUE(ledger_->SubmitTransaction(bob_, "Incr", {"c"}).ok());
  }
  auto h = ledger_->GetHistoryForKey("c");
  ASSERT_EQ(h.size(), 4u);
  for (std::size_t i = 1; i < h.size(); ++i) {
    EXPECT_LT(h[i - 1].version, h[i].version);
  }
  EXPECT_EQ(h.back().value, ledger_->GetState("c")->value);
  EXPECT_EQ(h.back().value, "4");
  EXPECT_EQ(h.front().submitter_user, "bob");
  EXPECT_EQ(h.front().submitter_org, "WorkshopsOrg");
  EXPECT_EQ(h.front().function, "Incr");
}

TEST_F(LedgerTest, DeleteIsRecordedInHistory) {
  ASSERT_TRUE(ledger_->SubmitTransaction(alice_, "Put", {"d", "x"}).ok());
  ASSERT_TRUE(ledger_->SubmitTransaction(alice_, "Del", {"d"}).ok());
  EXPECT_FALSE(ledger_->GetState("d").has_value());
  auto h = ledger_->GetHistoryForKey("d");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_TRUE(h[1].is_delete);
}

TEST_F(LedgerTest, QueriesLeaveLedgerUntouched) {
  ASSERT_TRUE(ledger_->SubmitTransaction(alice_, "Put", {"q", "1"}).ok());
  auto before = ledger_->GetBlock(1)->Encode();
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(ledger_->EvaluateQuery(alice_, "Get", {"q"}).value(), "1");
  }
  EXPECT_EQ(ledger_->Height(), 2u);
  EXPECT_EQ(ledger_->GetBlock(1)->Encode(), before);
}

TEST_F(LedgerTest, ConflictingRaceYieldsOneValidOneConflict) {
  ASSERT_TRUE(ledger_->SubmitTransaction(alice_, "Put", {"n", "0"}).ok());
  auto a = ledger_->Simulate(alice_, "Incr", {"n"}).value();
  auto b = ledger_->Simulate(bob_, "Incr", {"n"}).value();
  auto fa = std::async(std::launch::async,
                       [&] { return ledger_->SubmitPrepared(a); });
  auto fb = std::async(std::launch::async,
                       [&] { return ledger_->SubmitPrepared(b); });
  auto ra = fa.get();
  auto rb = fb.get();
  EXPECT_NE(ra.ok(), rb.ok());
  const auto& failed = ra.ok() ? rb : ra;
  EXPECT_EQ(failed.code(), ErrorCode::kMvccConflict);
  EXPECT_EQ(ledger_->GetState("n")->value, "1");
}

TEST_F(LedgerTest, FirstWriterWinsWithinOneBlock) {
  auto config = FastLedgerConfig();
  config.batch_timeout = Millis(300);
  auto ledger = OpenLedger(membership_, config);
  ASSERT_TRUE(ledger->SubmitTransaction(alice_, "Put", {"n", "0"}).ok());
  auto a = ledger->Simulate(alice_, "Incr", {"n"}).value();
  auto b = ledger->Simulate(bob_, "Incr", {"n"}).value();
  std::promise<Result<SubmitResult>> pa, pb;
  ledger->SubmitPreparedAsync(a, [&](Result<SubmitResult> r) { pa.set_value(r); });
  ledger->SubmitPreparedAsync(b, [&](Result<SubmitResult> r) { pb.set_value(r); });
  auto ra = pa.get_future().get();
  auto rb = pb.get_future().get();
  ASSERT_TRUE(ra.ok());
  EXPECT_EQ(rb.code(), ErrorCode::kMvccConflict);
  auto block = ledger->GetBlock(ra->block).value();
  ASSERT_EQ(block.validation_flags.size(), 2u);
  EXPECT_EQ(block.validation_flags[0], ValidationCode::kValid);
  EXPECT_EQ(block.validation_flags[1], ValidationCode::kMvccConflict);
}

TEST_F(LedgerTest, NonConflictingRaceBothValid) {
  auto a = ledger_->Simulate(alice_, "Incr", {"x"}).value();
  auto b = ledger_->Simulate(bob_, "Incr", {"y"}).value();
  auto fa = std::async(std::launch::async,
                       [&] { return ledger_->SubmitPrepared(a); });
  auto fb = std::async(std::launch::async,
                       [&] { return ledger_->SubmitPrepared(b); });
  EXPECT_TRUE(fa.get().ok());
  EXPECT_TRUE(fb.get().ok());
}

TEST_F(LedgerTest, DuplicateTransactionIsFlagged) {
  auto a = ledger_->Simulate(alice_, "Put", {"dup", "1"}).value();
  ASSERT_TRUE(ledger_->SubmitPrepared(a).ok());
  EXPECT_EQ(ledger_->SubmitPrepared(a).code(), ErrorCode::kMvccConflict);
}

TEST_F(LedgerTest, TamperedClientSignatureIsFlagged) {
  auto a = ledger_->Simulate(alice_, "Put", {"s", "1"}).value();
  a.tx.args[1] = "2";  // payload no longer matches the signature
  a.tx.tx_id = a.tx.ComputeTxId();
  auto r = ledger_->SubmitPrepared(a);
  EXPECT_EQ(r.code(), ErrorCode::kBadSignature);
  EXPECT_FALSE(ledger_->GetState("s").has_value());
  auto block = ledger_->GetBlock(1).value();
  EXPECT_EQ(block.validation_flags[0], ValidationCode::kBadSignature);
  EXPECT_TRUE(ledger_->VerifyChain().ok);
}

TEST_F(LedgerTest, WrongTxIdIsFlagged) {
  auto a = ledger_->Simulate(alice_, "Put", {"s", "1"}).value();
  a.tx.tx_id = std::string(64, 'a');
  EXPECT_EQ(ledger_->SubmitPrepared(a).code(), ErrorCode::kBadSignature);
}

TEST_F(LedgerTest, NonPeerSubmitterFailsEndorsement) {
  auto orderer = membership_->Find(OrgName::kOrderers, "orderer1").value();
  auto r = ledger_->SubmitTransaction(orderer, "Put", {"e", "1"});
  EXPECT_EQ(r.code(), ErrorCode::kEndorsementFailure);
}

TEST_F(LedgerTest, ForgedCertificateIsRejected) {
  Identity forged = alice_;
  forged.certificate.attributes["role"] = "certifier";
  auto r = ledger_->SubmitTransaction(forged, "Put", {"f", "1"});
  EXPECT_EQ(r.code(), ErrorCode::kMalformedCert);
}

TEST_F(LedgerTest, NoMajorityMeansUnavailableAndNoBlocks) {
  auto config = FastLedgerConfig();
  config.ordering.propose_timeout = Millis(500);
  auto ledger = OpenLedger(membership_, config);
  ASSERT_TRUE(ledger->SubmitTransaction(alice_, "Put", {"m", "1"}).ok());
  ledger->ordering().Crash(1);
  ledger->ordering().Crash(2);
  auto height = ledger->Height();
  auto r = ledger->SubmitTransaction(alice_, "Put", {"m", "2"});
  EXPECT_EQ(r.code(), ErrorCode::kOrderingUnavailable);
  std::this_thread::sleep_for(Millis(200));
  EXPECT_EQ(ledger->Height(), height);
}

TEST_F(LedgerTest, SurvivesOneCrashedOrderer) {
  ledger_->ordering().Crash(1);
  for (int i = 0; i < 5; ++i) {
    auto r = ledger_->SubmitTransaction(alice_, "Incr", {"live"});
    ASSERT_TRUE(r.ok()) << r.error().ToString();
  }
  ledger_->ordering().Restart(1);
  ASSERT_TRUE(ledger_->SubmitTransaction(alice_, "Incr", {"live"}).ok());
  EXPECT_EQ(ledger_->GetState("live")->value, "6");
}

TEST_F(LedgerTest, BlockListenerSeesCommittedBlocks) {
  std::atomic<int> seen{0};
  std::atomic<std::uint64_t> last{0};
  ledger_->AddBlockListener([&](const Block& b) {
    ++seen;
    last = b.number;
  });
  auto r = ledger_->SubmitTransaction(alice_, "Put", {"l", "1"});
  ASSERT_TRUE(r.ok());
  for (int i = 0; i < 100 && seen == 0; ++i) std::this_thread::sleep_for(Millis(5));
  EXPECT_EQ(seen.load(), 1);
  EXPECT_EQ(last.load(), r->block);
}

TEST_F(LedgerTest, BurstIsBatched) {
  constexpr int kTxs = 25;
  auto config = FastLedgerConfig();
  config.batch_timeout = Millis(2000);
  auto ledger = OpenLedger(membership_, config);
  std::vector<PreparedTransaction> txs;
  for (int i = 0; i < kTxs; ++i) {
    txs.push_back(
        ledger->Simulate(alice_, "Put", {"b" + std::to_string(i), "v"}).value());
  }
  std::atomic<int> done{0};
  for (auto& tx : txs) {
    ledger->SubmitPreparedAsync(tx, [&](Result<SubmitResult> r) {
      EXPECT_TRUE(r.ok());
      ++done;
    });
  }
  for (int i = 0; i < 600 && done < kTxs; ++i) std::this_thread::sleep_for(Millis(10));
  ASSERT_EQ(done.load(), kTxs);
  std::vector<std::size_t> sizes;
  for (std::uint64_t n = 1; n < ledger->Height(); ++n) {
    sizes.push_back(ledger->GetBlock(n)->transactions.size());
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{10, 10, 5}));
}

TEST(LedgerPersistence, ReopenReplaysState) {
  TempDir dir;
  auto membership = NewMembership(dir / "wallet");
  auto alice = membership->Enroll(OrgName::kOwners, "alice", Role::kOwner).value();
  {
    auto ledger = OpenLedger(membership, FastLedgerConfig(dir / "ledger"));
    for (int i = 0; i < 3; ++i) {
      ASSERT_TRUE(ledger->SubmitTransaction(alice, "Incr", {"p"}).ok());
    }
  }
  auto reopened_membership = NewMembership(dir / "wallet");
  auto ledger = OpenLedger(reopened_membership, FastLedgerConfig(dir / "ledger"));
  EXPECT_EQ(ledger->Height(), 4u);
  EXPECT_EQ(ledger->GetState("p")->value, "3");
  EXPECT_EQ(ledger->GetHistoryForKey("p").size(), 3u);
  auto again = reopened_membership->Find(OrgName::kOwners, "alice").value();
  ASSERT_TRUE(ledger->SubmitTransaction(again, "Incr", {"p"}).ok());
  EXPECT_EQ(ledger->GetState("p")->value, "4");
  EXPECT_TRUE(ledger->VerifyChain().ok);
}

TEST(LedgerPersistence, TornTailIsTruncatedOnReopen) {
  TempDir dir;
  auto membership = NewMembership(dir / "wallet");
  auto alice = membership->Enroll(OrgName::kOwners, "alice", Role::kOwner).value();
  std::filesystem::path file;
  {
    auto ledger = OpenLedger(membership, FastLedgerConfig(dir / "ledger"));
    for (int i = 0; i < 3; ++i) {
      ASSERT_TRUE(ledger->SubmitTransaction(alice, "Incr", {"t"}).ok());
    }
    file = ledger->block_file();
  }
  auto size = std::filesystem::file_size(file);
  std::filesystem::resize_file(file, size - 7);  // cut into the last record
  EXPECT_FALSE(VerifyChainFile(file).ok);
  auto ledger = OpenLedger(membership, FastLedgerConfig(dir / "ledger"));
  EXPECT_EQ(ledger->Height(), 3u);
  EXPECT_EQ(ledger->GetState("t")->value, "2");
  EXPECT_TRUE(ledger->VerifyChain().ok);
}

TEST(LedgerPersistence, WalletMismatchIsRefused) {
  TempDir dir;
  {
    auto ledger = OpenLedger(NewMembership(dir / "w1"),
                             FastLedgerConfig(dir / "ledger"));
  }
  auto r = Ledger::Open(FastLedgerConfig(dir / "ledger"), NewMembership(dir / "w2"),
                        std::make_shared<KvChaincode>());
  EXPECT_EQ(r.code(), ErrorCode::kIntegrityFailure);
}

TEST(LedgerDeterminism, SameOrderedTransactionsGiveSameBlockHashes) {
  auto membership = NewMembership();
  auto alice = membership->Enroll(OrgName::kOwners, "alice", Role::kOwner).value();
  auto first = OpenLedger(membership);
  auto second = OpenLedger(membership);
  for (int i = 0; i < 6; ++i) {
    std::vector<std::string> args = {"k" + std::to_string(i % 3), std::to_string(i)};
    auto tx = first->Simulate(alice, "Put", args, 1700000000000 + i).value();
    ASSERT_TRUE(first->SubmitPrepared(tx).ok());
    ASSERT_TRUE(second->SubmitPrepared(tx).ok());
  }
  ASSERT_EQ(first->Height(), second->Height());
  for (std::uint64_t n = 0; n < first->Height(); ++n) {
    EXPECT_EQ(first->GetBlock(n)->HeaderDigest(), second->GetBlock(n)->HeaderDigest());
  }
}

TEST(BlockCutterTest, CutsOnCountAndTimeout) {
  BlockCutter cutter(10, Millis(500));
  SteadyTime t0{};
  LedgerTransaction tx;
  std::vector<std::size_t> sizes;
  for (int i = 0; i < 25; ++i) {
    if (auto b = cutter.Add(tx, t0)) sizes.push_back(b->size());
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{10, 10}));
  EXPECT_FALSE(cutter.Poll(t0 + Millis(499)).has_value());
  auto tail = cutter.Poll(t0 + Millis(500));
  ASSERT_TRUE(tail.has_value());
  EXPECT_EQ(tail->size(), 5u);
  EXPECT_FALSE(cutter.deadline().has_value());
}

TEST(BlockCutterTest, TimeoutCountsFromFirstPendingTransaction) {
  BlockCutter cutter(10, Millis(500));
  SteadyTime t0{};
  LedgerTransaction tx;
  EXPECT_FALSE(cutter.Add(tx, t0).has_value());
  EXPECT_FALSE(cutter.Add(tx, t0 + Millis(400)).has_value());
  EXPECT_EQ(*cutter.deadline(), t0 + Millis(500));
  auto b = cutter.Poll(t0 + Millis(501));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->size(), 2u);
}

}  // namespace
}  // namespace classicschain::ledger
