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


#include <openssl/sha.h>
#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include "classicschain/media/anchor_queue.h"
#include "classicschain/media/cid.h"
#include "classicschain/media/media_store.h"
#include "test_util.h"

namespace classicschain::media {
namespace {

using testing::TempDir;

// Independent digest oracle (OpenSSL rather than libsodium).
std::string OracleCid(std::string_view data) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  static const char* kHex = "0123456789abcdef";
  std::string out = "sha2-256:";
  for (unsigned char c : md) {
    out += kHex[c >> 4];
    out += kHex[c & 15];
  }
  return out;
}

std::string RandomBlob(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::string s(len(rng), '\0');
  for (auto& c : s) c = static_cast<char>(rng());
  return s;
}

TEST(CidTest, StandardVectors) {
  EXPECT_EQ(ComputeCid("abc").ToString(),
            "sha2-256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(ComputeCid("").ToString(),
            "sha2-256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ComputeCid("abc").ToString(), OracleCid("abc"));
}

TEST(CidTest, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::string blob = RandomBlob(rng, 4096);
    ASSERT_EQ(ComputeCid(blob).ToString(), OracleCid(blob));
  }
}

TEST(CidTest, OneByteDifferenceChangesCid) {
  std::string a(1000, 'x');
  std::string b = a;
  b[500] = 'y';
  EXPECT_NE(ComputeCid(a), ComputeCid(b));
}

TEST(CidTest, ParseIsStrict) {
  std::string good = ComputeCid("abc").ToString();
  ASSERT_TRUE(ContentId::Parse(good).has_value());
  EXPECT_EQ(ContentId::Parse(good)->ToString(), good);
  EXPECT_FALSE(ContentId::Parse("sha2-256:ABC").has_value());
  EXPECT_FALSE(ContentId::Parse(good.substr(0, good.size() - 1)).has_value());
  EXPECT_FALSE(ContentId::Parse("sha1:" + good.substr(9)).has_value());
  std::string upper = good;
  upper[20] = 'A';
  EXPECT_FALSE(ContentId::Parse(upper).has_value());
}

class MediaStoreTest : public ::testing::Test {
 protected:
  void SetUp() override { store_ = MediaStore::Open(dir_.path()).value(); }
  TempDir dir_;
  std::unique_ptr<MediaStore> store_;
};

TEST_F(MediaStoreTest, RoundTripThousandRandomBlobs) {
  std::mt19937_64 rng(42);
  std::vector<std::pair<ContentId, std::string>> stored;
  for (int i = 0; i < 1000; ++i) {
    std::string blob = RandomBlob(rng, 2048);
    auto cid = store_->Store(blob);
    ASSERT_TRUE(cid.ok()) << cid.error().ToString();
    ASSERT_EQ(cid->ToString(), OracleCid(blob));
    stored.emplace_back(*cid, std::move(blob));
  }
  for (const auto& [cid, blob] : stored) {
    auto got = store_->Get(cid);
    ASSERT_TRUE(got.ok());
    ASSERT_EQ(*got, blob);
    ASSERT_EQ(OracleCid(*got), cid.ToString());
  }
  auto report = store_->VerifyAll();
  EXPECT_TRUE(report.ok());
}

TEST_F(MediaStoreTest, LayoutUsesTwoLevelFanOut) {
  auto cid = store_->Store("abc").value();
  const std::string& h = cid.digest_hex;
  auto expected = dir_.path() / "media" / h.substr(0, 2) / h.substr(2, 2) / h;
  EXPECT_EQ(store_->PathFor(cid), expected);
  EXPECT_TRUE(std::filesystem::exists(expected));
}

TEST_F(MediaStoreTest, StoreIsIdempotent) {
  auto a = store_->Store("same bytes").value();
  auto b = store_->Store("same bytes").value();
  EXPECT_EQ(a, b);
  int files = 0;
  for (const auto& e :
       std::filesystem::recursive_directory_iterator(dir_.path() / "media")) {
    files += e.is_regular_file();
  }
  EXPECT_EQ(files, 1);
}

TEST_F(MediaStoreTest, EmptyContentIsAllowed) {
  auto cid = store_->Store("").value();
  EXPECT_EQ(cid.ToString(), OracleCid(""));
  EXPECT_EQ(store_->Get(cid).value(), "");
}

TEST_F(MediaStoreTest, StreamedWriteMatchesOneShot) {
  auto w = store_->BeginWrite().value();
  std::string all;
  for (int i = 0; i < 50; ++i) {
    std::string chunk(1000 + i, static_cast<char>('a' + i % 26));
    ASSERT_TRUE(w->Append(chunk).ok());
    all += chunk;
  }
  auto cid = w->Commit().value();
  EXPECT_EQ(cid.ToString(), OracleCid(all));
  EXPECT_EQ(store_->Get(cid).value(), all);
}

TEST_F(MediaStoreTest, OverDefaultLimitIsTooLarge) {
  EXPECT_EQ(store_->max_bytes(), 50ull << 20);
  auto w = store_->BeginWrite().value();
  std::string chunk(1 << 20, 'z');
  Status last;
  for (int i = 0; i < 51 && last.ok(); ++i) last = w->Append(chunk);
  EXPECT_EQ(last.code(), ErrorCode::kTooLarge);
  EXPECT_FALSE(w->Commit().ok());
  // Nothing is left behind.
  int files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir_.path())) {
    files += e.is_regular_file();
  }
  EXPECT_EQ(files, 0);
}

TEST_F(MediaStoreTest, OneShotOverLimitIsTooLarge) {
  auto small = MediaStore::Open(dir_ / "small", 10).value();
  EXPECT_EQ(small->Store(std::string(11, 'a')).code(), ErrorCode::kTooLarge);
  EXPECT_TRUE(small->Store(std::string(10, 'a')).ok());
}

TEST_F(MediaStoreTest, UnknownCidIsNotFound) {
  EXPECT_EQ(store_->Get(ComputeCid("never stored")).code(), ErrorCode::kNotFound);
  EXPECT_FALSE(store_->Contains(ComputeCid("never stored")));
}

TEST_F(MediaStoreTest, CorruptionIsDetectedOnReadAndVerify) {
  auto cid = store_->Store("original content").value();
  store_->Store("untouched").value();
  {
    std::ofstream f(store_->PathFor(cid), std::ios::binary | std::ios::trunc);
    f << "tampered content";
  }
  EXPECT_EQ(store_->Get(cid).code(), ErrorCode::kIntegrityFailure);
  auto report = store_->VerifyAll();
  EXPECT_EQ(report.checked, 2u);
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].first, store_->PathFor(cid));
}

TEST_F(MediaStoreTest, ConcurrentStoresOfSameContent) {
  std::vector<std::thread> threads;
  std::vector<std::string> cids(8);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      cids[i] = store_->Store(std::string(100000, 'q')).value().ToString();
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& c : cids) EXPECT_EQ(c, cids[0]);
  EXPECT_TRUE(store_->VerifyAll().ok());
}

TEST_F(MediaStoreTest, ReopenCleansTempDirectory) {
  auto w = store_->BeginWrite().value();
  ASSERT_TRUE(w->Append("partial").ok());
  auto reopened = MediaStore::Open(dir_.path()).value();
  EXPECT_TRUE(std::filesystem::is_empty(dir_.path() / "tmp"));
  w->Abort();
}

// ---- anchor queue ----

AnchorQueueConfig FastQueue(const std::filesystem::path& journal) {
  AnchorQueueConfig c;
  c.journal = journal;
  c.base_backoff = Millis(10);
  c.park_interval = Millis(200);
  return c;
}

TEST(AnchorQueueTest, AnchorsEnqueuedJobsInOrder) {
  TempDir dir;
  std::mutex mu;
  std::vector<std::string> seen;
  auto q = AnchorQueue::Open(FastQueue(dir / "jobs.jsonl"), [&](const AnchorJob& j) {
             std::lock_guard lock(mu);
             seen.push_back(j.cid);
             return Status::Ok();
           }).value();
  for (int i = 0; i < 5; ++i) {
    ASSERT_TRUE(q->Enqueue("c" + std::to_string(i), "VIN", contracts::RefKind::kEvidence,
                           "u").ok());
  }
  ASSERT_TRUE(q->WaitIdle(Millis(5000)));
  EXPECT_EQ(seen, (std::vector<std::string>{"c0", "c1", "c2", "c3", "c4"}));
  for (const auto& j : q->Jobs()) EXPECT_EQ(j.state, JobState::kAnchored);
  EXPECT_EQ(q->PendingCount(), 0u);
}

TEST(AnchorQueueTest, EnqueueDoesNotWaitForAnchoring) {
  AnchorQueueConfig c;
  c.anchor_delay = Millis(300);
  auto q = AnchorQueue::Open(c, [](const AnchorJob&) { return Status::Ok(); }).value();
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) {
    ASSERT_TRUE(q->Enqueue("c", "V", contracts::RefKind::kDocument, "u").ok());
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, Millis(100));
  EXPECT_GE(q->PendingCount(), 4u);
}

TEST(AnchorQueueTest, TransientFailuresRetryWithBackoff) {
  std::atomic<int> calls{0};
  std::vector<SteadyTime> times;
  std::mutex mu;
  auto q = AnchorQueue::Open(FastQueue({}), [&](const AnchorJob&) -> Status {
             std::lock_guard lock(mu);
             times.push_back(std::chrono::steady_clock::now());
             if (++calls <= 2) return Error(ErrorCode::kOrderingUnavailable);
             return Status::Ok();
           }).value();
  auto id = q->Enqueue("c", "V", contracts::RefKind::kEvidence, "u").value();
  ASSERT_TRUE(q->WaitIdle(Millis(5000)));
  auto job = q->Get(id).value();
  EXPECT_EQ(job.state, JobState::kAnchored);
  EXPECT_EQ(job.retries, 2);
  ASSERT_EQ(times.size(), 3u);
  // Exponential: first gap >= 10 ms, second >= 20 ms.
  EXPECT_GE(times[1] - times[0], Millis(10));
  EXPECT_GE(times[2] - times[1], Millis(20));
}

TEST(AnchorQueueTest, PermanentFailureIsNotRetried) {
  std::atomic<int> calls{0};
  auto q = AnchorQueue::Open(FastQueue({}), [&](const AnchorJob&) -> Status {
             ++calls;
             return Error(ErrorCode::kAuthDenied, "no");
           }).value();
  auto id = q->Enqueue("c", "V", contracts::RefKind::kEvidence, "u").value();
  ASSERT_TRUE(q->WaitIdle(Millis(2000)));
  std::this_thread::sleep_for(Millis(300));
  auto job = q->Get(id).value();
  EXPECT_EQ(job.state, JobState::kFailed);
  EXPECT_TRUE(job.permanent);
  EXPECT_EQ(calls.load(), 1);
}

TEST(AnchorQueueTest, ConflictsAreRetriedImmediately) {
  std::atomic<int> calls{0};
  auto q = AnchorQueue::Open(FastQueue({}), [&](const AnchorJob&) -> Status {
             if (++calls < 3) return Error(ErrorCode::kMvccConflict);
             return Status::Ok();
           }).value();
  auto id = q->Enqueue("c", "V", contracts::RefKind::kEvidence, "u").value();
  ASSERT_TRUE(q->WaitIdle(Millis(2000)));
  EXPECT_EQ(q->Get(id)->state, JobState::kAnchored);
  EXPECT_EQ(q->Get(id)->retries, 0);
}

TEST(AnchorQueueTest, ExhaustedRetriesParkThenRearm) {
  std::atomic<bool> healthy{false};
  std::atomic<int> calls{0};
  auto q = AnchorQueue::Open(FastQueue({}), [&](const AnchorJob&) -> Status {
             ++calls;
             return healthy ? Status::Ok() : Status(ErrorCode::kOrderingUnavailable);
           }).value();
  auto id = q->Enqueue("c", "V", contracts::RefKind::kEvidence, "u").value();
  // 1 attempt + 3 retries, then parked as failed.
  ASSERT_TRUE(q->WaitIdle(Millis(2000)));
  EXPECT_EQ(q->Get(id)->state, JobState::kFailed);
  EXPECT_FALSE(q->Get(id)->permanent);
  EXPECT_EQ(calls.load(), 4);
  healthy = true;
  for (int i = 0; i < 100 && q->Get(id)->state != JobState::kAnchored; ++i) {
    std::this_thread::sleep_for(Millis(20));
  }
  EXPECT_EQ(q->Get(id)->state, JobState::kAnchored);
}

TEST(AnchorQueueTest, JournalReplayResumesPendingJobs) {
  TempDir dir;
  auto journal = dir / "jobs.jsonl";
  std::uint64_t done_id, pending_id;
  {
    std::atomic<bool> first{true};
    auto q = AnchorQueue::Open(FastQueue(journal), [&](const AnchorJob&) -> Status {
               if (first.exchange(false)) return Status::Ok();
               return Error(ErrorCode::kOrderingUnavailable);
             }).value();
    done_id = q->Enqueue("done", "V", contracts::RefKind::kEvidence, "u").value();
    pending_id = q->Enqueue("later", "V", contracts::RefKind::kDocument, "u2").value();
    ASSERT_TRUE(q->WaitIdle(Millis(2000)));
    q->Stop();
  }
  // A torn write at the end of the journal is tolerated.
  { std::ofstream(journal, std::ios::app) << "{\"op\":\"enq"; }
  std::vector<std::string> anchored;
  auto q = AnchorQueue::Open(FastQueue(journal), [&](const AnchorJob& j) {
             anchored.push_back(j.cid);
             return Status::Ok();
           }).value();
  ASSERT_TRUE(q->WaitIdle(Millis(2000)));
  EXPECT_EQ(anchored, std::vector<std::string>{"later"});
  EXPECT_EQ(q->Get(done_id)->state, JobState::kAnchored);
  auto p = q->Get(pending_id).value();
  EXPECT_EQ(p.state, JobState::kAnchored);
  EXPECT_EQ(p.vin, "V");
  EXPECT_EQ(p.user_id, "u2");
  EXPECT_EQ(p.ref_kind, contracts::RefKind::kDocument);
  // New ids continue after replayed ones.
  auto next = q->Enqueue("n", "V", contracts::RefKind::kEvidence, "u").value();
  EXPECT_GT(next, pending_id);
}

TEST(AnchorQueueTest, StatesOnlyMoveForward) {
  // pending -> failed -> pending -> anchored; anchored is terminal.
  TempDir dir;
  auto journal = dir / "jobs.jsonl";
  std::atomic<int> calls{0};
  auto q = AnchorQueue::Open(FastQueue(journal), [&](const AnchorJob&) -> Status {
             return ++calls <= 4 ? Status(ErrorCode::kTimeout) : Status::Ok();
           }).value();
  auto id = q->Enqueue("c", "V", contracts::RefKind::kEvidence, "u").value();
  for (int i = 0; i < 100 && q->Get(id)->state != JobState::kAnchored; ++i) {
    std::this_thread::sleep_for(Millis(20));
  }
  q->Stop();
  std::ifstream in(journal);
  std::string line;
  std::vector<std::string> states;
  while (std::getline(in, line)) {
    auto j = Json::parse(line);
    if (j["op"] == "state") states.push_back(j["state"]);
  }
  ASSERT_FALSE(states.empty());
  EXPECT_EQ(states.back(), "anchored");
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i - 1] == "anchored") ADD_FAILURE() << "transition out of anchored";
    if (states[i - 1] == "failed") EXPECT_EQ(states[i], "pending");
  }
}

}  // namespace
}  // namespace classicschain::media
