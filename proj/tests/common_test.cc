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


#include <gtest/gtest.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <random>
#include <set>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/crypto.h"
#include "classicschain/common/status.h"
#include "classicschain/common/ulid.h"

namespace classicschain {
namespace {

class CommonTest : public ::testing::Test {
 protected:
  void SetUp() override { crypto::Init(); }
};

std::string OpenSslSha256Hex(const std::string& data) {
  unsigned char out[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), out);
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned char c : out) {
    hex += kHex[c >> 4];
    hex += kHex[c & 15];
  }
  return hex;
}

TEST_F(CommonTest, CanonicalSortsKeysAndDropsWhitespace) {
  Json j = Json::parse(R"({ "b": [3, {"z":1, "a":2}], "a": "x", "é": true })");
  EXPECT_EQ(Canonical(j), "{\"a\":\"x\",\"b\":[3,{\"a\":2,\"z\":1}],\"\xc3\xa9\":true}");
  EXPECT_THROW(Canonical(Json{{"f", 1.5}}), std::invalid_argument);
  EXPECT_EQ(Canonical(Json("line\nbreak\"q\"")), "\"line\\nbreak\\\"q\\\"\"");
}

TEST_F(CommonTest, CanonicalIsAPureFunctionOfTheValue) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Json obj = Json::object();
    std::vector<std::string> keys;
    for (int k = 0; k < 8; ++k) keys.push_back("k" + std::to_string(rng() % 50));
    Json a = Json::object(), b = Json::object();
    for (const auto& k : keys) a[k] = static_cast<std::int64_t>(rng() % 1000);
    for (auto it = keys.rbegin(); it != keys.rend(); ++it) b[*it] = a[*it];
    ASSERT_EQ(Canonical(a), Canonical(b));
    auto back = ParseCanonical(Canonical(a));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, a);
  }
}

TEST_F(CommonTest, ParseCanonicalRejectsNonCanonicalText) {
  EXPECT_TRUE(ParseCanonical("{\"a\":1,\"b\":2}").ok());
  EXPECT_FALSE(ParseCanonical("{\"b\":2,\"a\":1}").ok());
  EXPECT_FALSE(ParseCanonical("{\"a\": 1}").ok());
  EXPECT_FALSE(ParseCanonical("{\"a\":1.0}").ok());
  EXPECT_FALSE(ParseCanonical("not json").ok());
  EXPECT_TRUE(ParseJson("{ \"b\": 2, \"a\": 1 }").ok());
  EXPECT_EQ(ParseJson("{").code(), ErrorCode::kInvalidArgument);
}

TEST_F(CommonTest, Sha256MatchesStandardVectorsAndOpenSsl) {
  EXPECT_EQ(crypto::Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(crypto::Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    std::string data(rng() % 5000, '\0');
    for (auto& c : data) c = static_cast<char>(rng());
    ASSERT_EQ(crypto::Sha256Hex(data), OpenSslSha256Hex(data));
    crypto::Sha256Stream s;
    for (std::size_t off = 0; off < data.size(); off += 333) s.Update(std::string_view(data).substr(off, 333));
    EXPECT_EQ(crypto::HexEncode(s.Finish()), OpenSslSha256Hex(data));
  }
}

TEST_F(CommonTest, HexAndBase64AreStrictRoundTrips) {
  std::string bytes("\x00\xff\x10 abc", 7);
  EXPECT_EQ(crypto::HexEncode(bytes), "00ff1020616263");
  EXPECT_EQ(crypto::HexDecode("00ff1020616263"), bytes);
  EXPECT_FALSE(crypto::HexDecode("00FF").has_value());
  EXPECT_FALSE(crypto::HexDecode("abc").has_value());
  EXPECT_TRUE(crypto::IsLowerHex("0a", 2));
  EXPECT_FALSE(crypto::IsLowerHex("0a", 4));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::string data(rng() % 100, '\0');
    for (auto& c : data) c = static_cast<char>(rng());
    std::string oracle(4 * ((data.size() + 2) / 3) + 1, '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(oracle.data()),
                            reinterpret_cast<const unsigned char*>(data.data()),
                            static_cast<int>(data.size()));
    oracle.resize(n);
    ASSERT_EQ(crypto::Base64Encode(data), oracle);
    EXPECT_EQ(crypto::Base64Decode(oracle), data);
    EXPECT_EQ(crypto::Base64UrlDecode(crypto::Base64UrlEncode(data)), data);
    EXPECT_EQ(crypto::Base64UrlEncode(data).find_first_of("+/="), std::string::npos);
  }
}

TEST_F(CommonTest, HmacMatchesRfc4231AndOpenSsl) {
  // RFC 4231 test case 2.
  EXPECT_EQ(crypto::HexEncode(crypto::HmacSha256("Jefe", "what do ya want for nothing?")),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  std::string key = crypto::RandomBytes(32), msg = crypto::RandomBytes(77);
  unsigned char out[32];
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(msg.data()), msg.size(), out, &len);
  EXPECT_EQ(crypto::HmacSha256(key, msg), std::string(reinterpret_cast<char*>(out), len));
}

TEST_F(CommonTest, Ed25519DetectsAnyChange) {
  auto kp = crypto::GenerateKeyPair();
  auto sig = crypto::Ed25519Sign(kp.secret_key, "payload");
  ASSERT_TRUE(sig.has_value());
  EXPECT_TRUE(crypto::Ed25519Verify(kp.public_key, "payload", *sig));
  EXPECT_FALSE(crypto::Ed25519Verify(kp.public_key, "payloaD", *sig));
  std::string bad = *sig;
  bad[10] ^= 1;
  EXPECT_FALSE(crypto::Ed25519Verify(kp.public_key, "payload", bad));
  EXPECT_FALSE(crypto::Ed25519Verify(crypto::GenerateKeyPair().public_key, "payload", *sig));
  EXPECT_FALSE(crypto::Ed25519Sign("short", "x").has_value());
}

TEST_F(CommonTest, PasswordHashingVerifiesOnlyTheRightPassword) {
  crypto::PasswordHashParams p{1, 8u << 20};
  auto h = crypto::HashPassword("correct horse", p);
  ASSERT_TRUE(h.ok());
  EXPECT_NE(h->find("argon2id"), std::string::npos);
  EXPECT_TRUE(crypto::VerifyPassword(*h, "correct horse"));
  EXPECT_FALSE(crypto::VerifyPassword(*h, "correct horsE"));
  EXPECT_FALSE(crypto::VerifyPassword("garbage", "correct horse"));
  EXPECT_NE(*h, *crypto::HashPassword("correct horse", p));  // salted
  EXPECT_TRUE(crypto::ConstantTimeEquals("abc", "abc"));
  EXPECT_FALSE(crypto::ConstantTimeEquals("abc", "abd"));
  EXPECT_FALSE(crypto::ConstantTimeEquals("abc", "abcd"));
}

TEST_F(CommonTest, UlidsAreValidUniqueAndOrdered) {
  UlidGenerator g;
  std::string prev;
  std::set<std::string> seen;
  for (int i = 0; i < 2000; ++i) {
    std::string id = g.Next(1700000000000 + i / 100);
    ASSERT_TRUE(IsUlid(id)) << id;
    ASSERT_EQ(id.size(), 26u);
    EXPECT_GT(id, prev);
    EXPECT_TRUE(seen.insert(id).second);
    prev = id;
  }
  EXPECT_FALSE(IsUlid("01ARZ3NDEKTSV4RRFFQ69G5FA"));   // 25 chars
  EXPECT_FALSE(IsUlid("01ARZ3NDEKTSV4RRFFQ69G5FAU"));  // U is not Crockford
  EXPECT_TRUE(IsUlid("01ARZ3NDEKTSV4RRFFQ69G5FAV"));
}

TEST_F(CommonTest, ErrorCodeNamesRoundTrip) {
  std::set<std::string> names;
  for (ErrorCode c : kAllErrorCodes) {
    std::string name(ErrorCodeName(c));
    EXPECT_TRUE(names.insert(name).second) << name;
    EXPECT_EQ(ErrorCodeFromName(name), c);
  }
  EXPECT_EQ(ErrorCodeName(ErrorCode::kMvccConflict), "MVCC_CONFLICT");
  EXPECT_FALSE(ErrorCodeFromName("NOPE").has_value());
}

Result<int> Half(int x) {
  if (x % 2) return Error(ErrorCode::kInvalidArgument, "odd");
  return x / 2;
}

Result<int> Quarter(int x) {
  CC_ASSIGN_OR_RETURN(int h, Half(x));
  CC_ASSIGN_OR_RETURN(int q, Half(h));
  return q;
}

TEST_F(CommonTest, ResultMacrosPropagate) {
  EXPECT_EQ(*Quarter(12), 3);
  EXPECT_EQ(Quarter(6).code(), ErrorCode::kInvalidArgument);
  Status s = Status(ErrorCode::kTimeout, "slow");
  EXPECT_EQ(s.ToString(), "TIMEOUT: slow");
  EXPECT_TRUE(Status::Ok().ok());
}

TEST_F(CommonTest, ManualClockAdvancesBothScales) {
  ManualClock c;
  auto t0 = c.Now();
  c.Advance(Millis(1500));
  EXPECT_EQ(c.WallMillis(), 1700000001500);
  EXPECT_EQ(c.Now() - t0, Millis(1500));
  EXPECT_GT(DefaultClock()->WallMillis(), 1700000000000);
}

}  // namespace
}  // namespace classicschain
