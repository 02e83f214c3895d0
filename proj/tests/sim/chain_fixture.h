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
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "classicschain/identity/identity.h"
#include "classicschain/ledger/block_store.h"
#include "classicschain/ledger/ledger.h"
#include "test_util.h"

namespace classicschain::sim {

// Persists a chain of exactly `blocks` blocks (genesis included) in
// `dir`/blocks.dat, one transaction per block, and returns the file path.
inline Result<std::filesystem::path> BuildChain(const std::filesystem::path& dir, int blocks) {
  CC_ASSIGN_OR_RETURN(std::unique_ptr<identity::Membership> m, identity::Membership::Open({}));
  std::shared_ptr<identity::Membership> members(std::move(m));
  CC_ASSIGN_OR_RETURN(identity::Identity alice,
                      members->Enroll(identity::OrgName::kOwners, "alice", identity::Role::kOwner));
  ledger::LedgerConfig cfg = testing::FastLedgerConfig(dir);
  cfg.max_messages_per_block = 1;
  CC_ASSIGN_OR_RETURN(std::unique_ptr<ledger::Ledger> l,
                      ledger::Ledger::Open(cfg, members, std::make_shared<testing::KvChaincode>()));
  for (int i = 1; i < blocks; ++i) {
    auto r = l->SubmitTransaction(alice, "Put",
                                  {"key" + std::to_string(i % 7), "value-" + std::to_string(i)});
    if (!r.ok()) return r.error();
  }
  std::filesystem::path file = l->block_file();
  l->Close();
  return file;
}

// Index of the framed record containing byte `offset`.
inline std::uint64_t RecordAt(const std::string& file_bytes, std::uint64_t offset) {
  std::uint64_t pos = 0, index = 0;
  while (pos + 4 <= file_bytes.size()) {
    auto b = [&](int i) { return static_cast<std::uint64_t>(static_cast<unsigned char>(file_bytes[pos + i])); };
    std::uint64_t len = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
    if (offset < pos + 4 + len) return index;
    pos += 4 + len;
    ++index;
  }
  return index;
}

struct MutationOutcome {
  std::uint64_t offset = 0;
  std::uint64_t expected_block = 0;
  ledger::ChainReport report;
  bool flagged_correctly() const {
    return !report.ok && report.first_bad_block == expected_block;
  }
};

// Flips one byte of `original` to a different value, writes it to `scratch`
// and verifies the damaged file.
inline MutationOutcome MutateAndVerify(const std::string& original,
                                       const std::filesystem::path& scratch,
                                       std::mt19937_64& rng) {
  MutationOutcome o;
  o.offset = rng() % original.size();
  std::string damaged = original;
  damaged[o.offset] = static_cast<char>(damaged[o.offset] ^ static_cast<char>(1 + rng() % 255));
  {
    std::ofstream out(scratch, std::ios::binary | std::ios::trunc);
    out << damaged;
  }
  o.expected_block = RecordAt(original, o.offset);
  o.report = ledger::VerifyChainFile(scratch);
  return o;
}

}  // namespace classicschain::sim
