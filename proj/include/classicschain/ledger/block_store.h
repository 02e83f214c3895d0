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
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "classicschain/common/status.h"
#include "classicschain/ledger/types.h"

namespace classicschain::ledger {

// Block file format: a sequence of records, each a 4-byte big-endian payload
// length followed by the canonical encoding of one block. Block n is the
// n-th record; the first record is the genesis block.
struct FramedRecords {
  std::vector<std::string> records;
  // Byte offset just past the last complete record.
  std::uint64_t valid_bytes = 0;
  // True when bytes follow the last complete record (a torn final write or a
  // damaged length prefix).
  bool truncated_tail = false;
};

FramedRecords ParseFramedRecords(std::string_view file_bytes);
std::string FrameRecord(std::string_view payload);
Result<std::string> ReadWholeFile(const std::filesystem::path& path);

// Append-only persistent block sequence. Thread-compatible: the ledger's
// commit pipeline is its only writer.
class BlockStore {
 public:
  // Opens (creating if needed) `path`. A torn trailing record left by a crash
  // is cut off. An empty path keeps blocks in memory.
  static Result<std::unique_ptr<BlockStore>> Open(
      const std::filesystem::path& path, bool fsync);
  ~BlockStore();

  Status Append(const Block& block);
  std::uint64_t size() const;
  Result<Block> Read(std::uint64_t number) const;
  // Bytes discarded while recovering from a torn write at open.
  std::uint64_t recovered_bytes() const { return recovered_bytes_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  BlockStore() = default;

  std::filesystem::path path_;
  bool fsync_ = false;
  int fd_ = -1;
  std::uint64_t recovered_bytes_ = 0;
  mutable std::mutex mu_;
  // Payload offsets and lengths within the file (or the payloads themselves
  // for the in-memory store).
  std::vector<std::pair<std::uint64_t, std::uint32_t>> index_;
  std::uint64_t file_size_ = 0;
  std::vector<std::string> memory_;
};

// Result of a full-chain integrity check.
struct ChainReport {
  bool ok = true;
  std::uint64_t blocks = 0;
  std::uint64_t first_bad_block = 0;
  // TRUNCATED_RECORD, MALFORMED_BLOCK, BAD_NUMBER, BAD_GENESIS,
  // EMPTY_BLOCK, DATA_HASH_MISMATCH, PREV_HASH_MISMATCH or
  // BAD_ORDERER_SIGNATURE.
  std::string reason;
  std::string detail;
};

// Recomputes each block's dataHash, header digest, previousHash linkage and
// orderer signature (under the OrderersOrg root carried by the genesis
// configuration) and reports the first violation. Never throws.
ChainReport VerifyChain(const std::vector<std::string>& records,
                        bool truncated_tail = false);
ChainReport VerifyChainFile(const std::filesystem::path& path);

}  // namespace classicschain::ledger
