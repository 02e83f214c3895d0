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

#include "classicschain/ledger/block_store.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "classicschain/common/crypto.h"

namespace classicschain::ledger {

namespace fs = std::filesystem;

namespace {

Error IoError(const std::string& what) {
  return Error(ErrorCode::kIoFailure, what + ": " + std::strerror(errno));
}

}  // namespace

FramedRecords ParseFramedRecords(std::string_view bytes) {
  FramedRecords out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      out.truncated_tail = true;
      break;
    }
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) {
      len = (len << 8) | static_cast<unsigned char>(bytes[pos + i]);
    }
    if (bytes.size() - pos - 4 < len) {
      out.truncated_tail = true;
      break;
    }
    out.records.emplace_back(bytes.substr(pos + 4, len));
    pos += 4 + len;
    out.valid_bytes = pos;
  }
  return out;
}

std::string FrameRecord(std::string_view payload) {
  std::string out;
  out.reserve(payload.size() + 4);
  auto len = static_cast<std::uint32_t>(payload.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((len >> shift) & 0xff));
  }
  out.append(payload);
  return out;
}

Result<std::string> ReadWholeFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- BlockStore -------------------------------------------------------------

Result<std::unique_ptr<BlockStore>> BlockStore::Open(const fs::path& path,
                                                     bool fsync) {
  std::unique_ptr<BlockStore> store(new BlockStore());
  store->path_ = path;
  store->fsync_ = fsync;
  if (path.empty()) return store;

  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  store->fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (store->fd_ < 0) return IoError("open " + path.string());

  CC_ASSIGN_OR_RETURN(std::string bytes, ReadWholeFile(path));
  FramedRecords framed = ParseFramedRecords(bytes);
  std::uint64_t offset = 0;
  for (const auto& rec : framed.records) {
    store->index_.emplace_back(offset + 4, static_cast<std::uint32_t>(rec.size()));
    offset += 4 + rec.size();
  }
  if (framed.truncated_tail) {
    // A crash mid-append leaves a prefix of the final record.
    store->recovered_bytes_ = bytes.size() - framed.valid_bytes;
    if (::ftruncate(store->fd_, static_cast<off_t>(framed.valid_bytes)) != 0) {
      return IoError("truncate torn tail");
    }
  }
  store->file_size_ = framed.valid_bytes;
  return store;
}

BlockStore::~BlockStore() {
  if (fd_ >= 0) ::close(fd_);
}

Status BlockStore::Append(const Block& block) {
  std::string payload = block.Encode();
  std::lock_guard<std::mutex> lock(mu_);
  if (block.number != (path_.empty() ? memory_.size() : index_.size())) {
    return Error(ErrorCode::kInternal, "non-sequential block append");
  }
  if (path_.empty()) {
    memory_.push_back(std::move(payload));
    return Status::Ok();
  }
  std::string framed = FrameRecord(payload);
  std::size_t written = 0;
  while (written < framed.size()) {
    ssize_t n = ::pwrite(fd_, framed.data() + written, framed.size() - written,
                         static_cast<off_t>(file_size_ + written));
    if (n < 0) {
      if (errno == EINTR) continue;
      return IoError("append block");
    }
    written += static_cast<std::size_t>(n);
  }
  if (fsync_ && ::fdatasync(fd_) != 0) return IoError("fdatasync");
  index_.emplace_back(file_size_ + 4, static_cast<std::uint32_t>(payload.size()));
  file_size_ += framed.size();
  return Status::Ok();
}

std::uint64_t BlockStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return path_.empty() ? memory_.size() : index_.size();
}

Result<Block> BlockStore::Read(std::uint64_t number) const {
  std::string payload;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (path_.empty()) {
      if (number >= memory_.size()) return Error(ErrorCode::kNotFound, "block");
      payload = memory_[number];
    } else {
      if (number >= index_.size()) return Error(ErrorCode::kNotFound, "block");
      auto [off, len] = index_[number];
      payload.resize(len);
      std::size_t got = 0;
      while (got < len) {
        ssize_t n = ::pread(fd_, payload.data() + got, len - got,
                            static_cast<off_t>(off + got));
        if (n <= 0) {
          if (n < 0 && errno == EINTR) continue;
          return IoError("read block");
        }
        got += static_cast<std::size_t>(n);
      }
    }
  }
  return Block::Decode(payload);
}

// --- VerifyChain ------------------------------------------------------------

namespace {

ChainReport Fail(std::uint64_t block, std::string reason, std::string detail,
                 std::uint64_t blocks) {
  ChainReport r;
  r.ok = false;
  r.blocks = blocks;
  r.first_bad_block = block;
  r.reason = std::move(reason);
  r.detail = std::move(detail);
  return r;
}

}  // namespace

ChainReport VerifyChain(const std::vector<std::string>& records,
                        bool truncated_tail) {
  const std::uint64_t n = records.size();
  if (n == 0) return Fail(0, "BAD_GENESIS", "empty chain", 0);
  identity::TrustRoots roots;
  std::string prev_digest;
  std::uint64_t i = 0;
  try {
    for (; i < n; ++i) {
      auto decoded = Block::Decode(records[i]);
      if (!decoded.ok()) {
        return Fail(i, "MALFORMED_BLOCK", decoded.error().message(), n);
      }
      const Block& b = *decoded;
      if (b.number != i) {
        return Fail(i, "BAD_NUMBER",
                    "record " + std::to_string(i) + " claims number " +
                        std::to_string(b.number),
                    n);
      }
      if (b.validation_flags.size() != b.transactions.size()) {
        return Fail(i, "MALFORMED_BLOCK", "flag count != tx count", n);
      }
      if (i == 0) {
        if (b.previous_hash != ZeroHash() || !b.config ||
            !b.transactions.empty()) {
          return Fail(0, "BAD_GENESIS", "genesis header", n);
        }
        const Json& cfg = *b.config;
        if (!cfg.is_object() || !cfg.contains("roots") ||
            !cfg.contains("channel") || cfg["channel"] != kChannelName) {
          return Fail(0, "BAD_GENESIS", "genesis config", n);
        }
        auto parsed = identity::TrustRoots::FromJson(cfg["roots"]);
        if (!parsed.ok()) {
          return Fail(0, "BAD_GENESIS", parsed.error().message(), n);
        }
        roots = std::move(parsed).value();
      } else {
        if (b.config) return Fail(i, "MALFORMED_BLOCK", "config after genesis", n);
        if (b.transactions.empty()) return Fail(i, "EMPTY_BLOCK", "no transactions", n);
      }
      if (b.ComputeDataHash() != b.data_hash) {
        return Fail(i, "DATA_HASH_MISMATCH", "recomputed dataHash differs", n);
      }
      if (i > 0 && b.previous_hash != prev_digest) {
        return Fail(i, "PREV_HASH_MISMATCH",
                    "previousHash does not match header digest of block " +
                        std::to_string(i - 1),
                    n);
      }
      const auto& sig = b.orderer_signature;
      auto ok = roots.Verify(sig.orderer, b.HeaderPayload(), sig.signature);
      if (!ok.ok() || !*ok || sig.orderer.org != identity::OrgName::kOrderers) {
        return Fail(i, "BAD_ORDERER_SIGNATURE",
                    ok.ok() ? "signature does not verify"
                            : ok.error().message(),
                    n);
      }
      prev_digest = b.HeaderDigest();
    }
  } catch (const std::exception& e) {
    return Fail(i, "MALFORMED_BLOCK", e.what(), n);
  }
  if (truncated_tail) {
    return Fail(n, "TRUNCATED_RECORD", "incomplete record after last block", n);
  }
  ChainReport ok;
  ok.blocks = n;
  return ok;
}

ChainReport VerifyChainFile(const fs::path& path) {
  auto bytes = ReadWholeFile(path);
  if (!bytes.ok()) return Fail(0, "MALFORMED_BLOCK", bytes.error().message(), 0);
  FramedRecords framed = ParseFramedRecords(*bytes);
  return VerifyChain(framed.records, framed.truncated_tail);
}

}  // namespace classicschain::ledger
