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
#include <string>
#include <string_view>
#include <vector>

#include "classicschain/common/crypto.h"
#include "classicschain/common/status.h"
#include "classicschain/media/cid.h"

namespace classicschain::media {

inline constexpr std::uint64_t kDefaultMaxMediaBytes = 50ull << 20;

// Content-addressed blob store. Objects live at
//   <root>/media/<hex[0..2]>/<hex[2..4]>/<hex>
// and are never deleted. Writes go to <root>/tmp first and are renamed into
// place once their digest is known, so readers never see partial objects.
class MediaStore {
 public:
  // Streams one object into the store.
  class Writer {
   public:
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    // TOO_LARGE once the object exceeds the store's limit; the writer is
    // then unusable.
    Status Append(std::string_view chunk);
    Result<ContentId> Commit();
    void Abort();
    std::uint64_t size() const { return size_; }

   private:
    friend class MediaStore;
    Writer(const MediaStore* store, std::filesystem::path temp, std::FILE* f);

    const MediaStore* store_;
    std::filesystem::path temp_;
    std::FILE* file_;
    crypto::Sha256Stream hash_;
    std::uint64_t size_ = 0;
    bool failed_ = false;
  };

  static Result<std::unique_ptr<MediaStore>> Open(
      const std::filesystem::path& root,
      std::uint64_t max_bytes = kDefaultMaxMediaBytes);

  Result<std::unique_ptr<Writer>> BeginWrite() const;
  // Idempotent: storing the same bytes again returns the same cid.
  Result<ContentId> Store(std::string_view content) const;
  // NOT_FOUND, or INTEGRITY_FAILURE when the stored bytes no longer hash to
  // `cid`.
  Result<std::string> Get(const ContentId& cid) const;
  bool Contains(const ContentId& cid) const;
  std::filesystem::path PathFor(const ContentId& cid) const;

  struct VerifyReport {
    std::uint64_t checked = 0;
    // (path, reason) for every object whose bytes do not match its name.
    std::vector<std::pair<std::filesystem::path, std::string>> failures;
    bool ok() const { return failures.empty(); }
  };
  VerifyReport VerifyAll() const;

  std::uint64_t max_bytes() const { return max_bytes_; }
  const std::filesystem::path& root() const { return root_; }

 private:
  MediaStore() = default;

  std::filesystem::path root_;
  std::uint64_t max_bytes_ = kDefaultMaxMediaBytes;
};

}  // namespace classicschain::media
