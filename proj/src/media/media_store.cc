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


#include "classicschain/media/media_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>

namespace classicschain::media {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kReadChunk = 1 << 16;

Error Io(const std::string& what, const fs::path& path) {
  return Error(ErrorCode::kIoFailure, what + " " + path.string());
}

// Streams a file through SHA-256 without holding it in memory.
Result<std::string> HashFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Io("cannot open", path);
  crypto::Sha256Stream h;
  std::string buf(kReadChunk, '\0');
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.Update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  if (in.bad()) return Io("cannot read", path);
  return crypto::HexEncode(h.Finish());
}

}  // namespace

// --- Writer ---------------------------------------------------------------------

MediaStore::Writer::Writer(const MediaStore* store, fs::path temp, std::FILE* f)
    : store_(store), temp_(std::move(temp)), file_(f) {}

MediaStore::Writer::~Writer() { Abort(); }

Status MediaStore::Writer::Append(std::string_view chunk) {
  if (failed_ || file_ == nullptr) {
    return Error(ErrorCode::kIoFailure, "writer is closed");
  }
  if (size_ + chunk.size() > store_->max_bytes_) {
    Abort();
    failed_ = true;
    return Error(ErrorCode::kTooLarge,
                 "object exceeds " + std::to_string(store_->max_bytes_) + " bytes");
  }
  if (!chunk.empty() &&
      std::fwrite(chunk.data(), 1, chunk.size(), file_) != chunk.size()) {
    Abort();
    failed_ = true;
    return Io("short write to", temp_);
  }
  hash_.Update(chunk);
  size_ += chunk.size();
  return Status::Ok();
}

Result<ContentId> MediaStore::Writer::Commit() {
  if (failed_ || file_ == nullptr) {
    return Error(ErrorCode::kIoFailure, "writer is closed");
  }
  bool flushed = std::fflush(file_) == 0 && ::fdatasync(fileno(file_)) == 0;
  std::fclose(file_);
  file_ = nullptr;
  if (!flushed) {
    std::error_code ec;
    fs::remove(temp_, ec);
    return Io("cannot flush", temp_);
  }
  ContentId cid{crypto::HexEncode(hash_.Finish())};
  fs::path dest = store_->PathFor(cid);
  std::error_code ec;
  if (fs::exists(dest, ec)) {
    fs::remove(temp_, ec);
    return cid;
  }
  fs::create_directories(dest.parent_path(), ec);
  if (ec) return Io("cannot create", dest.parent_path());
  fs::rename(temp_, dest, ec);
  if (ec) {
    fs::remove(temp_, ec);
    return Io("cannot publish", dest);
  }
  return cid;
}

void MediaStore::Writer::Abort() {
  if (file_ != nullptr) {
    std::fclose(file_);
    file_ = nullptr;
    std::error_code ec;
    fs::remove(temp_, ec);
  }
}

// --- MediaStore -------------------------------------------------------------------

Result<std::unique_ptr<MediaStore>> MediaStore::Open(const fs::path& root,
                                                     std::uint64_t max_bytes) {
  crypto::Init();
  std::unique_ptr<MediaStore> store(new MediaStore());
  store->root_ = root;
  store->max_bytes_ = max_bytes;
  std::error_code ec;
  fs::create_directories(root / "media", ec);
  if (ec) return Io("cannot create", root / "media");
  fs::create_directories(root / "tmp", ec);
  if (ec) return Io("cannot create", root / "tmp");
  // Leftovers from interrupted uploads.
  for (const auto& entry : fs::directory_iterator(root / "tmp", ec)) {
    std::error_code rm;
    fs::remove(entry.path(), rm);
  }
  return store;
}

fs::path MediaStore::PathFor(const ContentId& cid) const {
  const std::string& h = cid.digest_hex;
  return root_ / "media" / h.substr(0, 2) / h.substr(2, 2) / h;
}

Result<std::unique_ptr<MediaStore::Writer>> MediaStore::BeginWrite() const {
  fs::path temp = root_ / "tmp" / ("upload-" + crypto::HexEncode(crypto::RandomBytes(8)));
  std::FILE* f = std::fopen(temp.c_str(), "wb");
  if (f == nullptr) return Io("cannot create", temp);
  return std::unique_ptr<Writer>(new Writer(this, std::move(temp), f));
}

Result<ContentId> MediaStore::Store(std::string_view content) const {
  if (content.size() > max_bytes_) {
    return Error(ErrorCode::kTooLarge,
                 "object exceeds " + std::to_string(max_bytes_) + " bytes");
  }
  ContentId cid = ComputeCid(content);
  if (Contains(cid)) return cid;
  CC_ASSIGN_OR_RETURN(auto writer, BeginWrite());
  CC_RETURN_IF_ERROR(writer->Append(content));
  return writer->Commit();
}

bool MediaStore::Contains(const ContentId& cid) const {
  std::error_code ec;
  return fs::is_regular_file(PathFor(cid), ec);
}

Result<std::string> MediaStore::Get(const ContentId& cid) const {
  fs::path path = PathFor(cid);
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kNotFound, cid.ToString());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) return Io("cannot read", path);
  if (crypto::Sha256Hex(bytes) != cid.digest_hex) {
    return Error(ErrorCode::kIntegrityFailure,
                 "stored bytes do not match " + cid.ToString());
  }
  return bytes;
}

MediaStore::VerifyReport MediaStore::VerifyAll() const {
  VerifyReport report;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_ / "media", ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file()) continue;
    ++report.checked;
    const fs::path& p = it->path();
    std::string name = p.filename().string();
    if (!crypto::IsLowerHex(name, 64) ||
        p.parent_path().filename() != name.substr(2, 2) ||
        p.parent_path().parent_path().filename() != name.substr(0, 2)) {
      report.failures.emplace_back(p, "misplaced object");
      continue;
    }
    auto digest = HashFile(p);
    if (!digest.ok()) {
      report.failures.emplace_back(p, digest.error().message());
    } else if (*digest != name) {
      report.failures.emplace_back(p, "digest mismatch");
    }
  }
  return report;
}

}  // namespace classicschain::media
