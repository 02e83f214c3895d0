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


#include "classicschain/media/cid.h"

#include "classicschain/common/crypto.h"

namespace classicschain::media {

std::string ContentId::ToString() const {
  return std::string(kCidAlgo) + ":" + digest_hex;
}

std::optional<ContentId> ContentId::Parse(std::string_view text) {
  if (text.size() != kCidAlgo.size() + 1 + 64 ||
      text.substr(0, kCidAlgo.size()) != kCidAlgo ||
      text[kCidAlgo.size()] != ':') {
    return std::nullopt;
  }
  std::string_view hex = text.substr(kCidAlgo.size() + 1);
  if (!crypto::IsLowerHex(hex, 64)) return std::nullopt;
  return ContentId{std::string(hex)};
}

ContentId ComputeCid(std::string_view content) {
  return ContentId{crypto::Sha256Hex(content)};
}

}  // namespace classicschain::media
