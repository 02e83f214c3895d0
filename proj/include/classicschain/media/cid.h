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

#include <optional>
#include <string>
#include <string_view>

namespace classicschain::media {

inline constexpr std::string_view kCidAlgo = "sha2-256";

// Content identifier: SHA-256 of the exact stored bytes, written as
// "sha2-256:<64 lowercase hex>".
struct ContentId {
  std::string digest_hex;

  std::string ToString() const;
  static std::optional<ContentId> Parse(std::string_view text);

  friend bool operator==(const ContentId&, const ContentId&) = default;
  friend auto operator<=>(const ContentId&, const ContentId&) = default;
};

ContentId ComputeCid(std::string_view content);

}  // namespace classicschain::media
