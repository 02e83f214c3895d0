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

#include "classicschain/common/ulid.h"

#include <sodium.h>

namespace classicschain {

namespace {
constexpr char kCrockford[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";
}  // namespace

std::string UlidGenerator::Next(std::int64_t wall_ms) {
  std::lock_guard<std::mutex> lock(mu_);
  if (wall_ms <= last_ms_) {
    // Same (or regressed) millisecond: keep the timestamp and bump entropy.
    wall_ms = last_ms_;
    for (int i = 9; i >= 0; --i) {
      if (++entropy_[i] != 0) break;
    }
  } else {
    last_ms_ = wall_ms;
    randombytes_buf(entropy_, sizeof(entropy_));
    entropy_[0] &= 0x7f;  // leave headroom for increments
  }

  std::string out(26, '0');
  auto ts = static_cast<std::uint64_t>(wall_ms);
  for (int i = 9; i >= 0; --i) {
    out[i] = kCrockford[ts & 31];
    ts >>= 5;
  }
  // 80 bits of entropy -> 16 characters.
  unsigned __int128 bits = 0;
  for (unsigned char b : entropy_) bits = (bits << 8) | b;
  for (int i = 25; i >= 10; --i) {
    out[i] = kCrockford[static_cast<int>(bits & 31)];
    bits >>= 5;
  }
  return out;
}

bool IsUlid(std::string_view id) {
  if (id.size() != 26) return false;
  for (char c : id) {
    bool found = false;
    for (char k : std::string_view(kCrockford)) found |= (c == k);
    if (!found) return false;
  }
  return true;
}

}  // namespace classicschain
