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
#include <mutex>
#include <string>
#include <string_view>

namespace classicschain {

// 26-character Crockford base32 ids: 48-bit millisecond timestamp followed by
// 80 bits that are random on a new millisecond and incremented within the
// same millisecond, so ids from one generator sort in creation order.
class UlidGenerator {
 public:
  std::string Next(std::int64_t wall_ms);

 private:
  std::mutex mu_;
  std::int64_t last_ms_ = -1;
  unsigned char entropy_[10] = {};
};

bool IsUlid(std::string_view id);

}  // namespace classicschain
