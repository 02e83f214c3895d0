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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>

namespace classicschain {

using SteadyTime = std::chrono::steady_clock::time_point;
using Millis = std::chrono::milliseconds;

// Injectable time source. WallMillis is UTC milliseconds since the epoch.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t WallMillis() const = 0;
  virtual SteadyTime Now() const = 0;
};

class SystemClock final : public Clock {
 public:
  std::int64_t WallMillis() const override;
  SteadyTime Now() const override { return std::chrono::steady_clock::now(); }
};

std::shared_ptr<Clock> DefaultClock();

// Manually advanced clock for tests.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t start_wall_ms = 1700000000000)
      : wall_ms_(start_wall_ms) {}

  std::int64_t WallMillis() const override { return wall_ms_.load(); }
  SteadyTime Now() const override {
    return SteadyTime{} + Millis(offset_ms_.load());
  }
  void Advance(Millis d) {
    wall_ms_ += d.count();
    offset_ms_ += d.count();
  }

 private:
  std::atomic<std::int64_t> wall_ms_;
  std::atomic<std::int64_t> offset_ms_{0};
};

}  // namespace classicschain
