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
#include <string>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"

namespace classicschain::gateway {

enum class AnchorMode { kAsync, kSync };
std::string_view AnchorModeName(AnchorMode mode);

// Gateway configuration. The file is JSON with the sections below; any value
// can be overridden through the environment as
// CLASSICSCHAIN_<SECTION>__<KEY>, e.g. CLASSICSCHAIN_SERVER__PORT=9443 or
// CLASSICSCHAIN_MEDIA__ANCHOR_MODE=sync. Key matching ignores case and
// underscores; values are parsed as JSON when possible, else taken as
// strings.
//
//   {
//     "dataDir": "./data",
//     "server": {"host", "port", "threads", "testMode",
//                "tls": {"certFile", "keyFile"}},
//     "auth": {"tokenSecret", "tokenTtlSeconds", "argon2OpsLimit",
//              "argon2MemLimitKiB"},
//     "ledger": {"maxMessagesPerBlock", "batchTimeoutMs", "fsync",
//                "commitTimeoutMs", "transport", "loopbackBasePort"},
//     "media": {"maxBytes", "anchorMode", "anchorDelayMs",
//               "anchorMaxRetries", "anchorBackoffMs"},
//     "notifications": {"webhooks", "maxAttempts", "backoffMs"},
//     "api": {"mvccRetries"}
//   }
struct GatewayConfig {
  std::filesystem::path data_dir = "./data";

  std::string host = "127.0.0.1";
  int port = 8443;  // 0 picks a free port
  int threads = 8;
  // Plain HTTP is refused unless test mode is on.
  bool test_mode = false;
  std::filesystem::path tls_cert_file;
  std::filesystem::path tls_key_file;

  // Hex HMAC key for session tokens. Empty: generated on first start and
  // kept in <dataDir>/token.key.
  std::string token_secret;
  std::int64_t token_ttl_seconds = 24 * 3600;
  unsigned long long argon2_ops_limit = 2;
  std::size_t argon2_mem_limit_kib = 64 * 1024;

  std::size_t max_messages_per_block = 10;
  Millis batch_timeout{500};
  bool fsync = true;
  Millis commit_timeout{30000};
  std::string transport = "in-memory";  // or "loopback"
  int loopback_base_port = 17050;

  std::uint64_t max_media_bytes = 50ull << 20;
  AnchorMode anchor_mode = AnchorMode::kAsync;
  // Per-file cost standing in for a remote storage upload before a content
  // id is anchored (both modes). Set to 0 for a purely local store.
  Millis anchor_delay{1000};
  int anchor_max_retries = 3;
  Millis anchor_backoff{1000};

  std::vector<std::string> webhooks;
  int webhook_max_attempts = 5;
  Millis webhook_backoff{500};

  int mvcc_retries = 3;

  Json ToJson() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static Result<GatewayConfig> FromJson(const Json& json);
};

// Applies CLASSICSCHAIN_* variables from `env` (NAME=value strings) to a
// configuration document.
Status ApplyEnvOverrides(Json& config, const std::vector<std::string>& env);
std::vector<std::string> ProcessEnvironment();

// Reads `path` (may be empty for defaults) and applies the process
// environment.
Result<GatewayConfig> LoadConfig(const std::filesystem::path& path);

}  // namespace classicschain::gateway
