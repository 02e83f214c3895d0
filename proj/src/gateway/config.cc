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


#include "classicschain/gateway/config.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

extern char** environ;

namespace classicschain::gateway {

namespace {

constexpr std::string_view kEnvPrefix = "CLASSICSCHAIN_";

std::string Fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

Error Bad(const std::string& what) {
  return Error(ErrorCode::kInvalidArgument, "config: " + what);
}

template <typename T>
Status Read(const Json& section, const char* key, T& out) {
  if (!section.contains(key)) return Status::Ok();
  try {
    out = section.at(key).get<T>();
  } catch (const Json::exception&) {
    return Bad(std::string("bad value for ") + key);
  }
  return Status::Ok();
}

Status ReadMillis(const Json& section, const char* key, Millis& out) {
  std::int64_t ms = out.count();
  CC_RETURN_IF_ERROR(Read(section, key, ms));
  if (ms < 0) return Bad(std::string(key) + " must not be negative");
  out = Millis(ms);
  return Status::Ok();
}

Status CheckKeys(const Json& obj, std::initializer_list<const char*> keys,
                 const std::string& where) {
  if (!obj.is_object()) return Bad(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(),
                     [&](const char* k) { return it.key() == k; })) {
      return Bad("unknown key " + where + "." + it.key());
    }
  }
  return Status::Ok();
}

const Json& Section(const Json& root, const char* name) {
  static const Json kEmpty = Json::object();
  return root.contains(name) ? root.at(name) : kEmpty;
}

}  // namespace

std::string_view AnchorModeName(AnchorMode mode) {
  return mode == AnchorMode::kSync ? "sync" : "async";
}

Json GatewayConfig::ToJson() const {
  return Json{
      {"dataDir", data_dir.string()},
      {"server",
       {{"host", host},
        {"port", port},
        {"threads", threads},
        {"testMode", test_mode},
        {"tls", {{"certFile", tls_cert_file.string()},
                 {"keyFile", tls_key_file.string()}}}}},
      {"auth",
       {{"tokenSecret", token_secret},
        {"tokenTtlSeconds", token_ttl_seconds},
        {"argon2OpsLimit", argon2_ops_limit},
        {"argon2MemLimitKiB", argon2_mem_limit_kib}}},
      {"ledger",
       {{"maxMessagesPerBlock", max_messages_per_block},
        {"batchTimeoutMs", batch_timeout.count()},
        {"fsync", fsync},
        {"commitTimeoutMs", commit_timeout.count()},
        {"transport", transport},
        {"loopbackBasePort", loopback_base_port}}},
      {"media",
       {{"maxBytes", max_media_bytes},
        {"anchorMode", AnchorModeName(anchor_mode)},
        {"anchorDelayMs", anchor_delay.count()},
        {"anchorMaxRetries", anchor_max_retries},
        {"anchorBackoffMs", anchor_backoff.count()}}},
      {"notifications",
       {{"webhooks", webhooks},
        {"maxAttempts", webhook_max_attempts},
        {"backoffMs", webhook_backoff.count()}}},
      {"api", {{"mvccRetries", mvcc_retries}}},
  };
}

Result<GatewayConfig> GatewayConfig::FromJson(const Json& j) {
  GatewayConfig c;
  CC_RETURN_IF_ERROR(CheckKeys(j, {"dataDir", "server", "auth", "ledger", "media",
                                   "notifications", "api"},
                               "config"));
  std::string data_dir = c.data_dir.string();
  CC_RETURN_IF_ERROR(Read(j, "dataDir", data_dir));
  c.data_dir = data_dir;

  const Json& server = Section(j, "server");
  CC_RETURN_IF_ERROR(
      CheckKeys(server, {"host", "port", "threads", "testMode", "tls"}, "server"));
  CC_RETURN_IF_ERROR(Read(server, "host", c.host));
  CC_RETURN_IF_ERROR(Read(server, "port", c.port));
  CC_RETURN_IF_ERROR(Read(server, "threads", c.threads));
  CC_RETURN_IF_ERROR(Read(server, "testMode", c.test_mode));
  const Json& tls = Section(server, "tls");
  CC_RETURN_IF_ERROR(CheckKeys(tls, {"certFile", "keyFile"}, "server.tls"));
  std::string cert = c.tls_cert_file.string(), key = c.tls_key_file.string();
  CC_RETURN_IF_ERROR(Read(tls, "certFile", cert));
  CC_RETURN_IF_ERROR(Read(tls, "keyFile", key));
  c.tls_cert_file = cert;
  c.tls_key_file = key;
  if (c.port < 0 || c.port > 65535) return Bad("server.port out of range");
  if (c.threads < 1) return Bad("server.threads must be positive");

  const Json& auth = Section(j, "auth");
  CC_RETURN_IF_ERROR(CheckKeys(auth, {"tokenSecret", "tokenTtlSeconds", "argon2OpsLimit",
                                      "argon2MemLimitKiB"},
                               "auth"));
  CC_RETURN_IF_ERROR(Read(auth, "tokenSecret", c.token_secret));
  CC_RETURN_IF_ERROR(Read(auth, "tokenTtlSeconds", c.token_ttl_seconds));
  CC_RETURN_IF_ERROR(Read(auth, "argon2OpsLimit", c.argon2_ops_limit));
  CC_RETURN_IF_ERROR(Read(auth, "argon2MemLimitKiB", c.argon2_mem_limit_kib));
  if (c.token_ttl_seconds <= 0) return Bad("auth.tokenTtlSeconds must be positive");

  const Json& ledger = Section(j, "ledger");
  CC_RETURN_IF_ERROR(CheckKeys(ledger, {"maxMessagesPerBlock", "batchTimeoutMs", "fsync",
                                        "commitTimeoutMs", "transport",
                                        "loopbackBasePort"},
                               "ledger"));
  CC_RETURN_IF_ERROR(Read(ledger, "maxMessagesPerBlock", c.max_messages_per_block));
  CC_RETURN_IF_ERROR(ReadMillis(ledger, "batchTimeoutMs", c.batch_timeout));
  CC_RETURN_IF_ERROR(Read(ledger, "fsync", c.fsync));
  CC_RETURN_IF_ERROR(ReadMillis(ledger, "commitTimeoutMs", c.commit_timeout));
  CC_RETURN_IF_ERROR(Read(ledger, "transport", c.transport));
  CC_RETURN_IF_ERROR(Read(ledger, "loopbackBasePort", c.loopback_base_port));
  if (c.max_messages_per_block == 0) return Bad("ledger.maxMessagesPerBlock must be positive");
  if (c.transport != "in-memory" && c.transport != "loopback") {
    return Bad("ledger.transport must be in-memory or loopback");
  }

  const Json& media = Section(j, "media");
  CC_RETURN_IF_ERROR(CheckKeys(media, {"maxBytes", "anchorMode", "anchorDelayMs",
                                       "anchorMaxRetries", "anchorBackoffMs"},
                               "media"));
  CC_RETURN_IF_ERROR(Read(media, "maxBytes", c.max_media_bytes));
  std::string mode(AnchorModeName(c.anchor_mode));
  CC_RETURN_IF_ERROR(Read(media, "anchorMode", mode));
  if (mode == "async") {
    c.anchor_mode = AnchorMode::kAsync;
  } else if (mode == "sync") {
    c.anchor_mode = AnchorMode::kSync;
  } else {
    return Bad("media.anchorMode must be async or sync");
  }
  CC_RETURN_IF_ERROR(ReadMillis(media, "anchorDelayMs", c.anchor_delay));
  CC_RETURN_IF_ERROR(Read(media, "anchorMaxRetries", c.anchor_max_retries));
  CC_RETURN_IF_ERROR(ReadMillis(media, "anchorBackoffMs", c.anchor_backoff));

  const Json& notifications = Section(j, "notifications");
  CC_RETURN_IF_ERROR(CheckKeys(notifications, {"webhooks", "maxAttempts", "backoffMs"},
                               "notifications"));
  CC_RETURN_IF_ERROR(Read(notifications, "webhooks", c.webhooks));
  CC_RETURN_IF_ERROR(Read(notifications, "maxAttempts", c.webhook_max_attempts));
  CC_RETURN_IF_ERROR(ReadMillis(notifications, "backoffMs", c.webhook_backoff));

  const Json& api = Section(j, "api");
  CC_RETURN_IF_ERROR(CheckKeys(api, {"mvccRetries"}, "api"));
  CC_RETURN_IF_ERROR(Read(api, "mvccRetries", c.mvcc_retries));
  return c;
}

Status ApplyEnvOverrides(Json& config, const std::vector<std::string>& env) {
  if (!config.is_object()) config = Json::object();
  // Resolve names against the full default document so that keys absent
  // from the file can still be overridden.
  Json schema = GatewayConfig().ToJson();
  for (const auto& entry : env) {
    if (entry.rfind(kEnvPrefix, 0) != 0) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(kEnvPrefix.size(), eq - kEnvPrefix.size());
    std::string raw = entry.substr(eq + 1);

    std::vector<std::string> segments;
    std::size_t pos = 0;
    while (true) {
      auto next = name.find("__", pos);
      segments.push_back(name.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 2;
    }
    Json* target = &config;
    const Json* shape = &schema;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      std::string folded = Fold(segments[i]);
      std::string key;
      for (auto it = shape->begin(); it != shape->end(); ++it) {
        if (Fold(it.key()) == folded) key = it.key();
      }
      if (key.empty()) return Bad("unknown environment override " + entry.substr(0, eq));
      shape = &(*shape)[key];
      if (i + 1 == segments.size()) {
        auto parsed = ParseJson(raw);
        Json value = parsed.ok() ? *parsed : Json(raw);
        // A string-typed setting keeps a numeric-looking value as text.
        if (shape->is_string() && !value.is_string()) value = raw;
        (*target)[key] = value;
      } else {
        if (!target->contains(key) || !(*target)[key].is_object()) {
          (*target)[key] = Json::object();
        }
        target = &(*target)[key];
        if (!shape->is_object()) return Bad("override path too deep: " + name);
      }
    }
  }
  return Status::Ok();
}

std::vector<std::string> ProcessEnvironment() {
  std::vector<std::string> out;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) out.emplace_back(*e);
  return out;
}

Result<GatewayConfig> LoadConfig(const std::filesystem::path& path) {
  Json doc = Json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) return Error(ErrorCode::kIoFailure, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    CC_ASSIGN_OR_RETURN(doc, ParseJson(ss.str()));
  }
  CC_RETURN_IF_ERROR(ApplyEnvOverrides(doc, ProcessEnvironment()));
  auto config = GatewayConfig::FromJson(doc);
  if (config.ok() && !path.empty() && config->data_dir.is_relative()) {
    config->data_dir = path.parent_path() / config->data_dir;
  }
  return config;
}

}  // namespace classicschain::gateway
