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

#include <memory>
#include <string>

#include "classicschain/gateway/client.h"
#include "classicschain/gateway/config.h"
#include "classicschain/gateway/gateway.h"
#include "classicschain/gateway/server.h"

namespace classicschain::testing {

// Gateway settings for tests: plain HTTP on a free port, short batching,
// cheap password hashing, no injected anchor delay.
inline gateway::GatewayConfig FastGatewayConfig(const std::filesystem::path& dir) {
  gateway::GatewayConfig c;
  c.data_dir = dir;
  c.port = 0;
  c.test_mode = true;
  c.threads = 8;
  c.batch_timeout = Millis(20);
  c.fsync = false;
  c.argon2_ops_limit = 1;
  c.argon2_mem_limit_kib = 8 * 1024;
  c.anchor_delay = Millis(0);
  c.anchor_backoff = Millis(50);
  c.webhook_backoff = Millis(50);
  return c;
}

// A gateway with its HTTP server running.
struct RunningGateway {
  std::unique_ptr<gateway::Gateway> gateway;
  std::unique_ptr<gateway::ApiServer> server;

  static Result<std::unique_ptr<RunningGateway>> Start(gateway::GatewayConfig config,
                                                       gateway::GatewayHooks hooks = {}) {
    auto rg = std::make_unique<RunningGateway>();
    CC_ASSIGN_OR_RETURN(rg->gateway, gateway::Gateway::Open(std::move(config), std::move(hooks)));
    CC_ASSIGN_OR_RETURN(rg->server, gateway::ApiServer::Start(rg->gateway.get()));
    return rg;
  }
  ~RunningGateway() {
    if (server) server->Stop();
    if (gateway) gateway->Close();
  }

  gateway::ApiClient Client() const {
    return gateway::ApiClient("127.0.0.1", server->port(), server->tls());
  }
};

inline Json UserBody(const std::string& user_id, const std::string& org,
                     const std::string& role) {
  return Json{{"displayName", "User " + user_id},
              {"email", user_id + "@example.org"},
              {"password", "pw-" + user_id + "-secret"},
              {"org", org},
              {"role", role},
              {"userId", user_id}};
}

inline Json StepMetadata(const std::string& title) {
  return Json{{"activityType", "bodywork"},
              {"description", "panel work"},
              {"materials", {"steel"}},
              {"title", title},
              {"tools", {"hammer"}}};
}

}  // namespace classicschain::testing
