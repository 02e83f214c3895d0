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
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/clock.h"
#include "classicschain/common/status.h"

namespace httplib {
class Client;
}

namespace classicschain::gateway {

struct ClientResponse {
  int status = 0;  // 0: no response (connection failure)
  Json body;       // parsed JSON, or null for non-JSON replies
  std::string raw;
  double latency_ms = 0;

  // error.code of an error body, empty otherwise.
  std::string error_code() const;
};

struct UploadFile {
  std::string filename;
  std::string media_type = "application/octet-stream";
  std::string content;
};

// Small blocking REST client for the gateway routes. One instance per
// thread.
class ApiClient {
 public:
  // `tls`: HTTPS without certificate verification unless `ca_file` is set.
  ApiClient(std::string host, int port, bool tls = false, std::string ca_file = "");
  ~ApiClient();
  ApiClient(ApiClient&&) noexcept;
  ApiClient& operator=(ApiClient&&) noexcept;

  void set_token(std::string token) { token_ = std::move(token); }
  const std::string& token() const { return token_; }

  ClientResponse Get(const std::string& path);
  ClientResponse Delete(const std::string& path);
  ClientResponse Post(const std::string& path, const Json& body);
  // multipart/form-data with an optional "metadata" JSON part.
  ClientResponse PostMultipart(const std::string& path, const Json* metadata,
                               const std::vector<UploadFile>& files);

  // POST /users then POST /auth/login; keeps the token on success.
  ClientResponse RegisterAndLogin(const Json& registration);

 private:
  std::unique_ptr<httplib::Client> client_;
  std::string token_;
};

}  // namespace classicschain::gateway
