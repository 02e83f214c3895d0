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


#include "classicschain/gateway/client.h"

#include <httplib.h>

#include <chrono>

namespace classicschain::gateway {
namespace {

ClientResponse Convert(const httplib::Result& r, std::chrono::steady_clock::time_point start) {
  ClientResponse out;
  out.latency_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (!r) return out;
  out.status = r->status;
  out.raw = r->body;
  auto j = ParseJson(r->body);
  if (j.ok()) out.body = std::move(j).value();
  return out;
}

}  // namespace

std::string ClientResponse::error_code() const {
  if (body.is_object() && body.contains("error") && body["error"].is_object()) {
    return body["error"].value("code", "");
  }
  return "";
}

ApiClient::ApiClient(std::string host, int port, bool tls, std::string ca_file) {
  std::string scheme_host = (tls ? "https://" : "http://") + host + ":" + std::to_string(port);
  client_ = std::make_unique<httplib::Client>(scheme_host);
  if (tls) {
    if (ca_file.empty()) {
      client_->enable_server_certificate_verification(false);
    } else {
      client_->set_ca_cert_path(ca_file.c_str());
    }
  }
  client_->set_keep_alive(true);
  client_->set_tcp_nodelay(true);
  client_->set_connection_timeout(5, 0);
  client_->set_read_timeout(120, 0);
  client_->set_write_timeout(120, 0);
}

ApiClient::~ApiClient() = default;
ApiClient::ApiClient(ApiClient&&) noexcept = default;
ApiClient& ApiClient::operator=(ApiClient&&) noexcept = default;

namespace {
httplib::Headers AuthHeaders(const std::string& token) {
  httplib::Headers h;
  if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
  return h;
}
}  // namespace

ClientResponse ApiClient::Get(const std::string& path) {
  auto start = std::chrono::steady_clock::now();
  return Convert(client_->Get(path, AuthHeaders(token_)), start);
}

ClientResponse ApiClient::Delete(const std::string& path) {
  auto start = std::chrono::steady_clock::now();
  return Convert(client_->Delete(path, AuthHeaders(token_)), start);
}

ClientResponse ApiClient::Post(const std::string& path, const Json& body) {
  auto start = std::chrono::steady_clock::now();
  return Convert(client_->Post(path, AuthHeaders(token_), body.dump(), "application/json"),
                 start);
}

ClientResponse ApiClient::PostMultipart(const std::string& path, const Json* metadata,
                                        const std::vector<UploadFile>& files) {
  httplib::MultipartFormDataItems items;
  if (metadata != nullptr) {
    items.push_back({"metadata", metadata->dump(), "", "application/json"});
  }
  for (const auto& f : files) items.push_back({"file", f.content, f.filename, f.media_type});
  auto start = std::chrono::steady_clock::now();
  return Convert(client_->Post(path, AuthHeaders(token_), items), start);
}

ClientResponse ApiClient::RegisterAndLogin(const Json& registration) {
  ClientResponse reg = Post("/users", registration);
  if (reg.status != 201) return reg;
  ClientResponse login = Post("/auth/login", {{"email", registration.at("email")},
                                              {"password", registration.at("password")}});
  if (login.status == 200) token_ = login.body.value("token", "");
  login.body["userId"] = reg.body.value("userId", "");
  return login;
}

}  // namespace classicschain::gateway
