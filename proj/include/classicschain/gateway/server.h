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
#include <thread>

#include "classicschain/common/status.h"
#include "classicschain/gateway/gateway.h"

namespace httplib {
class Server;
}

namespace classicschain::gateway {

// HTTPS front end for a Gateway. Routes:
//
//   POST   /users                         register
//   POST   /auth/login                    session token
//   GET    /users/{id}/classics           owned and authorized vehicles
//   GET    /users/{id}/events             own notifications
//   POST   /classics                      register a vehicle
//   GET    /classics/{vin}/card
//   GET    /classics/{vin}/history
//   POST   /classics/{vin}/restorations   multipart: "metadata" + file parts
//   POST   /classics/{vin}/documents      multipart: one file part
//   POST   /classics/{vin}/certify
//   POST   /classics/{vin}/access         {userId, level}
//   DELETE /classics/{vin}/access/{userId}
//   POST   /classics/{vin}/owner          {newOwnerUserId}
//   GET    /classics/{vin}/media/{cid}
//   GET    /anchors/{jobId}
//   GET    /health
//
// Everything except /users, /auth/login and /health needs
// "Authorization: Bearer <token>". Uploaded file parts are streamed into the
// media store as they arrive. Plain HTTP is served only in test mode.
class ApiServer {
 public:
  // Binds and starts serving on a background thread.
  static Result<std::unique_ptr<ApiServer>> Start(Gateway* gateway);
  ~ApiServer();

  int port() const { return port_; }
  bool tls() const { return tls_; }
  void Stop();

 private:
  ApiServer() = default;
  void Install();

  Gateway* gateway_ = nullptr;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  bool tls_ = false;
};

}  // namespace classicschain::gateway
