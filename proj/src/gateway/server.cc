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


#include "classicschain/gateway/server.h"

#include <httplib.h>

#include <optional>

namespace classicschain::gateway {
namespace {

constexpr std::size_t kMaxJsonBody = 1 << 20;

void Send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

void SendError(httplib::Response& res, const Error& e) { Send(res, ErrorResponse(e)); }

Result<Json> JsonBody(const std::string& text) {
  if (text.size() > kMaxJsonBody) return Error(ErrorCode::kTooLarge, "request body too large");
  auto j = ParseJson(text.empty() ? std::string("{}") : text);
  if (!j.ok()) return Error(ErrorCode::kInvalidArgument, "body is not valid JSON");
  return j;
}

// Streams the parts of a multipart request: the "metadata" part is kept in
// memory, every part carrying a filename goes into the media store.
struct MultipartIntake {
  explicit MultipartIntake(media::MediaStore* s) : store(s) {}

  media::MediaStore* store;
  std::string metadata;
  std::vector<StoredFile> files;
  std::optional<Error> error;

  std::unique_ptr<media::MediaStore::Writer> writer;
  StoredFile current;
  enum class Target { kNone, kMetadata, kFile } target = Target::kNone;

  bool FinishPart() {
    if (target == Target::kFile && writer) {
      auto cid = writer->Commit();
      current.size = writer->size();
      writer.reset();
      if (!cid.ok()) {
        error = cid.error();
        return false;
      }
      current.cid = *cid;
      files.push_back(current);
    }
    target = Target::kNone;
    return true;
  }

  bool OnHeader(const httplib::MultipartFormData& part) {
    if (!FinishPart()) return false;
    if (!part.filename.empty()) {
      auto w = store->BeginWrite();
      if (!w.ok()) {
        error = w.error();
        return false;
      }
      writer = std::move(w).value();
      current = StoredFile{};
      current.filename = part.filename;
      current.media_type =
          part.content_type.empty() ? "application/octet-stream" : part.content_type;
      target = Target::kFile;
    } else if (part.name == "metadata") {
      target = Target::kMetadata;
    }
    return true;
  }

  bool OnData(const char* data, std::size_t len) {
    if (target == Target::kMetadata) {
      if (metadata.size() + len > kMaxJsonBody) {
        error = Error(ErrorCode::kTooLarge, "metadata part too large");
        return false;
      }
      metadata.append(data, len);
    } else if (target == Target::kFile) {
      Status s = writer->Append(std::string_view(data, len));
      if (!s.ok()) {
        error = s.error();
        writer.reset();
        target = Target::kNone;
        return false;
      }
    }
    return true;
  }
};

}  // namespace

Result<std::unique_ptr<ApiServer>> ApiServer::Start(Gateway* gateway) {
  const GatewayConfig& cfg = gateway->config();
  std::unique_ptr<ApiServer> s(new ApiServer());
  s->gateway_ = gateway;
  const bool have_tls = !cfg.tls_cert_file.empty() && !cfg.tls_key_file.empty();
  if (have_tls) {
    auto ssl = std::make_unique<httplib::SSLServer>(cfg.tls_cert_file.c_str(),
                                                    cfg.tls_key_file.c_str());
    if (!ssl->is_valid()) {
      return Error(ErrorCode::kInvalidArgument, "cannot load TLS certificate or key");
    }
    s->server_ = std::move(ssl);
    s->tls_ = true;
  } else if (cfg.test_mode) {
    s->server_ = std::make_unique<httplib::Server>();
  } else {
    return Error(ErrorCode::kInvalidArgument,
                 "server.tls.certFile and keyFile are required outside test mode");
  }
  const int threads = std::max(1, cfg.threads);
  s->server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  s->server_->set_tcp_nodelay(true);
  s->Install();

  if (cfg.port == 0) {
    s->port_ = s->server_->bind_to_any_port(cfg.host);
    if (s->port_ <= 0) return Error(ErrorCode::kIoFailure, "cannot bind " + cfg.host);
  } else {
    if (!s->server_->bind_to_port(cfg.host, cfg.port)) {
      return Error(ErrorCode::kIoFailure,
                   "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
    }
    s->port_ = cfg.port;
  }
  httplib::Server* raw = s->server_.get();
  s->thread_ = std::thread([raw] { raw->listen_after_bind(); });
  // stop() before the accept loop starts would be lost.
  raw->wait_until_ready();
  return s;
}

ApiServer::~ApiServer() { Stop(); }

void ApiServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::Install() {
  using httplib::ContentReader;
  using httplib::Request;
  using httplib::Response;
  Gateway* gw = gateway_;
  httplib::Server& svr = *server_;

  // Wraps a protected route: resolves the session before the handler runs.
  auto authed = [gw](auto handler) {
    return [gw, handler](const Request& req, Response& res) {
      auto who = gw->Authenticate(req.get_header_value("Authorization"));
      if (!who.ok()) return SendError(res, who.error());
      handler(*who, req, res);
    };
  };
  auto with_json = [](const Request& req, Response& res, auto&& fn) {
    auto body = JsonBody(req.body);
    if (!body.ok()) return SendError(res, body.error());
    Send(res, fn(*body));
  };

  svr.Post("/users", [gw, with_json](const Request& req, Response& res) {
    with_json(req, res, [&](const Json& b) { return gw->RegisterUser(b); });
  });
  svr.Post("/auth/login", [gw, with_json](const Request& req, Response& res) {
    with_json(req, res, [&](const Json& b) { return gw->Login(b); });
  });
  svr.Get("/health", [gw](const Request&, Response& res) { Send(res, gw->Health()); });

  svr.Get(R"(/users/([^/]+)/classics)",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            Send(res, gw->ListClassics(who, req.matches[1]));
          }));
  svr.Get(R"(/users/([^/]+)/events)",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            Send(res, gw->ListEvents(who, req.matches[1]));
          }));
  svr.Post("/classics",
           authed([gw, with_json](const SessionClaims& who, const Request& req, Response& res) {
             with_json(req, res, [&](const Json& b) { return gw->RegisterClassic(who, b); });
           }));
  svr.Get(R"(/classics/([^/]+)/card)",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            Send(res, gw->GetCard(who, req.matches[1]));
          }));
  svr.Get(R"(/classics/([^/]+)/history)",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            Send(res, gw->GetHistory(who, req.matches[1]));
          }));
  svr.Post(R"(/classics/([^/]+)/certify)",
           authed([gw](const SessionClaims& who, const Request& req, Response& res) {
             Send(res, gw->Certify(who, req.matches[1]));
           }));
  svr.Post(R"(/classics/([^/]+)/access)",
           authed([gw, with_json](const SessionClaims& who, const Request& req, Response& res) {
             with_json(req, res,
                       [&](const Json& b) { return gw->GrantAccess(who, req.matches[1], b); });
           }));
  svr.Delete(R"(/classics/([^/]+)/access/([^/]+))",
             authed([gw](const SessionClaims& who, const Request& req, Response& res) {
               Send(res, gw->RevokeAccess(who, req.matches[1], req.matches[2]));
             }));
  svr.Post(R"(/classics/([^/]+)/owner)",
           authed([gw, with_json](const SessionClaims& who, const Request& req, Response& res) {
             with_json(req, res, [&](const Json& b) {
               return gw->TransferOwnership(who, req.matches[1], b);
             });
           }));
  svr.Get(R"(/classics/([^/]+)/media/([^/]+))",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            auto bytes = gw->GetMedia(who, req.matches[1], req.matches[2]);
            if (!bytes.ok()) return SendError(res, bytes.error());
            res.set_content(*bytes, "application/octet-stream");
          }));
  svr.Get(R"(/anchors/([^/]+))",
          authed([gw](const SessionClaims& who, const Request& req, Response& res) {
            Send(res, gw->GetAnchorJob(who, req.matches[1]));
          }));

  // Multipart uploads. The session is checked before any byte is stored.
  auto upload = [gw](bool restoration) {
    return [gw, restoration](const Request& req, Response& res, const ContentReader& reader) {
      // A body left unread makes the connection unusable for the next request.
      auto reject = [&res](const Error& e) {
        res.set_header("Connection", "close");
        SendError(res, e);
      };
      auto who = gw->Authenticate(req.get_header_value("Authorization"));
      if (!who.ok()) return reject(who.error());
      if (!req.is_multipart_form_data()) {
        return reject(Error(ErrorCode::kInvalidArgument, "expected multipart/form-data"));
      }
      MultipartIntake intake(&gw->media());
      bool read_ok = reader(
          [&](const httplib::MultipartFormData& part) { return intake.OnHeader(part); },
          [&](const char* data, std::size_t len) { return intake.OnData(data, len); });
      if (read_ok) intake.FinishPart();
      if (intake.writer) intake.writer->Abort();
      if (intake.error) return reject(*intake.error);
      if (!read_ok) return reject(Error(ErrorCode::kInvalidArgument, "malformed multipart body"));
      const std::string vin = req.matches[1];
      if (!restoration) return Send(res, gw->AddDocument(*who, vin, intake.files));
      auto meta = JsonBody(intake.metadata);
      if (!meta.ok()) return SendError(res, meta.error());
      Send(res, gw->AddRestoration(*who, vin, *meta, intake.files));
    };
  };
  svr.Post(R"(/classics/([^/]+)/restorations)", upload(true));
  svr.Post(R"(/classics/([^/]+)/documents)", upload(false));

  svr.set_error_handler([](const Request&, Response& res) {
    if (!res.body.empty()) return;
    ErrorCode code = res.status == 404 ? ErrorCode::kNotFound : ErrorCode::kInvalidArgument;
    if (res.status == 413) code = ErrorCode::kTooLarge;
    Json body = ErrorBody(Error(code, "no such route or malformed request"));
    res.set_content(body.dump(), "application/json");
  });
  svr.set_exception_handler([](const Request&, Response& res, std::exception_ptr ep) {
    std::string what = "unexpected failure";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    SendError(res, Error(ErrorCode::kInternal, what));
  });
}

}  // namespace classicschain::gateway
