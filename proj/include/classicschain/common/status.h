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

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace classicschain {

// Every failure the engine can report. Names are stable: they appear in
// REST error bodies, CLI output and bench CSV files.
enum class ErrorCode {
  kOk = 0,
  // ledger
  kUnknownFunction,
  kAuthDenied,
  kMvccConflict,
  kOrderingUnavailable,
  kNoLeader,
  kBadSignature,
  kEndorsementFailure,
  kTimeout,
  // contracts
  kVinExists,
  kBadVin,
  kUnknownVin,
  kBadEvidence,
  kUnknownUser,
  kNoSuchGrant,
  kSelfTransfer,
  kInvalidArgument,
  // identity
  kDuplicateUser,
  kRoleOrgMismatch,
  kUnknownKey,
  kMalformedCert,
  // mediastore
  kTooLarge,
  kIoFailure,
  kNotFound,
  kIntegrityFailure,
  // gateway
  kEmailExists,
  kBadCredentials,
  kTokenExpired,
  kTokenInvalid,
  kEnrollmentFailure,
  // bench
  kTargetUnreachable,
  kInternal,
};

inline constexpr ErrorCode kAllErrorCodes[] = {
    ErrorCode::kUnknownFunction,    ErrorCode::kAuthDenied,
    ErrorCode::kMvccConflict,       ErrorCode::kOrderingUnavailable,
    ErrorCode::kNoLeader,           ErrorCode::kBadSignature,
    ErrorCode::kEndorsementFailure, ErrorCode::kTimeout,
    ErrorCode::kVinExists,          ErrorCode::kBadVin,
    ErrorCode::kUnknownVin,         ErrorCode::kBadEvidence,
    ErrorCode::kUnknownUser,        ErrorCode::kNoSuchGrant,
    ErrorCode::kSelfTransfer,       ErrorCode::kInvalidArgument,
    ErrorCode::kDuplicateUser,      ErrorCode::kRoleOrgMismatch,
    ErrorCode::kUnknownKey,         ErrorCode::kMalformedCert,
    ErrorCode::kTooLarge,           ErrorCode::kIoFailure,
    ErrorCode::kNotFound,           ErrorCode::kIntegrityFailure,
    ErrorCode::kEmailExists,        ErrorCode::kBadCredentials,
    ErrorCode::kTokenExpired,       ErrorCode::kTokenInvalid,
    ErrorCode::kEnrollmentFailure,  ErrorCode::kTargetUnreachable,
    ErrorCode::kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);
std::optional<ErrorCode> ErrorCodeFromName(std::string_view name);

// A failure together with a human-readable explanation.
class Error {
 public:
  Error(ErrorCode code, std::string message = {})
      : code_(code), message_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  std::string ToString() const;

 private:
  ErrorCode code_;
  std::string message_;
};

// Value-or-error. Mirrors StatusOr<T>: a Result is either ok() and holds a
// T, or holds an Error.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : data_(std::move(value)) {}
  Result(Error error) : data_(std::move(error)) {}
  Result(ErrorCode code, std::string message = {})
      : data_(Error(code, std::move(message))) {}

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    assert(ok());
    return std::get<T>(data_);
  }
  T& value() & {
    assert(ok());
    return std::get<T>(data_);
  }
  T&& value() && {
    assert(ok());
    return std::get<T>(std::move(data_));
  }
  const Error& error() const {
    assert(!ok());
    return std::get<Error>(data_);
  }
  ErrorCode code() const { return ok() ? ErrorCode::kOk : error().code(); }

  const T& operator*() const& { return value(); }
  T& operator*() & { return value(); }
  T&& operator*() && { return std::move(*this).value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

 private:
  std::variant<T, Error> data_;
};

// Result without a value.
class [[nodiscard]] Status {
 public:
  Status() = default;
  Status(Error error) : error_(std::move(error)) {}
  Status(ErrorCode code, std::string message = {})
      : error_(Error(code, std::move(message))) {}

  static Status Ok() { return Status(); }

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Error& error() const {
    assert(!ok());
    return *error_;
  }
  ErrorCode code() const { return ok() ? ErrorCode::kOk : error_->code(); }
  std::string ToString() const { return ok() ? "OK" : error_->ToString(); }

 private:
  std::optional<Error> error_;
};

}  // namespace classicschain

#define CC_CONCAT_INNER(a, b) a##b
#define CC_CONCAT(a, b) CC_CONCAT_INNER(a, b)

// Propagates the error of a Status-returning expression.
#define CC_RETURN_IF_ERROR(expr)                     \
  do {                                               \
    auto _cc_status = (expr);                        \
    if (!_cc_status.ok()) return _cc_status.error(); \
  } while (0)

#define CC_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                             \
  if (!tmp.ok()) return tmp.error();             \
  lhs = std::move(tmp).value()

// lhs = value of a Result-returning expression, or return its error.
#define CC_ASSIGN_OR_RETURN(lhs, expr) \
  CC_ASSIGN_OR_RETURN_IMPL(CC_CONCAT(_cc_result_, __LINE__), lhs, expr)
