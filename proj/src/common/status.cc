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

#include "classicschain/common/status.h"

namespace classicschain {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "OK";
    case ErrorCode::kUnknownFunction: return "UNKNOWN_FUNCTION";
    case ErrorCode::kAuthDenied: return "AUTH_DENIED";
    case ErrorCode::kMvccConflict: return "MVCC_CONFLICT";
    case ErrorCode::kOrderingUnavailable: return "ORDERING_UNAVAILABLE";
    case ErrorCode::kNoLeader: return "NO_LEADER";
    case ErrorCode::kBadSignature: return "BAD_SIGNATURE";
    case ErrorCode::kEndorsementFailure: return "ENDORSEMENT_FAIL";
    case ErrorCode::kTimeout: return "TIMEOUT";
    case ErrorCode::kVinExists: return "VIN_EXISTS";
    case ErrorCode::kBadVin: return "BAD_VIN";
    case ErrorCode::kUnknownVin: return "UNKNOWN_VIN";
    case ErrorCode::kBadEvidence: return "BAD_EVIDENCE";
    case ErrorCode::kUnknownUser: return "UNKNOWN_USER";
    case ErrorCode::kNoSuchGrant: return "NO_SUCH_GRANT";
    case ErrorCode::kSelfTransfer: return "SELF_TRANSFER";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kDuplicateUser: return "DUPLICATE_USER";
    case ErrorCode::kRoleOrgMismatch: return "ROLE_ORG_MISMATCH";
    case ErrorCode::kUnknownKey: return "UNKNOWN_KEY";
    case ErrorCode::kMalformedCert: return "MALFORMED_CERT";
    case ErrorCode::kTooLarge: return "TOO_LARGE";
    case ErrorCode::kIoFailure: return "IO_FAILURE";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kIntegrityFailure: return "INTEGRITY_FAILURE";
    case ErrorCode::kEmailExists: return "EMAIL_EXISTS";
    case ErrorCode::kBadCredentials: return "BAD_CREDENTIALS";
    case ErrorCode::kTokenExpired: return "TOKEN_EXPIRED";
    case ErrorCode::kTokenInvalid: return "TOKEN_INVALID";
    case ErrorCode::kEnrollmentFailure: return "ENROLLMENT_FAILURE";
    case ErrorCode::kTargetUnreachable: return "TARGET_UNREACHABLE";
    case ErrorCode::kInternal: return "INTERNAL";
  }
  return "INTERNAL";
}

std::optional<ErrorCode> ErrorCodeFromName(std::string_view name) {
  if (name == "OK") return ErrorCode::kOk;
  for (ErrorCode code : kAllErrorCodes) {
    if (ErrorCodeName(code) == name) return code;
  }
  return std::nullopt;
}

std::string Error::ToString() const {
  std::string out(ErrorCodeName(code_));
  if (!message_.empty()) {
    out += ": ";
    out += message_;
  }
  return out;
}

}  // namespace classicschain
