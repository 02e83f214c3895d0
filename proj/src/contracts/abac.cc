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


#include "classicschain/contracts/abac.h"

namespace classicschain::contracts {

using identity::Role;

std::string_view OperationName(Operation op) {
  switch (op) {
    case Operation::kRegisterClassic: return "RegisterClassic";
    case Operation::kAddRestorationStep: return "AddRestorationStep";
    case Operation::kAddDocument: return "AddDocument";
    case Operation::kCertifyVehicle: return "CertifyVehicle";
    case Operation::kGrantAccess: return "GrantAccess";
    case Operation::kRevokeAccess: return "RevokeAccess";
    case Operation::kTransferOwnership: return "TransferOwnership";
    case Operation::kGetVehicleCard: return "GetVehicleCard";
    case Operation::kGetVehicleCardHistory: return "GetVehicleCardHistory";
    case Operation::kAnchorMedia: return "AnchorMedia";
  }
  return "";
}

bool IsAllowed(Operation op, const Subject& s) {
  auto at_least = [&](AccessLevel level) {
    return s.grant && static_cast<int>(*s.grant) >= static_cast<int>(level);
  };
  switch (op) {
    case Operation::kRegisterClassic:
      return s.role == Role::kRestorer || s.role == Role::kCertifier;
    case Operation::kAddRestorationStep:
      return s.role == Role::kRestorer &&
             (s.is_owner || at_least(AccessLevel::kWrite));
    case Operation::kAddDocument:
      return s.is_owner ||
             ((s.role == Role::kRestorer || s.role == Role::kCertifier) &&
              at_least(AccessLevel::kWrite));
    case Operation::kCertifyVehicle:
      return s.role == Role::kCertifier && at_least(AccessLevel::kRead);
    case Operation::kGrantAccess:
    case Operation::kRevokeAccess:
    case Operation::kTransferOwnership:
      return s.is_owner;
    case Operation::kGetVehicleCard:
    case Operation::kGetVehicleCardHistory:
      return s.is_owner || s.grant.has_value();
    case Operation::kAnchorMedia:
      return s.is_owner || at_least(AccessLevel::kWrite);
  }
  return false;
}

}  // namespace classicschain::contracts
