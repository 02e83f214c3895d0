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

#include <optional>
#include <string_view>

#include "classicschain/contracts/assets.h"
#include "classicschain/identity/identity.h"

namespace classicschain::contracts {

// Vehicle operations subject to attribute-based authorization.
enum class Operation {
  kRegisterClassic,
  kAddRestorationStep,
  kAddDocument,
  kCertifyVehicle,
  kGrantAccess,
  kRevokeAccess,
  kTransferOwnership,
  kGetVehicleCard,
  kGetVehicleCardHistory,
  kAnchorMedia,
};

inline constexpr Operation kAllOperations[] = {
    Operation::kRegisterClassic,   Operation::kAddRestorationStep,
    Operation::kAddDocument,       Operation::kCertifyVehicle,
    Operation::kGrantAccess,       Operation::kRevokeAccess,
    Operation::kTransferOwnership, Operation::kGetVehicleCard,
    Operation::kGetVehicleCardHistory, Operation::kAnchorMedia,
};

std::string_view OperationName(Operation op);

// The attributes a decision depends on: the role attribute from the caller's
// certificate, whether the caller owns the vehicle, and the caller's grant.
struct Subject {
  identity::Role role = identity::Role::kOwner;
  bool is_owner = false;
  std::optional<AccessLevel> grant;
};

// Pure policy. kRegisterClassic ignores ownership and grants (the vehicle
// does not exist yet).
bool IsAllowed(Operation op, const Subject& subject);

}  // namespace classicschain::contracts
