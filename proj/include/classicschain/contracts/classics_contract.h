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

#include <string>
#include <string_view>

#include "classicschain/contracts/abac.h"
#include "classicschain/contracts/assets.h"
#include "classicschain/ledger/world_state.h"

namespace classicschain::contracts {

// Function names as they appear in transaction records.
namespace fn {
inline constexpr char kRegisterUser[] = "RegisterUser";
inline constexpr char kRegisterClassic[] = "RegisterClassic";
inline constexpr char kAddRestorationStep[] = "AddRestorationStep";
inline constexpr char kAddDocument[] = "AddDocument";
inline constexpr char kCertifyVehicle[] = "CertifyVehicle";
inline constexpr char kGrantAccess[] = "GrantAccess";
inline constexpr char kRevokeAccess[] = "RevokeAccess";
inline constexpr char kTransferOwnership[] = "TransferOwnership";
inline constexpr char kAnchorMedia[] = "AnchorMedia";
inline constexpr char kGetVehicleCard[] = "GetVehicleCard";
inline constexpr char kGetVehicleCardHistory[] = "GetVehicleCardHistory";
inline constexpr char kListClassicsForUser[] = "ListClassicsForUser";
}  // namespace fn

// True for functions that never write (served through evaluateQuery).
bool IsQueryFunction(std::string_view function);

// The vehicle provenance contract.
//
//   RegisterUser         []                          -> UserEntry
//   RegisterClassic      [vin, detailsJson, ownerId]  -> VehicleCard
//   AddRestorationStep   [vin, stepJson, evidenceJson] -> {stepId, vin}
//   AddDocument          [vin, docJson]              -> VehicleCard
//   CertifyVehicle       [vin]                       -> VehicleCard
//   GrantAccess          [vin, granteeId, level]     -> Access
//   RevokeAccess         [vin, granteeId]            -> Access
//   TransferOwnership    [vin, newOwnerId]           -> VehicleCard
//   AnchorMedia          [vin, refKind, cid]         -> AnchorRecord
//   GetVehicleCard       [vin]                       -> VehicleCard
//   GetVehicleCardHistory [vin]                      -> {vin, versions}
//   ListClassicsForUser  [userId]                    -> {classics}
//
// All responses are canonical JSON. Callers must first register themselves
// with RegisterUser, which binds their certificate to their userId.
class ClassicsContract final : public ledger::Chaincode {
 public:
  bool Knows(const std::string& function) const override;
  Result<std::string> Invoke(ledger::TxContext& ctx) const override;
};

}  // namespace classicschain::contracts
