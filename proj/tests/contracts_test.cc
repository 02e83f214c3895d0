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


#include "classicschain/contracts/classics_contract.h"

#include <gtest/gtest.h>

#include "classicschain/contracts/abac.h"
#include "classicschain/contracts/assets.h"
#include "oracle/abac_matrix.h"
#include "oracle/history_scenario.h"
#include "oracle/transfer_fuzz.h"
#include "test_util.h"

namespace classicschain::contracts {
namespace {

using identity::Role;
using oracle::ContractNetwork;
using testing::FastLedgerConfig;

const char kVin[] = "WDB11304212345";

std::string Details(int year = 1965) {
  return Canonical(Json{{"make", "Jaguar"},
                        {"model", "E-Type"},
                        {"registrationNumber", "AB-12-CD"},
                        {"year", year}});
}

std::string Step(UlidGenerator& ids, std::string type = "bodywork") {
  return Canonical(Json{{"activityType", type},
                        {"stepId", ids.Next(1700000000000)},
                        {"title", "Sills replaced"}});
}

std::string Ref(std::string_view content) {
  return Canonical(Json{{"cid", media::ComputeCid(content).ToString()},
                        {"filename", "a.jpg"},
                        {"mediaType", "image/jpeg"},
                        {"sizeBytes", 10}});
}

class ContractTest : public ::testing::Test {
 protected:
  void SetUp() override {
    net_ = std::make_unique<ContractNetwork>(FastLedgerConfig());
    net_->AddUser("olivia", Role::kOwner);
    net_->AddUser("oscar", Role::kOwner);
    net_->AddUser("wendy", Role::kRestorer);
    net_->AddUser("carl", Role::kCertifier);
  }

  Json Submit(const std::string& who, const std::string& fn,
              std::vector<std::string> args) {
    auto r = net_->Submit(who, fn, std::move(args));
    EXPECT_TRUE(r.ok()) << fn << ": " << (r.ok() ? "" : r.error().ToString());
    return r.ok() ? Json::parse(*r) : Json();
  }
  ErrorCode SubmitCode(const std::string& who, const std::string& fn,
                       std::vector<std::string> args) {
    return net_->Submit(who, fn, std::move(args)).code();
  }
  Json Card(const std::string& who = "olivia") {
    auto r = net_->Query(who, fn::kGetVehicleCard, {kVin});
    EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.error().ToString());
    return r.ok() ? Json::parse(*r) : Json();
  }
  void RegisterVehicle() {
    Submit("wendy", fn::kRegisterClassic, {kVin, Details(), "olivia"});
    Submit("olivia", fn::kGrantAccess, {kVin, "wendy", "write"});
  }

  std::unique_ptr<ContractNetwork> net_;
  UlidGenerator ids_;
};

TEST_F(ContractTest, RegisterClassicReturnsCard) {
  Json card = Submit("wendy", fn::kRegisterClassic, {kVin, Details(), "olivia"});
  EXPECT_EQ(card["classic"]["vin"], kVin);
  EXPECT_EQ(card["classic"]["ownerUserId"], "olivia");
  EXPECT_EQ(card["classic"]["revision"], 1);
  EXPECT_EQ(card["classic"]["registeredBy"]["org"], "WorkshopsOrg");
  EXPECT_EQ(card["versionCount"], 1);
  EXPECT_TRUE(card["access"]["entries"].empty());
  EXPECT_TRUE(card["classic"]["certification"].is_null());
  EXPECT_EQ(Card(), card);
}

TEST_F(ContractTest, RegisterClassicValidation) {
  EXPECT_EQ(SubmitCode("olivia", fn::kRegisterClassic, {kVin, Details(), "olivia"}),
            ErrorCode::kAuthDenied);
  EXPECT_EQ(SubmitCode("wendy", fn::kRegisterClassic, {"WDB1130I", Details(), "olivia"}),
            ErrorCode::kBadVin);
  EXPECT_EQ(SubmitCode("wendy", fn::kRegisterClassic, {"AB1", Details(), "olivia"}),
            ErrorCode::kBadVin);
  EXPECT_EQ(SubmitCode("wendy", fn::kRegisterClassic, {kVin, Details(1850), "olivia"}),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(SubmitCode("wendy", fn::kRegisterClassic, {kVin, "{", "olivia"}),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(SubmitCode("wendy", fn::kRegisterClassic, {kVin, Details(), "nobody"}),
            ErrorCode::kUnknownUser);
  Submit("wendy", fn::kRegisterClassic, {kVin, Details(), "olivia"});
  EXPECT_EQ(SubmitCode("carl", fn::kRegisterClassic, {kVin, Details(), "oscar"}),
            ErrorCode::kVinExists);
}

TEST_F(ContractTest, UnregisteredCallerIsDenied) {
  RegisterVehicle();
  // Enrolled in the wallet, but never ran RegisterUser.
  auto& m = const_cast<identity::Membership&>(net_->ledger().membership());
  auto ghost = m.Enroll(identity::OrgName::kOwners, "ghost", Role::kOwner).value();
  EXPECT_EQ(net_->ledger().EvaluateQuery(ghost, fn::kGetVehicleCard, {kVin}).code(),
            ErrorCode::kAuthDenied);
  auto first = net_->ledger().SubmitTransaction(ghost, fn::kRegisterUser, {});
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(net_->ledger().SubmitTransaction(ghost, fn::kRegisterUser, {}).code(),
            ErrorCode::kDuplicateUser);
}

TEST_F(ContractTest, UnknownVin) {
  EXPECT_EQ(net_->Query("olivia", fn::kGetVehicleCard, {"ZZZZZ1"}).code(),
            ErrorCode::kUnknownVin);
}

TEST_F(ContractTest, StepWritesStepAndBumpsRevision) {
  RegisterVehicle();
  std::string step = Step(ids_);
  std::string step_id = Json::parse(step)["stepId"];
  Json r = Submit("wendy", fn::kAddRestorationStep,
                  {kVin, step, "[" + Ref("p1") + "," + Ref("p2") + "]"});
  EXPECT_EQ(r["stepId"], step_id);
  Json card = Card();
  ASSERT_EQ(card["steps"].size(), 1u);
  EXPECT_EQ(card["steps"][0]["performedByUserId"], "wendy");
  EXPECT_EQ(card["steps"][0]["workshopOrg"], "WorkshopsOrg");
  ASSERT_EQ(card["steps"][0]["evidence"].size(), 2u);
  EXPECT_EQ(card["steps"][0]["evidence"][0]["anchorState"], "pending");
  EXPECT_EQ(card["classic"]["revision"], 3);
  EXPECT_EQ(card["versionCount"], 3);
  auto history = net_->ledger().GetHistoryForKey(StepKey(kVin, step_id));
  EXPECT_EQ(history.size(), 1u);
}

TEST_F(ContractTest, StepInputValidation) {
  RegisterVehicle();
  EXPECT_EQ(SubmitCode("wendy", fn::kAddRestorationStep, {kVin, Step(ids_), "[{\"cid\":1}]"}),
            ErrorCode::kBadEvidence);
  EXPECT_EQ(SubmitCode("wendy", fn::kAddRestorationStep, {kVin, Step(ids_), "{}"}),
            ErrorCode::kBadEvidence);
  EXPECT_EQ(SubmitCode("wendy", fn::kAddRestorationStep,
                       {kVin, Step(ids_, "welding"), "[]"}),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(SubmitCode("wendy", fn::kAddRestorationStep,
                       {kVin, R"({"activityType":"paint","stepId":"x","title":"t"})", "[]"}),
            ErrorCode::kInvalidArgument);
  std::string step = Step(ids_);
  Submit("wendy", fn::kAddRestorationStep, {kVin, step, "[]"});
  EXPECT_EQ(SubmitCode("wendy", fn::kAddRestorationStep, {kVin, step, "[]"}),
            ErrorCode::kInvalidArgument);
}

TEST_F(ContractTest, CertificationIsResetByNewWork) {
  RegisterVehicle();
  Submit("olivia", fn::kGrantAccess, {kVin, "carl", "certify"});
  Json certified = Submit("carl", fn::kCertifyVehicle, {kVin});
  EXPECT_TRUE(certified["classic"]["certified"]);
  // The transaction's own id is not known while it runs.
  EXPECT_TRUE(certified["classic"]["certification"]["txId"].is_null());
  Json card = Card();
  auto history = net_->ledger().GetHistoryForKey(ClassicKey(kVin));
  EXPECT_EQ(card["classic"]["certification"]["certifierUserId"], "carl");
  EXPECT_EQ(card["classic"]["certification"]["txId"], history.back().tx_id);
  Submit("wendy", fn::kAddRestorationStep, {kVin, Step(ids_), "[]"});
  card = Card();
  EXPECT_FALSE(card["classic"]["certified"]);
  EXPECT_TRUE(card["classic"]["certification"].is_null());
  EXPECT_EQ(card["classic"]["certifierUserId"], "");
}

TEST_F(ContractTest, GrantRevokeValidation) {
  RegisterVehicle();
  EXPECT_EQ(SubmitCode("olivia", fn::kGrantAccess, {kVin, "carl", "admin"}),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(SubmitCode("olivia", fn::kGrantAccess, {kVin, "nobody", "read"}),
            ErrorCode::kUnknownUser);
  EXPECT_EQ(SubmitCode("olivia", fn::kGrantAccess, {kVin, "olivia", "read"}),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(SubmitCode("olivia", fn::kRevokeAccess, {kVin, "carl"}),
            ErrorCode::kNoSuchGrant);
  Json access = Submit("olivia", fn::kGrantAccess, {kVin, "carl", "read"});
  ASSERT_EQ(access["entries"].size(), 2u);
  EXPECT_EQ(access["entries"][0]["granteeUserId"], "carl");  // sorted
  access = Submit("olivia", fn::kGrantAccess, {kVin, "carl", "certify"});
  EXPECT_EQ(access["entries"][0]["level"], "certify");
  EXPECT_EQ(access["entries"].size(), 2u);
  EXPECT_TRUE(net_->Query("carl", fn::kGetVehicleCard, {kVin}).ok());
  Submit("olivia", fn::kRevokeAccess, {kVin, "carl"});
  EXPECT_EQ(net_->Query("carl", fn::kGetVehicleCard, {kVin}).code(),
            ErrorCode::kAuthDenied);
}

TEST_F(ContractTest, TransferMovesControl) {
  RegisterVehicle();
  EXPECT_EQ(SubmitCode("olivia", fn::kTransferOwnership, {kVin, "olivia"}),
            ErrorCode::kSelfTransfer);
  EXPECT_EQ(SubmitCode("olivia", fn::kTransferOwnership, {kVin, "nobody"}),
            ErrorCode::kUnknownUser);
  EXPECT_EQ(SubmitCode("oscar", fn::kTransferOwnership, {kVin, "oscar"}),
            ErrorCode::kAuthDenied);
  Json card = Submit("olivia", fn::kTransferOwnership, {kVin, "oscar"});
  EXPECT_EQ(card["classic"]["ownerUserId"], "oscar");
  EXPECT_TRUE(card["access"]["entries"].empty());
  EXPECT_EQ(net_->Query("olivia", fn::kGetVehicleCard, {kVin}).code(),
            ErrorCode::kAuthDenied);
  EXPECT_EQ(net_->Query("wendy", fn::kGetVehicleCard, {kVin}).code(),
            ErrorCode::kAuthDenied);
  EXPECT_TRUE(net_->Query("oscar", fn::kGetVehicleCard, {kVin}).ok());
  EXPECT_EQ(SubmitCode("olivia", fn::kGrantAccess, {kVin, "wendy", "read"}),
            ErrorCode::kAuthDenied);
}

TEST_F(ContractTest, AnchorFlipsRefStateAndIsIdempotent) {
  RegisterVehicle();
  std::string cid = media::ComputeCid("p1").ToString();
  Submit("wendy", fn::kAddRestorationStep, {kVin, Step(ids_), "[" + Ref("p1") + "]"});
  std::uint64_t revision = Card()["classic"]["revision"];
  Json first = Submit("wendy", fn::kAnchorMedia, {kVin, "evidence", cid});
  EXPECT_EQ(first["anchoredByUserId"], "wendy");
  Json again = Submit("olivia", fn::kAnchorMedia, {kVin, "evidence", cid});
  EXPECT_EQ(again, first);
  Json card = Card();
  EXPECT_EQ(card["steps"][0]["evidence"][0]["anchorState"], "anchored");
  // Anchoring leaves the vehicle record alone.
  EXPECT_EQ(card["classic"]["revision"], revision);
  EXPECT_EQ(SubmitCode("wendy", fn::kAnchorMedia, {kVin, "evidence", "sha2-256:00"}),
            ErrorCode::kBadEvidence);
  EXPECT_EQ(SubmitCode("oscar", fn::kAnchorMedia, {kVin, "evidence", cid}),
            ErrorCode::kAuthDenied);
}

TEST_F(ContractTest, HistoryGroupsWritesPerTransaction) {
  RegisterVehicle();
  Submit("wendy", fn::kAddRestorationStep, {kVin, Step(ids_), "[]"});
  auto r = net_->Query("olivia", fn::kGetVehicleCardHistory, {kVin});
  ASSERT_TRUE(r.ok());
  Json h = Json::parse(*r);
  ASSERT_EQ(h["versions"].size(), 3u);
  EXPECT_EQ(h["versions"][0]["function"], "RegisterClassic");
  EXPECT_EQ(h["versions"][0]["writes"].size(), 2u);  // access + classic
  EXPECT_EQ(h["versions"][1]["function"], "GrantAccess");
  EXPECT_EQ(h["versions"][2]["function"], "AddRestorationStep");
  EXPECT_EQ(h["versions"][2]["submitter"]["userId"], "wendy");
  std::int64_t prev = 0;
  for (const auto& v : h["versions"]) {
    EXPECT_GE(v["timestamp"].get<std::int64_t>(), prev);
    prev = v["timestamp"];
  }
}

TEST_F(ContractTest, ListClassicsForUserShowsRelationship) {
  RegisterVehicle();
  auto r = net_->Query("wendy", fn::kListClassicsForUser, {"wendy"});
  ASSERT_TRUE(r.ok());
  Json list = Json::parse(*r);
  ASSERT_EQ(list["classics"].size(), 1u);
  EXPECT_EQ(list["classics"][0]["role"], "write");
  r = net_->Query("olivia", fn::kListClassicsForUser, {"olivia"});
  EXPECT_EQ(Json::parse(*r)["classics"][0]["role"], "owner");
  EXPECT_TRUE(Json::parse(*net_->Query("oscar", fn::kListClassicsForUser, {"oscar"}))
                  ["classics"].empty());
  EXPECT_EQ(net_->Query("oscar", fn::kListClassicsForUser, {"olivia"}).code(),
            ErrorCode::kAuthDenied);
}

TEST_F(ContractTest, WrongArityIsInvalidArgument) {
  EXPECT_EQ(SubmitCode("olivia", fn::kGrantAccess, {kVin}), ErrorCode::kInvalidArgument);
}

TEST(AbacTest, MatrixMatchesExpectedTable) {
  auto r = oracle::RunAbacMatrix(FastLedgerConfig());
  EXPECT_EQ(r.cells, 150);
  EXPECT_EQ(r.matched, r.cells);
  for (const auto& m : r.mismatches) ADD_FAILURE() << m;
}

TEST(AbacTest, PureRuleMatchesTable) {
  // Same table against the policy function alone.
  const Role roles[] = {Role::kOwner, Role::kRestorer, Role::kCertifier};
  for (const auto& row : oracle::kAbacTable) {
    std::optional<Operation> op;
    for (Operation o : kAllOperations) {
      if (OperationName(o) == row.operation) op = o;
    }
    ASSERT_TRUE(op.has_value()) << row.operation;
    for (int r = 0; r < 3; ++r) {
      for (int rel = 0; rel < 5; ++rel) {
        Subject s{roles[r], rel == 0, std::nullopt};
        if (rel >= 2) s.grant = static_cast<AccessLevel>(rel - 1);
        EXPECT_EQ(IsAllowed(*op, s), row.cells[r][rel] == 'Y')
            << row.operation << " " << oracle::kRoleNames[r] << " "
            << oracle::kRelationNames[rel];
      }
    }
  }
}

TEST(TransferFuzzTest, PriorPartiesLoseAccess) {
  auto r = oracle::RunTransferFuzz(FastLedgerConfig(), 11, 30);
  EXPECT_EQ(r.configurations, 30);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
}

TEST(HistoryOracleTest, SmallRandomRunMatchesOracle) {
  auto r = oracle::RunHistoryScenario(FastLedgerConfig(), 5, 150, 5);
  EXPECT_EQ(r.operations, 150);
  EXPECT_GT(r.committed, 30);
  EXPECT_GT(r.comparisons, 10);
  for (const auto& m : r.mismatches) ADD_FAILURE() << m;
}

TEST(NoPiiTest, LedgerCarriesNoUserDirectoryData) {
  ContractNetwork net(FastLedgerConfig());
  net.AddUser("privacy", Role::kOwner);
  Json j = Json::parse(net.ledger().GetState(UserKey("privacy"))->value);
  std::set<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
  EXPECT_EQ(keys, (std::set<std::string>{"org", "publicKey", "registeredAt", "role",
                                         "userId"}));
}

}  // namespace
}  // namespace classicschain::contracts
