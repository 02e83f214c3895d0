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

#include "classicschain/ledger/types.h"

#include "classicschain/common/crypto.h"

namespace classicschain::ledger {

namespace {

Error Malformed(std::string why) {
  return Error(ErrorCode::kInvalidArgument, std::move(why));
}

bool IsUint(const Json& j) { return j.is_number_unsigned(); }

Result<std::string> DecodeB64(const Json& j) {
  if (!j.is_string()) return Malformed("expected base64 string");
  auto bytes = crypto::Base64Decode(j.get<std::string>());
  if (!bytes) return Malformed("bad base64");
  return *bytes;
}

Json TxJsonWithoutId(const LedgerTransaction& tx, bool with_signature) {
  Json args = Json::array();
  for (const auto& a : tx.args) args.push_back(crypto::Base64Encode(a));
  Json reads = Json::array();
  for (const auto& r : tx.read_set) {
    reads.push_back(Json{{"key", r.key},
                         {"version", r.version ? r.version->ToJson() : Json()}});
  }
  Json writes = Json::array();
  for (const auto& w : tx.write_set) {
    writes.push_back(Json{{"isDelete", w.is_delete},
                          {"key", w.key},
                          {"value", crypto::Base64Encode(w.value)}});
  }
  Json j{{"args", args},
         {"channel", tx.channel},
         {"function", tx.function},
         {"readSet", reads},
         {"submitter", tx.submitter.ToJson()},
         {"timestamp", tx.timestamp},
         {"writeSet", writes}};
  if (with_signature) {
    j["clientSignature"] = crypto::Base64Encode(tx.client_signature);
  }
  return j;
}

}  // namespace

const std::string& ZeroHash() {
  static const std::string zero(64, '0');
  return zero;
}

bool HasExactKeys(const Json& json, std::initializer_list<const char*> keys) {
  if (!json.is_object() || json.size() != keys.size()) return false;
  for (const char* k : keys) {
    if (!json.contains(k)) return false;
  }
  return true;
}

Result<Version> Version::FromJson(const Json& json) {
  if (!HasExactKeys(json, {"block", "tx"}) || !IsUint(json["block"]) ||
      !IsUint(json["tx"])) {
    return Malformed("bad version");
  }
  return Version{json["block"].get<std::uint64_t>(),
                 json["tx"].get<std::uint64_t>()};
}

// --- LedgerTransaction ------------------------------------------------------

Json LedgerTransaction::ToJson() const {
  Json j = TxJsonWithoutId(*this, /*with_signature=*/true);
  j["txId"] = tx_id;
  return j;
}

Result<LedgerTransaction> LedgerTransaction::FromJson(const Json& json) {
  if (!HasExactKeys(json, {"args", "channel", "clientSignature", "function",
                           "readSet", "submitter", "timestamp", "txId",
                           "writeSet"})) {
    return Malformed("bad transaction shape");
  }
  LedgerTransaction tx;
  if (!json["txId"].is_string() || !json["channel"].is_string() ||
      !json["function"].is_string() || !json["timestamp"].is_number_integer() ||
      !json["args"].is_array() || !json["readSet"].is_array() ||
      !json["writeSet"].is_array()) {
    return Malformed("bad transaction field types");
  }
  tx.tx_id = json["txId"].get<std::string>();
  tx.channel = json["channel"].get<std::string>();
  tx.function = json["function"].get<std::string>();
  tx.timestamp = json["timestamp"].get<std::int64_t>();
  auto cert = identity::Certificate::FromJson(json["submitter"]);
  if (!cert.ok()) return Malformed("bad submitter: " + cert.error().message());
  tx.submitter = std::move(cert).value();
  CC_ASSIGN_OR_RETURN(tx.client_signature, DecodeB64(json["clientSignature"]));
  for (const auto& a : json["args"]) {
    CC_ASSIGN_OR_RETURN(std::string arg, DecodeB64(a));
    tx.args.push_back(std::move(arg));
  }
  for (const auto& r : json["readSet"]) {
    if (!HasExactKeys(r, {"key", "version"}) || !r["key"].is_string()) {
      return Malformed("bad read item");
    }
    ReadItem item{r["key"].get<std::string>(), std::nullopt};
    if (!r["version"].is_null()) {
      CC_ASSIGN_OR_RETURN(item.version, Version::FromJson(r["version"]));
    }
    tx.read_set.push_back(std::move(item));
  }
  for (const auto& w : json["writeSet"]) {
    if (!HasExactKeys(w, {"isDelete", "key", "value"}) ||
        !w["isDelete"].is_boolean() || !w["key"].is_string()) {
      return Malformed("bad write item");
    }
    WriteItem item{w["key"].get<std::string>(), {}, w["isDelete"].get<bool>()};
    CC_ASSIGN_OR_RETURN(item.value, DecodeB64(w["value"]));
    tx.write_set.push_back(std::move(item));
  }
  return tx;
}

std::string LedgerTransaction::SigningPayload() const {
  return Canonical(TxJsonWithoutId(*this, /*with_signature=*/false));
}

std::string LedgerTransaction::ComputeTxId() const {
  return crypto::Sha256Hex(Canonical(TxJsonWithoutId(*this, true)));
}

// --- ValidationCode ---------------------------------------------------------

std::string_view ValidationCodeName(ValidationCode code) {
  switch (code) {
    case ValidationCode::kValid: return "VALID";
    case ValidationCode::kMvccConflict: return "MVCC_CONFLICT";
    case ValidationCode::kBadSignature: return "BAD_SIGNATURE";
    case ValidationCode::kEndorsementFailure: return "ENDORSEMENT_FAIL";
  }
  return "VALID";
}

std::optional<ValidationCode> ParseValidationCode(std::string_view name) {
  for (auto c : {ValidationCode::kValid, ValidationCode::kMvccConflict,
                 ValidationCode::kBadSignature,
                 ValidationCode::kEndorsementFailure}) {
    if (ValidationCodeName(c) == name) return c;
  }
  return std::nullopt;
}

// --- Block ------------------------------------------------------------------

std::string Block::ComputeDataHash() const {
  Json txs = Json::array();
  for (const auto& tx : transactions) txs.push_back(tx.ToJson());
  Json data{{"transactions", txs}};
  if (config) data["config"] = *config;
  return crypto::Sha256Hex(Canonical(data));
}

std::string Block::HeaderPayload() const {
  Json flags = Json::array();
  for (auto f : validation_flags) flags.push_back(ValidationCodeName(f));
  return Canonical(Json{{"dataHash", data_hash},
                        {"number", number},
                        {"previousHash", previous_hash},
                        {"validationFlags", flags}});
}

std::string Block::HeaderDigest() const {
  return crypto::Sha256Hex(HeaderPayload());
}

Json Block::ToJson() const {
  Json txs = Json::array();
  for (const auto& tx : transactions) txs.push_back(tx.ToJson());
  Json flags = Json::array();
  for (auto f : validation_flags) flags.push_back(ValidationCodeName(f));
  Json j{{"dataHash", data_hash},
         {"number", number},
         {"ordererSignature",
          Json{{"orderer", orderer_signature.orderer.ToJson()},
               {"signature",
                crypto::Base64Encode(orderer_signature.signature)}}},
         {"previousHash", previous_hash},
         {"transactions", txs},
         {"validationFlags", flags}};
  if (config) j["config"] = *config;
  return j;
}

Result<Block> Block::FromJson(const Json& json) {
  const bool genesis_shape = json.is_object() && json.contains("config");
  bool shape_ok =
      genesis_shape
          ? HasExactKeys(json, {"config", "dataHash", "number",
                                "ordererSignature", "previousHash",
                                "transactions", "validationFlags"})
          : HasExactKeys(json, {"dataHash", "number", "ordererSignature",
                                "previousHash", "transactions",
                                "validationFlags"});
  if (!shape_ok) return Malformed("bad block shape");
  if (!IsUint(json["number"]) || !json["dataHash"].is_string() ||
      !json["previousHash"].is_string() || !json["transactions"].is_array() ||
      !json["validationFlags"].is_array()) {
    return Malformed("bad block field types");
  }
  Block b;
  b.number = json["number"].get<std::uint64_t>();
  b.data_hash = json["dataHash"].get<std::string>();
  b.previous_hash = json["previousHash"].get<std::string>();
  if (!crypto::IsLowerHex(b.data_hash, 64) ||
      !crypto::IsLowerHex(b.previous_hash, 64)) {
    return Malformed("bad hash encoding");
  }
  if (genesis_shape) b.config = json["config"];
  for (const auto& t : json["transactions"]) {
    CC_ASSIGN_OR_RETURN(LedgerTransaction tx, LedgerTransaction::FromJson(t));
    b.transactions.push_back(std::move(tx));
  }
  for (const auto& f : json["validationFlags"]) {
    if (!f.is_string()) return Malformed("bad flag");
    auto code = ParseValidationCode(f.get<std::string>());
    if (!code) return Malformed("unknown validation flag");
    b.validation_flags.push_back(*code);
  }
  const Json& sig = json["ordererSignature"];
  if (!HasExactKeys(sig, {"orderer", "signature"})) {
    return Malformed("bad orderer signature");
  }
  auto cert = identity::Certificate::FromJson(sig["orderer"]);
  if (!cert.ok()) return Malformed("bad orderer certificate");
  b.orderer_signature.orderer = std::move(cert).value();
  CC_ASSIGN_OR_RETURN(b.orderer_signature.signature,
                      DecodeB64(sig["signature"]));
  return b;
}

std::string Block::Encode() const { return Canonical(ToJson()); }

Result<Block> Block::Decode(std::string_view bytes) {
  CC_ASSIGN_OR_RETURN(Json j, ParseCanonical(bytes));
  return FromJson(j);
}

}  // namespace classicschain::ledger
