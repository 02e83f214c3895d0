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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classicschain/common/canonical.h"
#include "classicschain/common/status.h"
#include "classicschain/identity/identity.h"

namespace classicschain::ledger {

inline constexpr std::string_view kChannelName = "classics-main";

// 64 zero hex characters: previousHash of the genesis block.
const std::string& ZeroHash();

// MVCC version: position of the transaction that produced a value.
struct Version {
  std::uint64_t block = 0;
  std::uint64_t tx = 0;

  auto operator<=>(const Version&) const = default;
  Json ToJson() const { return Json{{"block", block}, {"tx", tx}}; }
  static Result<Version> FromJson(const Json& json);
};

struct ReadItem {
  std::string key;
  std::optional<Version> version;  // nullopt: key did not exist

  friend bool operator==(const ReadItem&, const ReadItem&) = default;
};

struct WriteItem {
  std::string key;
  std::string value;
  bool is_delete = false;

  friend bool operator==(const WriteItem&, const WriteItem&) = default;
};

struct LedgerTransaction {
  std::string tx_id;  // hex SHA-256 of the canonical encoding without txId
  std::string channel{kChannelName};
  identity::Certificate submitter;
  std::string function;
  std::vector<std::string> args;
  std::vector<ReadItem> read_set;
  std::vector<WriteItem> write_set;
  std::string client_signature;  // Ed25519 over SigningPayload()
  std::int64_t timestamp = 0;    // UTC ms, assigned by the gateway

  Json ToJson() const;
  static Result<LedgerTransaction> FromJson(const Json& json);

  // Canonical encoding of every field except txId and clientSignature.
  std::string SigningPayload() const;
  // Digest of the canonical encoding of every field except txId.
  std::string ComputeTxId() const;

  friend bool operator==(const LedgerTransaction&,
                         const LedgerTransaction&) = default;
};

enum class ValidationCode {
  kValid,
  kMvccConflict,
  kBadSignature,
  kEndorsementFailure,
};

std::string_view ValidationCodeName(ValidationCode code);
std::optional<ValidationCode> ParseValidationCode(std::string_view name);

struct OrdererSignature {
  identity::Certificate orderer;
  std::string signature;  // Ed25519 over Block::HeaderPayload()

  friend bool operator==(const OrdererSignature&,
                         const OrdererSignature&) = default;
};

// Block record. The header digest covers number, previousHash, dataHash and
// the validation flags; dataHash covers the transactions (and the channel
// configuration carried by the genesis block).
struct Block {
  std::uint64_t number = 0;
  std::string previous_hash;
  std::string data_hash;
  std::vector<LedgerTransaction> transactions;
  std::optional<Json> config;  // genesis only
  std::vector<ValidationCode> validation_flags;
  OrdererSignature orderer_signature;

  std::string ComputeDataHash() const;
  std::string HeaderPayload() const;
  std::string HeaderDigest() const;

  Json ToJson() const;
  static Result<Block> FromJson(const Json& json);

  // Canonical bytes as persisted in the block file.
  std::string Encode() const;
  // Strict: rejects anything that does not re-encode to the same bytes.
  static Result<Block> Decode(std::string_view bytes);

  friend bool operator==(const Block&, const Block&) = default;
};

// Helper for the strict decoders: true iff `json` is an object with exactly
// `keys` (any order).
bool HasExactKeys(const Json& json, std::initializer_list<const char*> keys);

}  // namespace classicschain::ledger
