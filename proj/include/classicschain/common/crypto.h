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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "classicschain/common/status.h"

// Thin wrappers over libsodium. Byte strings are carried as std::string.
namespace classicschain::crypto {

// Must be called before any other function here; safe to call repeatedly.
void Init();

using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::string_view data);
std::string Sha256Hex(std::string_view data);

// Incremental SHA-256 for streamed content.
class Sha256Stream {
 public:
  Sha256Stream();
  void Update(std::string_view chunk);
  Digest Finish();

 private:
  alignas(64) unsigned char state_[128];
};

std::string HexEncode(std::string_view bytes);
std::string HexEncode(const Digest& digest);
// Strict: lowercase only, even length.
std::optional<std::string> HexDecode(std::string_view hex);
bool IsLowerHex(std::string_view s, std::size_t expected_length);

std::string Base64Encode(std::string_view bytes);
std::optional<std::string> Base64Decode(std::string_view text);
// URL-safe alphabet, no padding (JWT segments).
std::string Base64UrlEncode(std::string_view bytes);
std::optional<std::string> Base64UrlDecode(std::string_view text);

std::string RandomBytes(std::size_t n);
std::uint64_t RandomU64();

// Ed25519.
struct KeyPair {
  std::string public_key;  // 32 bytes
  std::string secret_key;  // 64 bytes
};
KeyPair GenerateKeyPair();
std::optional<std::string> Ed25519Sign(std::string_view secret_key,
                                       std::string_view message);
bool Ed25519Verify(std::string_view public_key, std::string_view message,
                   std::string_view signature);

std::string HmacSha256(std::string_view key, std::string_view message);
bool ConstantTimeEquals(std::string_view a, std::string_view b);

// Argon2id in libsodium's encoded string form (salt and params embedded).
struct PasswordHashParams {
  unsigned long long ops_limit = 2;
  std::size_t mem_limit = 64u << 20;
};
Result<std::string> HashPassword(std::string_view password,
                                 const PasswordHashParams& params);
bool VerifyPassword(std::string_view encoded_hash, std::string_view password);

}  // namespace classicschain::crypto
