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

#include <json.hpp>

#include "classicschain/common/status.h"

// Canonical encoding used for every hashed or signed record:
//   * JSON objects with keys in byte-wise ascending order
//   * no insignificant whitespace
//   * UTF-8 emitted verbatim; only control characters, '"' and '\' escaped
//   * integers only (floating point values are rejected)
// Encoding is a pure function of the value, so two equal values always yield
// identical bytes.
namespace classicschain {

using Json = nlohmann::json;

// Throws std::invalid_argument if the value contains a floating point number
// or invalid UTF-8.
std::string Canonical(const Json& value);

// Parses `text`, and fails unless re-encoding reproduces `text` exactly.
Result<Json> ParseCanonical(std::string_view text);

// Lenient parse for API input.
Result<Json> ParseJson(std::string_view text);

}  // namespace classicschain
