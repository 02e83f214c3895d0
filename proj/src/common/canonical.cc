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

#include "classicschain/common/canonical.h"

#include <stdexcept>

namespace classicschain {

namespace {

void RejectFloats(const Json& value) {
  switch (value.type()) {
    case Json::value_t::number_float:
      throw std::invalid_argument("canonical encoding forbids floating point");
    case Json::value_t::object:
    case Json::value_t::array:
      for (const auto& item : value) RejectFloats(item);
      break;
    default:
      break;
  }
}

}  // namespace

std::string Canonical(const Json& value) {
  RejectFloats(value);
  try {
    return value.dump(-1, ' ', false, Json::error_handler_t::strict);
  } catch (const Json::type_error& e) {
    throw std::invalid_argument(e.what());
  }
}

Result<Json> ParseCanonical(std::string_view text) {
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    return Error(ErrorCode::kInvalidArgument, "not valid JSON");
  }
  try {
    if (Canonical(value) != text) {
      return Error(ErrorCode::kInvalidArgument, "not canonically encoded");
    }
  } catch (const std::invalid_argument& e) {
    return Error(ErrorCode::kInvalidArgument, e.what());
  }
  return value;
}

Result<Json> ParseJson(std::string_view text) {
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    return Error(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  }
  return value;
}

}  // namespace classicschain
