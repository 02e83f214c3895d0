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

#include <filesystem>
#include <string>

#include "classicschain/common/status.h"

namespace classicschain::gateway {

// Writes a self-signed certificate and its private key (PEM) for
// `common_name`, valid for `days`. For local deployments and tests.
Status WriteSelfSignedCertificate(const std::filesystem::path& cert_file,
                                  const std::filesystem::path& key_file,
                                  const std::string& common_name = "localhost",
                                  int days = 365);

}  // namespace classicschain::gateway
