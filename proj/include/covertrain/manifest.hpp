// Copyright 2026 The covertrain Authors. All Rights Reserved.
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

// Provenance record embedded in every artifact the CLI writes.

#ifndef COVERTRAIN_MANIFEST_HPP_
#define COVERTRAIN_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "covertrain/json_io.hpp"

namespace covertrain {

// Lowercase hex SHA-256 of the file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

struct DatasetRef {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  Json params = Json::object();
  std::vector<DatasetRef> inputs;
  std::uint64_t seed = 0;
  std::string version = COVERTRAIN_VERSION;
  // Wall-clock start, only when requested; absent keeps reruns byte-identical.
  std::optional<std::string> started;

  void add_input(const std::filesystem::path& path);
  Json to_json() const;
  // Single `# manifest {...}` line for text artifacts.
  std::string comment_line() const;
};

// UTC ISO-8601 time of the call.
std::string utc_timestamp();

}  // namespace covertrain

#endif  // COVERTRAIN_MANIFEST_HPP_
