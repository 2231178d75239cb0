// Copyright 2026-present the spectral-probe project
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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit content digest: enough to tell whether an input file changed
// between runs; not a cryptographic hash.
std::uint64_t fnv1a64(const std::string& bytes);

// {"path", "bytes", "fnv1a64"} for one input file.
nlohmann::json describe_input(const std::string& path);

// Skeleton manifest shared by every artifact-writing command; the caller adds
// a "parameters" object and an "outputs" array before writing it.
nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv,
                             const std::vector<std::string>& input_paths);

void write_manifest(const nlohmann::json& manifest, const std::string& path);
