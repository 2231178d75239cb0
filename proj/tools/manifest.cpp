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

#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "spectral/errors.hpp"

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

nlohmann::json describe_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spectral::IoError("cannot open input for digesting", path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  char digest[20];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return nlohmann::json{{"path", path}, {"bytes", bytes.size()}, {"fnv1a64", digest}};
}

nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv,
                             const std::vector<std::string>& input_paths) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t now_t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&now_t, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  nlohmann::json inputs = nlohmann::json::array();
  for (const std::string& path : input_paths) inputs.push_back(describe_input(path));
  return nlohmann::json{
      {"command", command}, {"argv", argv},          {"tool_version", kToolVersion},
      {"created_utc", stamp}, {"inputs", inputs},    {"outputs", nlohmann::json::array()},
      {"parameters", nlohmann::json::object()},
  };
}

void write_manifest(const nlohmann::json& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw spectral::IoError("cannot write manifest", path);
  out << manifest.dump(2) << '\n';
}
