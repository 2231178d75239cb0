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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spectral {

// Bad arguments, dimension mismatches, out-of-range labels, broken invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed command-line or config input (maps to exit code 2 in the CLI).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed on-disk payload; carries the byte offset of the defect.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : std::runtime_error("at byte " + std::to_string(byte_offset) + ": " + message),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Filesystem-level failure, with path context.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& message, const std::string& path)
      : std::runtime_error(message + ": " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Non-fatal diagnostics go through a replaceable handler; the default writes
// to stderr. Passing nullptr restores the default.
using WarningHandler = void (*)(const std::string&);
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace spectral
