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

#include "spectral/matrix.hpp"

namespace spectral {

enum class TaskKind : std::uint32_t { token = 0, sequence = 1 };

const char* task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(const std::string& name);

/// One sequence of contextualized sub-word embeddings (N x E) with one label
/// per position. Positions flagged in `ignore` contribute neither loss nor
/// accuracy. Values are stored as doubles but are float32-exact: file I/O and
/// the generator round through float32, so round trips are bit-exact.
struct EmbeddingSequence {
  std::uint64_t id = 0;
  Matrix values;
  std::vector<std::uint16_t> labels;
  std::vector<std::uint8_t> ignore;

  std::size_t length() const noexcept { return values.rows(); }
  std::size_t emb_dim() const noexcept { return values.cols(); }
};

struct Dataset {
  std::vector<EmbeddingSequence> sequences;
  std::size_t emb_dim = 0;
  std::size_t class_count = 0;
  TaskKind task_kind = TaskKind::token;
  std::string task_name;
  std::string language;
};

/// Checks the structural invariants: uniform E, label/ignore lengths matching
/// N, finite values, labels < C at non-ignored positions, and constant
/// non-ignored labels per sequence for sequence-level tasks.
void validate_dataset(const Dataset& dataset);

}  // namespace spectral
