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

#include "spectral/dataset.hpp"

#include <cmath>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

const char* task_kind_name(TaskKind kind) {
  return kind == TaskKind::token ? "token" : "sequence";
}

TaskKind task_kind_from_name(const std::string& name) {
  if (name == "token") return TaskKind::token;
  if (name == "sequence") return TaskKind::sequence;
  throw UsageError("unknown task kind '" + name + "' (expected token|sequence)");
}

void validate_dataset(const Dataset& dataset) {
  if (dataset.emb_dim == 0) throw ValidationError("dataset embedding width must be >= 1");
  if (dataset.class_count < 2) throw ValidationError("dataset class count must be >= 2");
  for (std::size_t s = 0; s < dataset.sequences.size(); ++s) {
    const EmbeddingSequence& seq = dataset.sequences[s];
    const std::string where = "sequence " + std::to_string(s);
    if (seq.length() == 0) throw ValidationError(where + ": empty sequence");
    if (seq.emb_dim() != dataset.emb_dim) {
      throw ValidationError(where + ": embedding width " + std::to_string(seq.emb_dim()) +
                            " does not match dataset width " +
                            std::to_string(dataset.emb_dim));
    }
    if (seq.labels.size() != seq.length() || seq.ignore.size() != seq.length()) {
      throw ValidationError(where + ": labels/ignore length does not match N");
    }
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
      if (!std::isfinite(seq.values.data()[i])) {
        throw ValidationError(where + ": non-finite embedding value");
      }
    }
    bool saw_label = false;
    std::uint16_t first_label = 0;
    for (std::size_t i = 0; i < seq.length(); ++i) {
      if (seq.ignore[i]) continue;
      if (seq.labels[i] >= dataset.class_count) {
        throw ValidationError(where + ": label " + std::to_string(seq.labels[i]) +
                              " at position " + std::to_string(i) + " is outside [0, " +
                              std::to_string(dataset.class_count) + ")");
      }
      if (dataset.task_kind == TaskKind::sequence) {
        if (!saw_label) {
          first_label = seq.labels[i];
          saw_label = true;
        } else if (seq.labels[i] != first_label) {
          throw ValidationError(where + ": sequence-level task with varying labels");
        }
      }
    }
  }
}

}  // namespace spectral
