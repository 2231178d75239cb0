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
#include <map>
#include <string>

#include "spectral/dataset.hpp"
#include "spectral/filters.hpp"
#include "spectral/probe.hpp"
#include "spectral/training.hpp"

// On-disk formats. Everything is little-endian; values are stored as float32,
// parameters as float64.
//
// Dataset container:
//   8 bytes   magic "SPRB0001"
//   u32       version (1)
//   u32       E (embedding width)
//   u32       C (class count)
//   u32       task kind (0 token, 1 sequence)
//   u64       sequence count
//   per sequence:
//     u64     id
//     u32     N
//     f32[N*E]  values, row-major
//     u16[N]  labels
//     u8[N]   ignore flags
//   u64       metadata byte length
//   bytes     UTF-8 JSON metadata
//
// Checkpoint container:
//   8 bytes   magic "SPCK0001"
//   u32       version (1)
//   u32       mode (0 orig, 1 fixed, 2 auto)
//   u32       band lo, u32 band hi   (fixed mode; zero otherwise)
//   u64       M (filter length; zero outside auto mode)
//   u64       E, u64 C
//   f64[M]    filter logits (auto mode)
//   f64[E*C]  probe weight, row-major
//   f64[C]    probe bias
//   u64       config byte length, JSON TrainConfig
//   u64       metadata byte length, JSON string map

namespace spectral {

Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& dataset, const std::string& path);

/// One JSON object per line: {"id": 7, "values": [[...], ...],
/// "labels": [...], "ignore": [...]} with "ignore" optional. An optional
/// first line {"meta": {"e":.., "c":.., "task_kind":"token|sequence",
/// "task":.., "language":..}} pins the dataset header; without it, E comes
/// from the first record, C from the largest label, and the task kind is
/// sequence-level exactly when every sequence has constant labels.
Dataset import_jsonl(const std::string& path);

struct GenSpec {
  std::size_t seq_len = 0;      // N
  std::size_t emb_dim = 0;      // E
  std::size_t class_count = 0;  // C
  std::size_t seq_count = 0;
  FilterBand signal_band;
  FilterBand noise_band;
  double snr = 1.0;             // signal amplitude / noise amplitude
  TaskKind task_kind = TaskKind::sequence;
  std::string task_name = "synthetic";
  std::string language = "xx";
};

/// Synthetic embeddings built in the coefficient domain. Sequence-level:
/// each class shifts the signal band by a class-specific direction, plus
/// within-class jitter of amplitude 2/snr; the noise band holds white noise
/// of amplitude 1/snr (snr = inf plants class-pure sequences). Sequences
/// mimic padded encoder dumps: content fills the first L positions (L drawn
/// in [N/4, N/2]) and the tail is ignore-masked. Token-level: a per-sequence
/// carrier planted in the signal band drives the per-position labels (labels
/// bin the carrier's value through the normal CDF), with a distractor of
/// amplitude 1/snr in the noise band and no masking.
/// Deterministic under (spec, seed). The task geometry (class directions,
/// carrier direction) depends only on the structural spec fields, so train
/// and validation files generated with different seeds share one task.
Dataset gen_synthetic(const GenSpec& spec, std::uint64_t seed);

struct Checkpoint {
  ProbeModel model;
  TrainConfig config;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace spectral
