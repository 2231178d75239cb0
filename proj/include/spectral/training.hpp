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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spectral/dataset.hpp"
#include "spectral/probe.hpp"

namespace spectral {

/// The five default seeds every experiment runs with unless told otherwise.
inline constexpr std::array<std::uint64_t, 5> kDefaultSeeds = {1932, 2771, 7308, 8119, 9095};

struct TrainConfig {
  double learning_rate = 1e-3;
  double plateau_decay = 0.5;       // lr multiplier on plateau
  std::size_t batch_size = 32;
  std::size_t max_epochs = 30;
  std::size_t early_stop_patience = 1;
  std::size_t plateau_patience = 1;
  double plateau_min_delta = 1e-4;  // absolute improvement that resets the plateau clock
  std::uint64_t seed = 1932;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

void validate_config(const TrainConfig& cfg);

/// Reads "key = value" lines; '#' starts a comment. Unknown keys and
/// malformed values are usage errors. The seed is not a file key; it comes
/// from the caller.
TrainConfig parse_config_file(const std::string& path);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;  // rate in effect during this epoch
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based epoch the returned parameters come from
  double best_val_loss = std::numeric_limits<double>::infinity();
  double best_val_accuracy = 0.0;
  double wall_seconds = 0.0;   // excluded from serialized per-epoch records
};

struct TrainResult {
  ProbeModel model;
  TrainReport report;
};

/// Adam state for one parameter block. adam_step applies one bias-corrected
/// update and advances the step count.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

/// Optimizes W, b (and the filter logits in auto mode) with Adam. The model
/// argument supplies mode, band, filter length, and dimensions; the probe
/// weights are re-initialized from cfg.seed (centered uniform with half-width
/// sqrt(6/(E+C))), the bias and filter logits start at zero. Validation loss
/// is computed after each epoch; the parameters returned are the snapshot of
/// the best-validation-loss epoch. Identical inputs and seed reproduce the
/// result bitwise on one machine.
TrainResult train(const ProbeModel& model_template, const Dataset& train_set,
                  const Dataset& val_set, const TrainConfig& cfg);

/// One line per epoch: {"epoch", "train_loss", "val_loss", "val_accuracy",
/// "learning_rate"}. Deterministic byte output for a given report.
void write_report_jsonl(const TrainReport& report, const std::string& path);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;    // set when ok is false
  TrainResult result;   // valid when ok is true
};

struct MultiSeedResult {
  std::vector<SeedOutcome> runs;
  double mean_accuracy = 0.0;    // over successful runs
  double stddev_accuracy = 0.0;  // population standard deviation
};

/// Runs train() once per seed; a failing seed is recorded and the rest
/// continue.
MultiSeedResult run_multiseed(const ProbeModel& model_template, const Dataset& train_set,
                              const Dataset& val_set, const TrainConfig& base_cfg,
                              const std::vector<std::uint64_t>& seeds);

}  // namespace spectral
