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

#include "spectral/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "spectral/dct.hpp"
#include "spectral/errors.hpp"
#include "spectral/kernels.hpp"
#include "spectral/rng.hpp"

namespace spectral {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': cannot parse number '" + value + "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long parsed = std::stoll(value, &pos);
    if (pos != value.size() || parsed < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(parsed);
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': cannot parse count '" + value + "'");
  }
}

void check_dataset_for_model(const ProbeModel& model, const Dataset& dataset,
                             const char* which) {
  if (dataset.sequences.empty()) {
    throw ValidationError(std::string(which) + " dataset has no sequences");
  }
  if (dataset.emb_dim != model.emb_dim()) {
    throw ValidationError(std::string(which) + " dataset width " +
                          std::to_string(dataset.emb_dim) + " does not match probe width " +
                          std::to_string(model.emb_dim()));
  }
  if (dataset.class_count != model.class_count()) {
    throw ValidationError(std::string(which) + " dataset class count " +
                          std::to_string(dataset.class_count) +
                          " does not match probe class count " +
                          std::to_string(model.class_count()));
  }
}

// Per-sequence input the inner loop actually consumes. The embeddings are
// frozen, so everything that does not depend on trainable parameters is
// computed once: fixed-band filtering up front, DCT coefficients for the
// auto filter.
struct CachedSequence {
  const EmbeddingSequence* seq = nullptr;
  Matrix transformed;  // filtered embeddings (fixed) or DCT coefficients (auto)
};

std::vector<CachedSequence> build_cache(const ProbeModel& model, const Dataset& dataset) {
  std::vector<CachedSequence> cache;
  cache.reserve(dataset.sequences.size());
  for (const EmbeddingSequence& seq : dataset.sequences) {
    CachedSequence entry;
    entry.seq = &seq;
    if (model.mode == ProbeMode::fixed_band) {
      entry.transformed = filtered_embeddings(model, seq.values);
    } else if (model.mode == ProbeMode::auto_filter) {
      entry.transformed = dct2_matrix(seq.values);
    }
    cache.push_back(std::move(entry));
  }
  return cache;
}

struct Snapshot {
  Matrix weight;
  std::vector<double> bias;
  std::vector<double> filter_raw;
};

}  // namespace

void validate_config(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ValidationError("learning_rate must be a positive finite number");
  }
  if (!(cfg.plateau_decay > 0.0 && cfg.plateau_decay < 1.0)) {
    throw ValidationError("plateau_decay must lie in (0, 1)");
  }
  if (cfg.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (cfg.max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
  if (!(cfg.plateau_min_delta >= 0.0)) {
    throw ValidationError("plateau_min_delta must be >= 0");
  }
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0) ||
      !(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0)) {
    throw ValidationError("adam betas must lie in [0, 1)");
  }
  if (!(cfg.adam_eps > 0.0)) throw ValidationError("adam_eps must be > 0");
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  TrainConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "learning_rate") {
      cfg.learning_rate = parse_double(key, value);
    } else if (key == "plateau_decay") {
      cfg.plateau_decay = parse_double(key, value);
    } else if (key == "batch_size") {
      cfg.batch_size = parse_size(key, value);
    } else if (key == "max_epochs") {
      cfg.max_epochs = parse_size(key, value);
    } else if (key == "early_stop_patience") {
      cfg.early_stop_patience = parse_size(key, value);
    } else if (key == "plateau_patience") {
      cfg.plateau_patience = parse_size(key, value);
    } else if (key == "plateau_min_delta") {
      cfg.plateau_min_delta = parse_double(key, value);
    } else if (key == "adam_beta1") {
      cfg.adam_beta1 = parse_double(key, value);
    } else if (key == "adam_beta2") {
      cfg.adam_beta2 = parse_double(key, value);
    } else if (key == "adam_eps") {
      cfg.adam_eps = parse_double(key, value);
    } else {
      throw UsageError(path + ":" + std::to_string(line_no) + ": unknown config key '" +
                       key + "'");
    }
  }
  return cfg;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw ValidationError("adam_step: parameter/gradient/state sizes do not match");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  kernels::adam_update(params.data(), state.m.data(), state.v.data(), grads.data(),
                       params.size(), lr, beta1, beta2, eps, bc1, bc2);
}

TrainResult train(const ProbeModel& model_template, const Dataset& train_set,
                  const Dataset& val_set, const TrainConfig& cfg) {
  const auto start_time = std::chrono::steady_clock::now();
  validate_config(cfg);
  validate_model(model_template);
  validate_dataset(train_set);
  validate_dataset(val_set);
  check_dataset_for_model(model_template, train_set, "train");
  check_dataset_for_model(model_template, val_set, "validation");

  ProbeModel model = model_template;
  const std::size_t e_dim = model.emb_dim();
  const std::size_t c_count = model.class_count();

  // Fresh parameters for this run's seed.
  Rng rng(cfg.seed);
  const double half_width =
      std::sqrt(6.0 / static_cast<double>(e_dim + c_count));
  for (std::size_t e = 0; e < e_dim; ++e) {
    for (std::size_t c = 0; c < c_count; ++c) {
      model.probe.weight(e, c) = rng.uniform(-half_width, half_width);
    }
  }
  std::fill(model.probe.bias.begin(), model.probe.bias.end(), 0.0);
  const bool learns_filter = model.mode == ProbeMode::auto_filter;
  if (learns_filter) {
    std::fill(model.filter->raw.begin(), model.filter->raw.end(), 0.0);
  }
  const std::size_t filter_len = learns_filter ? model.filter->length() : 0;

  const std::vector<CachedSequence> train_cache = build_cache(model, train_set);
  const std::vector<CachedSequence> val_cache = build_cache(model, val_set);

  AdamState weight_state(e_dim * c_count);
  AdamState bias_state(c_count);
  AdamState filter_state(filter_len);

  double lr = cfg.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  double plateau_best = std::numeric_limits<double>::infinity();
  std::size_t stop_wait = 0;
  std::size_t plateau_wait = 0;
  Snapshot best;
  TrainReport report;

  std::vector<std::size_t> order(train_cache.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Matrix weight_grad(e_dim, c_count);
  std::vector<double> bias_grad(c_count);
  std::vector<double> filter_grad(filter_len);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double train_loss_sum = 0.0;

    for (std::size_t batch_start = 0, batch_index = 0; batch_start < order.size();
         batch_start += cfg.batch_size, ++batch_index) {
      const std::size_t batch_end = std::min(batch_start + cfg.batch_size, order.size());
      const double inv_batch = 1.0 / static_cast<double>(batch_end - batch_start);
      std::fill(weight_grad.data(), weight_grad.data() + weight_grad.size(), 0.0);
      std::fill(bias_grad.begin(), bias_grad.end(), 0.0);
      std::fill(filter_grad.begin(), filter_grad.end(), 0.0);

      for (std::size_t b = batch_start; b < batch_end; ++b) {
        const CachedSequence& entry = train_cache[order[b]];
        LossAndGrads lg;
        switch (model.mode) {
          case ProbeMode::orig:
            lg = affine_loss_and_grads(model.probe, entry.seq->values, entry.seq->labels,
                                       entry.seq->ignore);
            break;
          case ProbeMode::fixed_band:
            lg = affine_loss_and_grads(model.probe, entry.transformed, entry.seq->labels,
                                       entry.seq->ignore);
            break;
          case ProbeMode::auto_filter:
            lg = loss_and_grads_from_coeffs(model, entry.transformed, entry.seq->labels,
                                            entry.seq->ignore);
            break;
        }
        if (!std::isfinite(lg.loss)) {
          throw ValidationError("training diverged: non-finite loss at epoch " +
                                std::to_string(epoch) + ", batch " +
                                std::to_string(batch_index + 1));
        }
        train_loss_sum += lg.loss;
        kernels::axpy(1.0, lg.grads.weight.data(), weight_grad.data(), weight_grad.size());
        kernels::axpy(1.0, lg.grads.bias.data(), bias_grad.data(), bias_grad.size());
        if (learns_filter) {
          kernels::axpy(1.0, lg.grads.filter_raw.data(), filter_grad.data(),
                        filter_grad.size());
        }
      }

      kernels::scale(inv_batch, weight_grad.data(), weight_grad.data(), weight_grad.size());
      kernels::scale(inv_batch, bias_grad.data(), bias_grad.data(), bias_grad.size());
      adam_step({model.probe.weight.data(), model.probe.weight.size()},
                {weight_grad.data(), weight_grad.size()}, weight_state, lr, cfg.adam_beta1,
                cfg.adam_beta2, cfg.adam_eps);
      adam_step({model.probe.bias.data(), model.probe.bias.size()},
                {bias_grad.data(), bias_grad.size()}, bias_state, lr, cfg.adam_beta1,
                cfg.adam_beta2, cfg.adam_eps);
      if (learns_filter) {
        kernels::scale(inv_batch, filter_grad.data(), filter_grad.data(), filter_grad.size());
        adam_step({model.filter->raw.data(), filter_len},
                  {filter_grad.data(), filter_len}, filter_state, lr, cfg.adam_beta1,
                  cfg.adam_beta2, cfg.adam_eps);
      }
    }

    const double train_loss = train_loss_sum / static_cast<double>(train_cache.size());

    double val_loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t counted = 0;
    for (const CachedSequence& entry : val_cache) {
      Matrix logits;
      switch (model.mode) {
        case ProbeMode::orig:
          logits = affine_forward(model.probe, entry.seq->values);
          break;
        case ProbeMode::fixed_band:
          logits = affine_forward(model.probe, entry.transformed);
          break;
        case ProbeMode::auto_filter:
          logits = forward_from_coeffs(model, entry.transformed);
          break;
      }
      const LogitsEval eval = evaluate_logits(logits, entry.seq->labels, entry.seq->ignore);
      val_loss_sum += eval.loss;
      correct += eval.correct;
      counted += eval.counted;
    }
    const double val_loss = val_loss_sum / static_cast<double>(val_cache.size());
    if (!std::isfinite(val_loss)) {
      throw ValidationError("training diverged: non-finite validation loss at epoch " +
                            std::to_string(epoch));
    }
    const double val_accuracy =
        static_cast<double>(correct) / static_cast<double>(counted);

    report.epochs.push_back({epoch, train_loss, val_loss, val_accuracy, lr});

    if (val_loss < best_val) {
      best_val = val_loss;
      best.weight = model.probe.weight;
      best.bias = model.probe.bias;
      if (learns_filter) best.filter_raw = model.filter->raw;
      report.best_epoch = epoch;
      report.best_val_loss = val_loss;
      report.best_val_accuracy = val_accuracy;
      stop_wait = 0;
    } else {
      ++stop_wait;
    }

    if (val_loss < plateau_best - cfg.plateau_min_delta) {
      plateau_best = val_loss;
      plateau_wait = 0;
    } else if (++plateau_wait >= cfg.plateau_patience) {
      lr *= cfg.plateau_decay;
      plateau_wait = 0;
    }

    if (stop_wait > cfg.early_stop_patience) break;
  }

  model.probe.weight = best.weight;
  model.probe.bias = best.bias;
  if (learns_filter) model.filter->raw = best.filter_raw;

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return TrainResult{std::move(model), std::move(report)};
}

void write_report_jsonl(const TrainReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing", path);
  for (const EpochRecord& record : report.epochs) {
    nlohmann::json line = {
        {"epoch", record.epoch},
        {"train_loss", record.train_loss},
        {"val_loss", record.val_loss},
        {"val_accuracy", record.val_accuracy},
        {"learning_rate", record.learning_rate},
    };
    out << line.dump() << '\n';
  }
  if (!out) throw IoError("failed writing report file", path);
}

MultiSeedResult run_multiseed(const ProbeModel& model_template, const Dataset& train_set,
                              const Dataset& val_set, const TrainConfig& base_cfg,
                              const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ValidationError("run_multiseed: seed list is empty");
  MultiSeedResult result;
  result.runs.reserve(seeds.size());
  for (const std::uint64_t seed : seeds) {
    SeedOutcome outcome;
    outcome.seed = seed;
    TrainConfig cfg = base_cfg;
    cfg.seed = seed;
    try {
      outcome.result = train(model_template, train_set, val_set, cfg);
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
    result.runs.push_back(std::move(outcome));
  }

  std::vector<double> accuracies;
  for (const SeedOutcome& run : result.runs) {
    if (run.ok) accuracies.push_back(run.result.report.best_val_accuracy);
  }
  if (!accuracies.empty()) {
    double sum = 0.0;
    for (double a : accuracies) sum += a;
    result.mean_accuracy = sum / static_cast<double>(accuracies.size());
    double var = 0.0;
    for (double a : accuracies) {
      var += (a - result.mean_accuracy) * (a - result.mean_accuracy);
    }
    result.stddev_accuracy = std::sqrt(var / static_cast<double>(accuracies.size()));
  }
  return result;
}

}  // namespace spectral
