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
#include <optional>
#include <vector>

#include "spectral/dataset.hpp"
#include "spectral/filters.hpp"
#include "spectral/matrix.hpp"

// The probing pipeline: embeddings -> DCT -> filter -> IDCT -> affine map ->
// softmax cross-entropy, with hand-derived gradients for the filter logits
// and the probe parameters. All gradients are exact adjoints of the forward
// pass; the finite-difference suites hold them to that.

namespace spectral {

enum class ProbeMode { orig, fixed_band, auto_filter };

const char* mode_name(ProbeMode mode);
ProbeMode mode_from_name(const std::string& name);

/// The only trainable parameters besides the filter: W (E x C) and b (C).
struct LinearProbe {
  Matrix weight;
  std::vector<double> bias;

  std::size_t emb_dim() const noexcept { return weight.rows(); }
  std::size_t class_count() const noexcept { return weight.cols(); }
};

struct ProbeModel {
  ProbeMode mode = ProbeMode::orig;
  std::optional<FilterBand> band;        // fixed_band mode only
  std::optional<SpectralFilter> filter;  // auto_filter mode only
  LinearProbe probe;

  std::size_t emb_dim() const noexcept { return probe.emb_dim(); }
  std::size_t class_count() const noexcept { return probe.class_count(); }
};

ProbeModel make_orig_model(std::size_t emb_dim, std::size_t class_count);
ProbeModel make_fixed_band_model(const FilterBand& band, std::size_t emb_dim,
                                 std::size_t class_count);
ProbeModel make_auto_model(std::size_t filter_len, std::size_t emb_dim,
                           std::size_t class_count);
void validate_model(const ProbeModel& model);

/// Filter weights for a sequence of length n (band mask or adapted sigmoid
/// logits). Rejected in orig mode.
AppliedFilterWeights model_weights_for_length(const ProbeModel& model, std::size_t n);

/// Embeddings after the model's filter; orig mode returns the input unchanged.
Matrix filtered_embeddings(const ProbeModel& model, const Matrix& emb);

/// N x C logits for one sequence.
Matrix forward(const ProbeModel& model, const Matrix& emb);

/// logits = inputs * W + b, no filtering.
Matrix affine_forward(const LinearProbe& probe, const Matrix& inputs);

/// Forward pass for the filtered modes starting from precomputed DCT
/// coefficients; bitwise identical to forward() on the original embeddings.
Matrix forward_from_coeffs(const ProbeModel& model, const Matrix& coeffs);

struct ProbeGradients {
  Matrix weight;                   // dL/dW, E x C
  std::vector<double> bias;        // dL/db, length C
  std::vector<double> filter_raw;  // dL/dgamma, length M; empty outside auto mode
};

struct LossAndGrads {
  double loss = 0.0;
  ProbeGradients grads;
};

/// Mean softmax cross-entropy over non-ignored positions plus gradients for
/// every trainable block of the model's mode.
LossAndGrads loss_and_grads(const ProbeModel& model, const EmbeddingSequence& seq);

/// Same arithmetic as loss_and_grads for the filtered modes, starting from
/// precomputed DCT coefficients (the training loop caches these because the
/// embeddings are frozen).
LossAndGrads loss_and_grads_from_coeffs(const ProbeModel& model, const Matrix& coeffs,
                                        const std::vector<std::uint16_t>& labels,
                                        const std::vector<std::uint8_t>& ignore);

/// Orig-mode loss/gradients on explicit inputs (also the shared affine tail of
/// the filtered modes, and the whole story for fixed-band training where the
/// filtered embeddings are constant).
LossAndGrads affine_loss_and_grads(const LinearProbe& probe, const Matrix& inputs,
                                   const std::vector<std::uint16_t>& labels,
                                   const std::vector<std::uint8_t>& ignore);

/// Loss and correctness counts computed from logits (shared by validation and
/// evaluation paths).
struct LogitsEval {
  double loss = 0.0;
  std::size_t correct = 0;
  std::size_t counted = 0;
};
LogitsEval evaluate_logits(const Matrix& logits, const std::vector<std::uint16_t>& labels,
                           const std::vector<std::uint8_t>& ignore);

struct EvalResult {
  double accuracy = 0.0;
  std::vector<double> per_class_accuracy;       // NaN for classes absent from the data
  std::vector<std::size_t> per_class_positions;
  std::size_t position_count = 0;
};

EvalResult evaluate(const ProbeModel& model, const Dataset& dataset);

/// Fraction of non-ignored positions whose argmax logit matches the label.
double predict_accuracy(const ProbeModel& model, const Dataset& dataset);

}  // namespace spectral
