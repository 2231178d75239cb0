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

#include "spectral/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectral/dct.hpp"
#include "spectral/errors.hpp"
#include "spectral/kernels.hpp"

namespace spectral {
namespace {

void require_positive(std::size_t value, const char* what) {
  if (value == 0) throw ValidationError(std::string(what) + " must be >= 1");
}

void check_sequence_shape(const Matrix& inputs, const std::vector<std::uint16_t>& labels,
                          const std::vector<std::uint8_t>& ignore, std::size_t emb_dim) {
  if (inputs.rows() == 0) throw ValidationError("sequence has no positions");
  if (inputs.cols() != emb_dim) {
    throw ValidationError("embedding width " + std::to_string(inputs.cols()) +
                          " does not match probe width " + std::to_string(emb_dim));
  }
  if (labels.size() != inputs.rows() || ignore.size() != inputs.rows()) {
    throw ValidationError("labels/ignore length does not match sequence length " +
                          std::to_string(inputs.rows()));
  }
}

struct AffineCore {
  double loss = 0.0;
  Matrix grad_logits;  // G = (softmax - onehot) / counted, zero rows where ignored
  Matrix dW;
  std::vector<double> db;
};

AffineCore affine_core(const LinearProbe& probe, const Matrix& inputs,
                       const std::vector<std::uint16_t>& labels,
                       const std::vector<std::uint8_t>& ignore) {
  check_sequence_shape(inputs, labels, ignore, probe.emb_dim());
  const std::size_t n = inputs.rows();
  const std::size_t c_count = probe.class_count();

  Matrix logits = affine_forward(probe, inputs);

  std::size_t counted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ignore[i]) ++counted;
  }
  if (counted == 0) throw ValidationError("every position of the sequence is ignored");

  AffineCore out;
  out.grad_logits = Matrix(n, c_count);
  double loss_sum = 0.0;
  const double inv_count = 1.0 / static_cast<double>(counted);
  for (std::size_t i = 0; i < n; ++i) {
    if (ignore[i]) continue;
    if (labels[i] >= c_count) {
      throw ValidationError("label " + std::to_string(labels[i]) + " at position " +
                            std::to_string(i) + " is outside [0, " +
                            std::to_string(c_count) + ")");
    }
    const double* row = logits.row(i);
    double max_logit = row[0];
    for (std::size_t c = 1; c < c_count; ++c) max_logit = std::max(max_logit, row[c]);
    double sum_exp = 0.0;
    double* g_row = out.grad_logits.row(i);
    for (std::size_t c = 0; c < c_count; ++c) {
      g_row[c] = std::exp(row[c] - max_logit);
      sum_exp += g_row[c];
    }
    loss_sum += max_logit + std::log(sum_exp) - row[labels[i]];
    const double inv_sum = inv_count / sum_exp;
    for (std::size_t c = 0; c < c_count; ++c) g_row[c] *= inv_sum;
    g_row[labels[i]] -= inv_count;
  }
  out.loss = loss_sum * inv_count;

  out.dW = Matrix(probe.emb_dim(), c_count);
  out.db.assign(c_count, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ignore[i]) continue;
    const double* in_row = inputs.row(i);
    const double* g_row = out.grad_logits.row(i);
    for (std::size_t e = 0; e < probe.emb_dim(); ++e) {
      kernels::axpy(in_row[e], g_row, out.dW.row(e), c_count);
    }
    for (std::size_t c = 0; c < c_count; ++c) out.db[c] += g_row[c];
  }
  return out;
}

}  // namespace

Matrix affine_forward(const LinearProbe& probe, const Matrix& inputs) {
  if (inputs.cols() != probe.emb_dim()) {
    throw ValidationError("input width " + std::to_string(inputs.cols()) +
                          " does not match probe width " + std::to_string(probe.emb_dim()));
  }
  Matrix logits(inputs.rows(), probe.class_count());
  kernels::dense_apply(inputs.data(), inputs.rows(), inputs.cols(), probe.weight.data(),
                       probe.class_count(), logits.data());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    double* row = logits.row(i);
    for (std::size_t c = 0; c < logits.cols(); ++c) row[c] += probe.bias[c];
  }
  return logits;
}

Matrix forward_from_coeffs(const ProbeModel& model, const Matrix& coeffs) {
  if (model.mode == ProbeMode::orig) {
    throw ValidationError("orig mode has no coefficient-domain path");
  }
  const AppliedFilterWeights w = model_weights_for_length(model, coeffs.rows());
  return affine_forward(model.probe, idct2_matrix(apply_filter(coeffs, w)));
}

const char* mode_name(ProbeMode mode) {
  switch (mode) {
    case ProbeMode::orig:
      return "orig";
    case ProbeMode::fixed_band:
      return "fixed";
    case ProbeMode::auto_filter:
      return "auto";
  }
  return "unknown";
}

ProbeMode mode_from_name(const std::string& name) {
  if (name == "orig") return ProbeMode::orig;
  if (name == "fixed") return ProbeMode::fixed_band;
  if (name == "auto") return ProbeMode::auto_filter;
  throw ValidationError("unknown probe mode '" + name + "'");
}

ProbeModel make_orig_model(std::size_t emb_dim, std::size_t class_count) {
  require_positive(emb_dim, "embedding width");
  if (class_count < 2) throw ValidationError("class count must be >= 2");
  ProbeModel model;
  model.mode = ProbeMode::orig;
  model.probe.weight = Matrix(emb_dim, class_count);
  model.probe.bias.assign(class_count, 0.0);
  return model;
}

ProbeModel make_fixed_band_model(const FilterBand& band, std::size_t emb_dim,
                                 std::size_t class_count) {
  ProbeModel model = make_orig_model(emb_dim, class_count);
  model.mode = ProbeMode::fixed_band;
  model.band = make_band(band.lo, band.hi);
  return model;
}

ProbeModel make_auto_model(std::size_t filter_len, std::size_t emb_dim,
                           std::size_t class_count) {
  require_positive(filter_len, "filter length");
  ProbeModel model = make_orig_model(emb_dim, class_count);
  model.mode = ProbeMode::auto_filter;
  model.filter = SpectralFilter::zeros(filter_len);
  return model;
}

void validate_model(const ProbeModel& model) {
  require_positive(model.probe.emb_dim(), "embedding width");
  if (model.probe.class_count() < 2) throw ValidationError("class count must be >= 2");
  if (model.probe.bias.size() != model.probe.class_count()) {
    throw ValidationError("bias length does not match class count");
  }
  for (std::size_t i = 0; i < model.probe.weight.size(); ++i) {
    if (!std::isfinite(model.probe.weight.data()[i])) {
      throw ValidationError("probe weight contains a non-finite value");
    }
  }
  for (double b : model.probe.bias) {
    if (!std::isfinite(b)) throw ValidationError("probe bias contains a non-finite value");
  }
  switch (model.mode) {
    case ProbeMode::orig:
      if (model.band || model.filter)
        throw ValidationError("orig mode carries no band or filter");
      break;
    case ProbeMode::fixed_band:
      if (!model.band || model.filter)
        throw ValidationError("fixed-band mode requires a band and no filter");
      break;
    case ProbeMode::auto_filter:
      if (model.band || !model.filter)
        throw ValidationError("auto mode requires a filter and no band");
      if (model.filter->length() == 0)
        throw ValidationError("auto mode filter must have length >= 1");
      break;
  }
}

AppliedFilterWeights model_weights_for_length(const ProbeModel& model, std::size_t n) {
  switch (model.mode) {
    case ProbeMode::fixed_band:
      return band_weights(*model.band, n);
    case ProbeMode::auto_filter:
      return adapt_filter(*model.filter, n);
    case ProbeMode::orig:
      break;
  }
  throw ValidationError("orig mode has no filter weights");
}

Matrix filtered_embeddings(const ProbeModel& model, const Matrix& emb) {
  if (model.mode == ProbeMode::orig) return emb;
  const AppliedFilterWeights w = model_weights_for_length(model, emb.rows());
  return idct2_matrix(apply_filter(dct2_matrix(emb), w));
}

Matrix forward(const ProbeModel& model, const Matrix& emb) {
  if (emb.cols() != model.emb_dim()) {
    throw ValidationError("embedding width " + std::to_string(emb.cols()) +
                          " does not match probe width " + std::to_string(model.emb_dim()));
  }
  if (model.mode == ProbeMode::orig) return affine_forward(model.probe, emb);
  return affine_forward(model.probe, filtered_embeddings(model, emb));
}

LossAndGrads affine_loss_and_grads(const LinearProbe& probe, const Matrix& inputs,
                                   const std::vector<std::uint16_t>& labels,
                                   const std::vector<std::uint8_t>& ignore) {
  AffineCore core = affine_core(probe, inputs, labels, ignore);
  LossAndGrads out;
  out.loss = core.loss;
  out.grads.weight = std::move(core.dW);
  out.grads.bias = std::move(core.db);
  return out;
}

LossAndGrads loss_and_grads_from_coeffs(const ProbeModel& model, const Matrix& coeffs,
                                        const std::vector<std::uint16_t>& labels,
                                        const std::vector<std::uint8_t>& ignore) {
  if (model.mode == ProbeMode::orig) {
    throw ValidationError("orig mode has no coefficient-domain path");
  }
  const std::size_t n = coeffs.rows();
  const std::size_t e_dim = model.emb_dim();
  const std::size_t c_count = model.class_count();

  const AppliedFilterWeights w = model_weights_for_length(model, n);
  const Matrix weighted = apply_filter(coeffs, w);
  const Matrix filtered = idct2_matrix(weighted);

  AffineCore core = affine_core(model.probe, filtered, labels, ignore);
  LossAndGrads out;
  out.loss = core.loss;
  out.grads.weight = std::move(core.dW);
  out.grads.bias = std::move(core.db);

  if (model.mode == ProbeMode::auto_filter) {
    // dL/dfiltered = G * W^T, then the adjoint of the inverse transform is
    // the forward transform, so dL/dweighted = dct2_matrix(dL/dfiltered).
    const Matrix weight_t = transposed(model.probe.weight);  // C x E
    Matrix d_filtered(n, e_dim);
    kernels::dense_apply(core.grad_logits.data(), n, c_count, weight_t.data(), e_dim,
                         d_filtered.data());
    const auto basis = dct_basis(n);
    Matrix d_weighted(n, e_dim);
    kernels::dense_apply(basis->data(), n, n, d_filtered.data(), e_dim, d_weighted.data());
    std::vector<double> d_w(n);
    for (std::size_t k = 0; k < n; ++k) {
      d_w[k] = kernels::dot(coeffs.row(k), d_weighted.row(k), e_dim);
    }
    out.grads.filter_raw = adapt_filter_backward(*model.filter, n, d_w);
  }
  return out;
}

LossAndGrads loss_and_grads(const ProbeModel& model, const EmbeddingSequence& seq) {
  if (model.mode == ProbeMode::orig) {
    return affine_loss_and_grads(model.probe, seq.values, seq.labels, seq.ignore);
  }
  check_sequence_shape(seq.values, seq.labels, seq.ignore, model.emb_dim());
  return loss_and_grads_from_coeffs(model, dct2_matrix(seq.values), seq.labels, seq.ignore);
}

LogitsEval evaluate_logits(const Matrix& logits, const std::vector<std::uint16_t>& labels,
                           const std::vector<std::uint8_t>& ignore) {
  if (labels.size() != logits.rows() || ignore.size() != logits.rows()) {
    throw ValidationError("labels/ignore length does not match logits rows");
  }
  LogitsEval eval;
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    if (ignore[i]) continue;
    if (labels[i] >= logits.cols()) {
      throw ValidationError("label " + std::to_string(labels[i]) + " at position " +
                            std::to_string(i) + " is outside [0, " +
                            std::to_string(logits.cols()) + ")");
    }
    const double* row = logits.row(i);
    double max_logit = row[0];
    std::size_t arg_max = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c) {
      if (row[c] > max_logit) {
        max_logit = row[c];
        arg_max = c;
      }
    }
    double sum_exp = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) sum_exp += std::exp(row[c] - max_logit);
    loss_sum += max_logit + std::log(sum_exp) - row[labels[i]];
    eval.correct += (arg_max == labels[i]) ? 1 : 0;
    ++eval.counted;
  }
  eval.loss = (eval.counted > 0) ? loss_sum / static_cast<double>(eval.counted) : 0.0;
  return eval;
}

EvalResult evaluate(const ProbeModel& model, const Dataset& dataset) {
  if (dataset.sequences.empty()) throw ValidationError("dataset has no sequences");
  const std::size_t c_count = model.class_count();
  EvalResult result;
  result.per_class_accuracy.assign(c_count, 0.0);
  result.per_class_positions.assign(c_count, 0);
  std::vector<std::size_t> per_class_correct(c_count, 0);
  std::size_t correct = 0;

  for (const EmbeddingSequence& seq : dataset.sequences) {
    const Matrix logits = forward(model, seq.values);
    if (seq.labels.size() != seq.length() || seq.ignore.size() != seq.length()) {
      throw ValidationError("labels/ignore length does not match sequence length");
    }
    for (std::size_t i = 0; i < seq.length(); ++i) {
      if (seq.ignore[i]) continue;
      const std::uint16_t label = seq.labels[i];
      if (label >= c_count) {
        throw ValidationError("label " + std::to_string(label) + " is outside [0, " +
                              std::to_string(c_count) + ")");
      }
      const double* row = logits.row(i);
      std::size_t arg_max = 0;
      for (std::size_t c = 1; c < c_count; ++c) {
        if (row[c] > row[arg_max]) arg_max = c;
      }
      ++result.position_count;
      ++result.per_class_positions[label];
      if (arg_max == label) {
        ++correct;
        ++per_class_correct[label];
      }
    }
  }
  if (result.position_count == 0) {
    throw ValidationError("dataset has no non-ignored positions");
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(result.position_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    result.per_class_accuracy[c] =
        (result.per_class_positions[c] > 0)
            ? static_cast<double>(per_class_correct[c]) /
                  static_cast<double>(result.per_class_positions[c])
            : std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

double predict_accuracy(const ProbeModel& model, const Dataset& dataset) {
  return evaluate(model, dataset).accuracy;
}

}  // namespace spectral
