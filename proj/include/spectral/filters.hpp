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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {

/// Default canonical filter length (the 512-position input budget of
/// BERT-style encoders).
inline constexpr std::size_t kCanonicalFilterLength = 512;

/// Inclusive frequency index range [lo, hi].
struct FilterBand {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t width() const noexcept { return hi - lo + 1; }
};

FilterBand make_band(std::size_t lo, std::size_t hi);

/// The five canonical bands over [0, 511]:
/// low [0,1], mid-low [2,8], mid [9,33], mid-high [34,129], high [130,511].
const std::vector<std::pair<std::string, FilterBand>>& canonical_bands();
FilterBand named_band(std::string_view name);

/// Learnable per-frequency logits of fixed canonical length M; the weight
/// actually applied to a coefficient is sigmoid(raw[k]) adapted to the
/// sequence length at hand.
struct SpectralFilter {
  std::vector<double> raw;

  static SpectralFilter zeros(std::size_t m) { return SpectralFilter{std::vector<double>(m, 0.0)}; }
  std::size_t length() const noexcept { return raw.size(); }
};

/// Per-frequency multipliers in [0, 1], matched to one sequence length.
struct AppliedFilterWeights {
  std::vector<double> values;
  std::size_t length() const noexcept { return values.size(); }
};

double sigmoid(double x);

/// Binary mask: 1 inside [lo, min(hi, n-1)], 0 elsewhere. A band lying
/// entirely above the sequence's spectrum yields all zeros plus a warning.
AppliedFilterWeights band_weights(const FilterBand& band, std::size_t n);

/// Length adaptation of sigmoid(raw):
///   n == M  identity;
///   n <  M  adaptive mean pooling, output bin i averages raw indices
///           [floor(i*M/n), ceil((i+1)*M/n) - 1];
///   n >  M  linear interpolation onto n evenly spaced points over [0, M-1].
AppliedFilterWeights adapt_filter(const SpectralFilter& filter, std::size_t n);

/// Adjoint of adapt_filter composed with the sigmoid derivative: routes a
/// length-n upstream gradient back to the length-M raw logits.
std::vector<double> adapt_filter_backward(const SpectralFilter& filter, std::size_t n,
                                          const std::vector<double>& upstream_grad);

/// Scales row k of an N x E coefficient matrix by w.values[k]; the same
/// frequency weight is shared across all embedding dimensions.
Matrix apply_filter(const Matrix& coefficients, const AppliedFilterWeights& w);

}  // namespace spectral
