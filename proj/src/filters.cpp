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

#include "spectral/filters.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/errors.hpp"
#include "spectral/kernels.hpp"

namespace spectral {
namespace {

void require_length(std::size_t n, const char* what) {
  if (n == 0) throw ValidationError(std::string(what) + ": sequence length must be >= 1");
}

std::vector<double> sigmoid_all(const std::vector<double>& raw) {
  std::vector<double> s(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) s[i] = sigmoid(raw[i]);
  return s;
}

// Pooling bin for output index i when shrinking m values to n.
inline std::pair<std::size_t, std::size_t> pool_bin(std::size_t i, std::size_t m,
                                                    std::size_t n) {
  const std::size_t start = (i * m) / n;
  const std::size_t end = ((i + 1) * m + n - 1) / n;  // ceil((i+1)*m/n), exclusive
  return {start, end};
}

}  // namespace

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

FilterBand make_band(std::size_t lo, std::size_t hi) {
  if (lo > hi) {
    throw ValidationError("band lower index " + std::to_string(lo) +
                          " exceeds upper index " + std::to_string(hi));
  }
  return FilterBand{lo, hi};
}

const std::vector<std::pair<std::string, FilterBand>>& canonical_bands() {
  static const std::vector<std::pair<std::string, FilterBand>> bands = {
      {"low", {0, 1}},     {"mid-low", {2, 8}},    {"mid", {9, 33}},
      {"mid-high", {34, 129}}, {"high", {130, 511}},
  };
  return bands;
}

FilterBand named_band(std::string_view name) {
  for (const auto& [band_name, band] : canonical_bands()) {
    if (band_name == name) return band;
  }
  std::string known;
  for (const auto& [band_name, band] : canonical_bands()) {
    if (!known.empty()) known += "|";
    known += band_name;
  }
  throw UsageError("unknown band name '" + std::string(name) + "' (expected " + known + ")");
}

AppliedFilterWeights band_weights(const FilterBand& band, std::size_t n) {
  require_length(n, "band_weights");
  AppliedFilterWeights w{std::vector<double>(n, 0.0)};
  if (band.lo > n - 1) {
    warn("band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) +
         "] lies entirely above the spectrum of a length-" + std::to_string(n) +
         " sequence; all weights are zero");
    return w;
  }
  const std::size_t hi = std::min(band.hi, n - 1);
  for (std::size_t k = band.lo; k <= hi; ++k) w.values[k] = 1.0;
  return w;
}

AppliedFilterWeights adapt_filter(const SpectralFilter& filter, std::size_t n) {
  require_length(n, "adapt_filter");
  const std::size_t m = filter.length();
  if (m == 0) throw ValidationError("adapt_filter: filter length must be >= 1");
  std::vector<double> s = sigmoid_all(filter.raw);
  if (n == m) return AppliedFilterWeights{std::move(s)};

  AppliedFilterWeights w{std::vector<double>(n)};
  if (n < m) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto [start, end] = pool_bin(i, m, n);
      double sum = 0.0;
      for (std::size_t j = start; j < end; ++j) sum += s[j];
      w.values[i] = std::clamp(sum / static_cast<double>(end - start), 0.0, 1.0);
    }
  } else {
    // n > m: sample sigmoid(raw) at n points spread evenly over [0, m-1].
    const double step = (n > 1) ? static_cast<double>(m - 1) / static_cast<double>(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = step * static_cast<double>(i);
      const std::size_t j0 = std::min(static_cast<std::size_t>(pos), m - 1);
      if (j0 + 1 >= m) {
        w.values[i] = s[m - 1];
        continue;
      }
      const double t = pos - static_cast<double>(j0);
      w.values[i] = std::clamp((1.0 - t) * s[j0] + t * s[j0 + 1], 0.0, 1.0);
    }
  }
  return w;
}

std::vector<double> adapt_filter_backward(const SpectralFilter& filter, std::size_t n,
                                          const std::vector<double>& upstream_grad) {
  require_length(n, "adapt_filter_backward");
  const std::size_t m = filter.length();
  if (upstream_grad.size() != n) {
    throw ValidationError("adapt_filter_backward: upstream gradient length " +
                          std::to_string(upstream_grad.size()) + " does not match n = " +
                          std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(upstream_grad[i])) {
      throw ValidationError("adapt_filter_backward: non-finite gradient at index " +
                            std::to_string(i));
    }
  }

  std::vector<double> grad_s(m, 0.0);
  if (n == m) {
    grad_s = upstream_grad;
  } else if (n < m) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto [start, end] = pool_bin(i, m, n);
      const double share = upstream_grad[i] / static_cast<double>(end - start);
      for (std::size_t j = start; j < end; ++j) grad_s[j] += share;
    }
  } else {
    const double step = (n > 1) ? static_cast<double>(m - 1) / static_cast<double>(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = step * static_cast<double>(i);
      const std::size_t j0 = std::min(static_cast<std::size_t>(pos), m - 1);
      if (j0 + 1 >= m) {
        grad_s[m - 1] += upstream_grad[i];
        continue;
      }
      const double t = pos - static_cast<double>(j0);
      grad_s[j0] += (1.0 - t) * upstream_grad[i];
      grad_s[j0 + 1] += t * upstream_grad[i];
    }
  }

  std::vector<double> grad(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = sigmoid(filter.raw[j]);
    grad[j] = grad_s[j] * s * (1.0 - s);
  }
  return grad;
}

Matrix apply_filter(const Matrix& coefficients, const AppliedFilterWeights& w) {
  if (w.length() != coefficients.rows()) {
    throw ValidationError("apply_filter: weight length " + std::to_string(w.length()) +
                          " does not match coefficient rows " +
                          std::to_string(coefficients.rows()));
  }
  Matrix out(coefficients.rows(), coefficients.cols());
  for (std::size_t k = 0; k < coefficients.rows(); ++k) {
    kernels::scale(w.values[k], coefficients.row(k), out.row(k), coefficients.cols());
  }
  return out;
}

}  // namespace spectral
