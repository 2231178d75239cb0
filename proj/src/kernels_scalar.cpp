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

#include <algorithm>
#include <cmath>

#include "spectral/kernels.hpp"

namespace spectral::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

void dense_apply_scalar(const double* a, std::size_t rows, std::size_t inner,
                        const double* b, std::size_t cols, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* out_row = out + i * cols;
    std::fill(out_row, out_row + cols, 0.0);
    const double* a_row = a + i * inner;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a_row[k];
      const double* b_row = b + k * cols;
      for (std::size_t j = 0; j < cols; ++j) out_row[j] += aik * b_row[j];
    }
  }
}

void adam_update_scalar(double* p, double* m, double* v, const double* g, std::size_t n,
                        double lr, double beta1, double beta2, double eps, double bc1,
                        double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dot_scalar, axpy_scalar, scale_scalar,
                                 dense_apply_scalar, adam_update_scalar};
  return table;
}

}  // namespace spectral::kernels
