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

#include "spectral/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace spectral::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc2 = vfmaq_f64(acc2, vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
    acc3 = vfmaq_f64(acc3, vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  acc0 = vaddq_f64(vaddq_f64(acc0, acc1), vaddq_f64(acc2, acc3));
  double total = vaddvq_f64(acc0);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(double alpha, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void dense_apply_neon(const double* a, std::size_t rows, std::size_t inner,
                      const double* b, std::size_t cols, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* a_row = a + i * inner;
    double* out_row = out + i * cols;
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      float64x2_t acc0 = vdupq_n_f64(0.0);
      float64x2_t acc1 = vdupq_n_f64(0.0);
      float64x2_t acc2 = vdupq_n_f64(0.0);
      float64x2_t acc3 = vdupq_n_f64(0.0);
      const double* b_col = b + j;
      for (std::size_t k = 0; k < inner; ++k) {
        const float64x2_t va = vdupq_n_f64(a_row[k]);
        const double* b_row = b_col + k * cols;
        acc0 = vfmaq_f64(acc0, va, vld1q_f64(b_row));
        acc1 = vfmaq_f64(acc1, va, vld1q_f64(b_row + 2));
        acc2 = vfmaq_f64(acc2, va, vld1q_f64(b_row + 4));
        acc3 = vfmaq_f64(acc3, va, vld1q_f64(b_row + 6));
      }
      vst1q_f64(out_row + j, acc0);
      vst1q_f64(out_row + j + 2, acc1);
      vst1q_f64(out_row + j + 4, acc2);
      vst1q_f64(out_row + j + 6, acc3);
    }
    for (; j + 2 <= cols; j += 2) {
      float64x2_t acc = vdupq_n_f64(0.0);
      const double* b_col = b + j;
      for (std::size_t k = 0; k < inner; ++k) {
        acc = vfmaq_f64(acc, vdupq_n_f64(a_row[k]), vld1q_f64(b_col + k * cols));
      }
      vst1q_f64(out_row + j, acc);
    }
    for (; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += a_row[k] * b[k * cols + j];
      out_row[j] = acc;
    }
  }
}

void adam_update_neon(double* p, double* m, double* v, const double* g, std::size_t n,
                      double lr, double beta1, double beta2, double eps, double bc1,
                      double bc2) {
  const float64x2_t vb1 = vdupq_n_f64(beta1);
  const float64x2_t vb2 = vdupq_n_f64(beta2);
  const float64x2_t vc1 = vdupq_n_f64(1.0 - beta1);
  const float64x2_t vc2 = vdupq_n_f64(1.0 - beta2);
  const float64x2_t vlr = vdupq_n_f64(lr);
  const float64x2_t veps = vdupq_n_f64(eps);
  const float64x2_t vbc1 = vdupq_n_f64(bc1);
  const float64x2_t vbc2 = vdupq_n_f64(bc2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vg = vld1q_f64(g + i);
    float64x2_t vm = vfmaq_f64(vmulq_f64(vc1, vg), vb1, vld1q_f64(m + i));
    float64x2_t vv = vfmaq_f64(vmulq_f64(vc2, vmulq_f64(vg, vg)), vb2, vld1q_f64(v + i));
    vst1q_f64(m + i, vm);
    vst1q_f64(v + i, vv);
    const float64x2_t m_hat = vdivq_f64(vm, vbc1);
    const float64x2_t v_hat = vdivq_f64(vv, vbc2);
    const float64x2_t denom = vaddq_f64(vsqrtq_f64(v_hat), veps);
    const float64x2_t step = vdivq_f64(vmulq_f64(vlr, m_hat), denom);
    vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{dot_neon, axpy_neon, scale_neon, dense_apply_neon,
                                 adam_update_neon};
  return table;
}

}  // namespace spectral::kernels

#endif  // __aarch64__
