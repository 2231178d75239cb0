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

// Double-precision inner-loop kernels behind a runtime-dispatched table.
// The scalar variants are the reference semantics; the AVX2/NEON variants
// must agree with them within floating-point reassociation tolerance
// (enforced by the kernel equivalence tests).

namespace spectral::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = alpha * x[i]; out may alias x
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);
  // out(rows x cols) = a(rows x inner) * b(inner x cols), all row-major;
  // out is overwritten and must not alias a or b
  void (*dense_apply)(const double* a, std::size_t rows, std::size_t inner,
                      const double* b, std::size_t cols, double* out);
  // Adam update with precomputed bias corrections bc1 = 1-beta1^t, bc2 = 1-beta2^t:
  //   m = beta1*m + (1-beta1)*g;  v = beta2*v + (1-beta2)*g*g
  //   p -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
  void (*adam_update)(double* p, double* m, double* v, const double* g, std::size_t n,
                      double lr, double beta1, double beta2, double eps, double bc1,
                      double bc2);
};

const KernelTable& scalar_table();
#if defined(SPECTRAL_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

Backend active_backend();
bool backend_available(Backend backend);
// Pins the dispatch table to one backend (for tests); returns false if the
// backend is not available on this host. Not safe to call concurrently with
// kernel execution.
bool force_backend(Backend backend);
void reset_backend();
const char* backend_name(Backend backend);

// Dispatch wrappers.
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, const double* x, double* out, std::size_t n);
void dense_apply(const double* a, std::size_t rows, std::size_t inner, const double* b,
                 std::size_t cols, double* out);
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bc1,
                 double bc2);

}  // namespace spectral::kernels
