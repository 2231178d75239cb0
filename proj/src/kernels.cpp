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

#include <atomic>

namespace spectral::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SPECTRAL_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &scalar_table();
    case Backend::avx2:
#if defined(SPECTRAL_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_table();
#endif
      return nullptr;
    case Backend::neon:
#if defined(__aarch64__)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend detect_backend() {
  if (cpu_has_avx2()) return Backend::avx2;
#if defined(__aarch64__)
  return Backend::neon;
#else
  return Backend::scalar;
#endif
}

struct Dispatch {
  const KernelTable* table;
  Backend backend;
};

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const KernelTable& active_table() {
  const KernelTable* table = g_table.load(std::memory_order_acquire);
  if (table == nullptr) {
    const Backend backend = detect_backend();
    table = table_for(backend);
    g_backend.store(backend, std::memory_order_relaxed);
    g_table.store(table, std::memory_order_release);
  }
  return *table;
}

}  // namespace

Backend active_backend() {
  active_table();
  return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend backend) { return table_for(backend) != nullptr; }

bool force_backend(Backend backend) {
  const KernelTable* table = table_for(backend);
  if (table == nullptr) return false;
  g_backend.store(backend, std::memory_order_relaxed);
  g_table.store(table, std::memory_order_release);
  return true;
}

void reset_backend() { g_table.store(nullptr, std::memory_order_release); }

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table().axpy(alpha, x, y, n);
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  active_table().scale(alpha, x, out, n);
}

void dense_apply(const double* a, std::size_t rows, std::size_t inner, const double* b,
                 std::size_t cols, double* out) {
  active_table().dense_apply(a, rows, inner, b, cols, out);
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bc1,
                 double bc2) {
  active_table().adam_update(p, m, v, g, n, lr, beta1, beta2, eps, bc1, bc2);
}

}  // namespace spectral::kernels
