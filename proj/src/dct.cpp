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

#include "spectral/dct.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <string>

#include "spectral/errors.hpp"
#include "spectral/kernels.hpp"

namespace spectral {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require_finite(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at index " +
                            std::to_string(i));
    }
  }
}

void require_finite(const Matrix& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(row[j])) {
        throw ValidationError(std::string(what) + ": non-finite value at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ValidationError(std::string(what) + ": length must be >= 1");
}

struct BasisPair {
  std::shared_ptr<const Matrix> forward;    // rows indexed by frequency k
  std::shared_ptr<const Matrix> transpose;  // rows indexed by time n
};

// Bounded cache of basis pairs keyed by length. Entries are shared_ptrs, so
// eviction never invalidates matrices still in use. The cap keeps a corpus
// that touches many distinct lengths from pinning hundreds of megabytes.
constexpr std::size_t kCacheByteCap = 256u << 20;

BasisPair basis_pair(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, BasisPair> cache;
  static std::deque<std::size_t> insertion_order;
  static std::size_t cached_bytes = 0;

  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  auto forward = std::make_shared<Matrix>(n, n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = (k == 0) ? s0 : sk;
    double* row = forward->row(k);
    for (std::size_t t = 0; t < n; ++t) {
      row[t] = scale * std::cos(kPi / static_cast<double>(n) *
                                (static_cast<double>(t) + 0.5) * static_cast<double>(k));
    }
  }
  auto transpose = std::make_shared<Matrix>(transposed(*forward));
  BasisPair pair{std::move(forward), std::move(transpose)};

  const std::size_t pair_bytes = 2 * n * n * sizeof(double);
  while (!insertion_order.empty() && cached_bytes + pair_bytes > kCacheByteCap) {
    const std::size_t victim = insertion_order.front();
    insertion_order.pop_front();
    cached_bytes -= 2 * victim * victim * sizeof(double);
    cache.erase(victim);
  }
  if (pair_bytes <= kCacheByteCap) {
    cache.emplace(n, pair);
    insertion_order.push_back(n);
    cached_bytes += pair_bytes;
  }
  return pair;
}

}  // namespace

std::shared_ptr<const Matrix> dct_basis(std::size_t n) {
  require_nonempty(n, "dct_basis");
  return basis_pair(n).forward;
}

std::shared_ptr<const Matrix> dct_basis_transposed(std::size_t n) {
  require_nonempty(n, "dct_basis_transposed");
  return basis_pair(n).transpose;
}

// The sequence forms run through the same kernel path as the matrix forms,
// so a one-column matrix transform and a sequence transform agree bitwise.
std::vector<double> dct2(const std::vector<double>& x) {
  require_nonempty(x.size(), "dct2");
  require_finite(x, "dct2");
  const auto basis = dct_basis(x.size());
  std::vector<double> out(x.size());
  kernels::dense_apply(basis->data(), x.size(), x.size(), x.data(), 1, out.data());
  return out;
}

std::vector<double> idct2(const std::vector<double>& coefficients) {
  require_nonempty(coefficients.size(), "idct2");
  require_finite(coefficients, "idct2");
  const auto basis_t = dct_basis_transposed(coefficients.size());
  std::vector<double> out(coefficients.size());
  kernels::dense_apply(basis_t->data(), coefficients.size(), coefficients.size(),
                       coefficients.data(), 1, out.data());
  return out;
}

Matrix dct2_matrix(const Matrix& emb) {
  require_nonempty(emb.rows(), "dct2_matrix");
  require_nonempty(emb.cols(), "dct2_matrix");
  require_finite(emb, "dct2_matrix");
  const auto basis = dct_basis(emb.rows());
  Matrix out(emb.rows(), emb.cols());
  kernels::dense_apply(basis->data(), emb.rows(), emb.rows(), emb.data(), emb.cols(),
                       out.data());
  return out;
}

Matrix idct2_matrix(const Matrix& coefficients) {
  require_nonempty(coefficients.rows(), "idct2_matrix");
  require_nonempty(coefficients.cols(), "idct2_matrix");
  require_finite(coefficients, "idct2_matrix");
  const auto basis_t = dct_basis_transposed(coefficients.rows());
  Matrix out(coefficients.rows(), coefficients.cols());
  kernels::dense_apply(basis_t->data(), coefficients.rows(), coefficients.rows(),
                       coefficients.data(), coefficients.cols(), out.data());
  return out;
}

}  // namespace spectral
