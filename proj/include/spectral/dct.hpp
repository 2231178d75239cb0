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

#include <memory>
#include <vector>

#include "spectral/matrix.hpp"

// Orthonormal DCT-II along the time axis. With the orthonormal scaling the
// inverse transform is the transpose of the forward one, Parseval holds, and
// the forward transform is the adjoint of the inverse (which is what lets
// the training code reuse dct2_matrix as the gradient of idct2_matrix).
//
// Forward, for a length-N sequence x:
//   X_k = s_k * sum_n x_n * cos[(pi/N) * (n + 1/2) * k]
//   s_0 = sqrt(1/N),  s_k = sqrt(2/N) for k >= 1

namespace spectral {

/// Basis matrix for length n: row k holds the k-th frequency wave, already
/// orthonormally scaled. Cached per length and shared; treat as immutable.
/// Safe to call from multiple threads.
std::shared_ptr<const Matrix> dct_basis(std::size_t n);
/// Transpose of dct_basis(n), cached alongside it.
std::shared_ptr<const Matrix> dct_basis_transposed(std::size_t n);

/// Forward transform of one sequence. Rejects empty or non-finite input.
std::vector<double> dct2(const std::vector<double>& x);

/// Inverse transform; idct2(dct2(x)) == x up to accumulation error.
std::vector<double> idct2(const std::vector<double>& coefficients);

/// Columnwise forward transform of an N x E matrix: column d of the output is
/// dct2 of column d of the input.
Matrix dct2_matrix(const Matrix& emb);

/// Columnwise inverse transform; exact inverse of dct2_matrix.
Matrix idct2_matrix(const Matrix& coefficients);

}  // namespace spectral
