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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spectral/kernels.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

// Lengths chosen to hit every vector width and remainder path.
const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 33, 64, 100, 257};

void check_close(double a, double b, double tol, const char* what) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  INFO(what, ": ", a, " vs ", b);
  CHECK(std::abs(a - b) <= tol * scale);
}

std::vector<kernels::Backend> simd_backends() {
  std::vector<kernels::Backend> backends;
  for (kernels::Backend b : {kernels::Backend::avx2, kernels::Backend::neon}) {
    if (kernels::backend_available(b)) backends.push_back(b);
  }
  return backends;
}

struct BackendGuard {
  ~BackendGuard() { kernels::reset_backend(); }
};

}  // namespace

TEST_CASE("dispatch reports a usable backend") {
  CHECK(kernels::backend_available(kernels::Backend::scalar));
  const kernels::Backend active = kernels::active_backend();
  CHECK(kernels::backend_available(active));
  CHECK(kernels::backend_name(active) != nullptr);
  BackendGuard guard;
  CHECK(kernels::force_backend(kernels::Backend::scalar));
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
}

TEST_CASE("dense_apply matches a naive triple loop") {
  Rng rng(11);
  BackendGuard guard;
  for (const auto backend : {kernels::Backend::scalar, kernels::Backend::avx2,
                             kernels::Backend::neon}) {
    if (!kernels::backend_available(backend)) continue;
    REQUIRE(kernels::force_backend(backend));
    for (const auto [rows, inner, cols] :
         std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
             {1, 1, 1}, {3, 5, 7}, {4, 4, 16}, {5, 9, 17}, {8, 8, 20}, {2, 32, 33}}) {
      const std::vector<double> a = random_vec(rng, rows * inner);
      const std::vector<double> b = random_vec(rng, inner * cols);
      std::vector<double> out(rows * cols, -1.0);
      kernels::dense_apply(a.data(), rows, inner, b.data(), cols, out.data());
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          double expect = 0.0;
          for (std::size_t k = 0; k < inner; ++k) expect += a[i * inner + k] * b[k * cols + j];
          check_close(out[i * cols + j], expect, 1e-12, "dense_apply");
        }
      }
    }
  }
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  Rng rng(42);
  BackendGuard guard;
  const auto& ref = kernels::scalar_table();

  for (const kernels::Backend backend : simd_backends()) {
    REQUIRE(kernels::force_backend(backend));
    INFO("backend ", kernels::backend_name(backend));

    for (std::size_t n : kLengths) {
      const std::vector<double> a = random_vec(rng, n);
      const std::vector<double> b = random_vec(rng, n);

      check_close(kernels::dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n),
                  1e-12, "dot");

      std::vector<double> y1 = random_vec(rng, n);
      std::vector<double> y2 = y1;
      kernels::axpy(0.7, a.data(), y1.data(), n);
      ref.axpy(0.7, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 1e-13, "axpy");

      std::vector<double> s1(n, 0.0);
      std::vector<double> s2(n, 0.0);
      kernels::scale(-1.3, a.data(), s1.data(), n);
      ref.scale(-1.3, a.data(), s2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == s2[i]);
    }
  }
}

TEST_CASE("adam_update kernels agree across backends") {
  Rng rng(7);
  BackendGuard guard;
  const auto& ref = kernels::scalar_table();

  for (const kernels::Backend backend : simd_backends()) {
    REQUIRE(kernels::force_backend(backend));
    for (std::size_t n : kLengths) {
      std::vector<double> p1 = random_vec(rng, n);
      std::vector<double> m1 = random_vec(rng, n, 0.1);
      std::vector<double> v1(n, 0.0);
      for (double& x : v1) x = std::abs(rng.normal());
      const std::vector<double> g = random_vec(rng, n);
      std::vector<double> p2 = p1;
      std::vector<double> m2 = m1;
      std::vector<double> v2 = v1;

      kernels::adam_update(p1.data(), m1.data(), v1.data(), g.data(), n, 1e-3, 0.9, 0.999,
                           1e-8, 0.1, 0.001);
      ref.adam_update(p2.data(), m2.data(), v2.data(), g.data(), n, 1e-3, 0.9, 0.999, 1e-8,
                      0.1, 0.001);
      for (std::size_t i = 0; i < n; ++i) {
        check_close(p1[i], p2[i], 1e-13, "adam p");
        check_close(m1[i], m2[i], 1e-13, "adam m");
        check_close(v1[i], v2[i], 1e-13, "adam v");
      }
    }
  }
}

TEST_CASE("scale tolerates aliased input and output") {
  Rng rng(3);
  BackendGuard guard;
  for (const auto backend : {kernels::Backend::scalar, kernels::Backend::avx2,
                             kernels::Backend::neon}) {
    if (!kernels::backend_available(backend)) continue;
    REQUIRE(kernels::force_backend(backend));
    std::vector<double> x = random_vec(rng, 37);
    const std::vector<double> original = x;
    kernels::scale(2.0, x.data(), x.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == 2.0 * original[i]);
  }
}
