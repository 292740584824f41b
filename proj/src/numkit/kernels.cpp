// Copyright 2026 The mufact Authors
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

#include "mufact/kernels.hpp"

#include <atomic>

#include <omp.h>

namespace mufact::kernels {

namespace {

std::atomic<int> g_max_threads{0};

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

void require_conformable(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                "matmul: inner dimensions " + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()));
  }
}

// Row r of a*b; the loop order here is shared by both variants.
inline void matmul_row(const ComplexMatrix& a, const ComplexMatrix& b,
                       ComplexMatrix& out, std::size_t r) {
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  for (std::size_t t = 0; t < inner; ++t) {
    const cplx s = a(r, t);
    if (s == cplx(0.0)) continue;
    for (std::size_t c = 0; c < cols; ++c) out(r, c) += s * b(t, c);
  }
}

void check_ensemble(std::span<const double> weights,
                    std::span<const ComplexMatrix> unitaries,
                    const ComplexMatrix& x) {
  if (weights.size() != unitaries.size()) {
    throw Error(ErrorKind::ShapeMismatch, "weights/unitaries count mismatch");
  }
  for (const auto& u : unitaries) {
    if (!u.is_square() || u.rows() != x.rows() || x.rows() != x.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "conjugation_sum operand shape");
    }
  }
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  const int n = g_max_threads.load();
  return n > 0 ? n : omp_get_max_threads();
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_conformable(a, b);
  ComplexMatrix out(a.rows(), b.cols());
  const long rows = static_cast<long>(a.rows());
  if (a.rows() * a.cols() * b.cols() < kParallelWork || omp_in_parallel()) {
    // Small products never pay for a parallel region.
    for (std::size_t r = 0; r < a.rows(); ++r) matmul_row(a, b, out, r);
    return out;
  }
  const int threads = max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long r = 0; r < rows; ++r) {
    matmul_row(a, b, out, static_cast<std::size_t>(r));
  }
  return out;
}

ComplexMatrix conjugation_sum(std::span<const double> weights,
                              std::span<const ComplexMatrix> unitaries,
                              const ComplexMatrix& x) {
  check_ensemble(weights, unitaries, x);
  const std::size_t m = unitaries.size();
  std::vector<ComplexMatrix> terms(m);
  const long count = static_cast<long>(m);
  const std::size_t n = x.rows();
  auto term = [&](std::size_t l) {
    terms[l] = serial::matmul(serial::matmul(unitaries[l], x), unitaries[l].adjoint());
  };
  if (m * n * n * n < kParallelWork || omp_in_parallel()) {
    for (std::size_t l = 0; l < m; ++l) term(l);
  } else {
    const int threads = max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long l = 0; l < count; ++l) term(static_cast<std::size_t>(l));
  }
  ComplexMatrix out(n, n);
  for (std::size_t l = 0; l < m; ++l) out.add_scaled(terms[l], weights[l]);
  return out;
}

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_conformable(a, b);
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) matmul_row(a, b, out, r);
  return out;
}

ComplexMatrix conjugation_sum(std::span<const double> weights,
                              std::span<const ComplexMatrix> unitaries,
                              const ComplexMatrix& x) {
  check_ensemble(weights, unitaries, x);
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t l = 0; l < unitaries.size(); ++l) {
    const auto& u = unitaries[l];
    out.add_scaled(matmul(matmul(u, x), u.adjoint()), weights[l]);
  }
  return out;
}

}  // namespace serial

}  // namespace mufact::kernels
