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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mufact/numkit.hpp"

namespace mufact {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = 2.220446049250313e-16;

// Unitary V acting on coordinates (p, q) such that V^* H V is diagonal for
// the Hermitian 2x2 block H = [[alpha, beta], [conj(beta), gamma]].
struct Rotation {
  cplx v00, v01, v10, v11;
};

Rotation jacobi_rotation(double alpha, double gamma, cplx beta) {
  const double mag = std::abs(beta);
  const cplx phase = beta / mag;
  const double tau = (gamma - alpha) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx ph = std::conj(phase);
  return {c, s, -s * ph, c * ph};
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q,
                    const Rotation& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const cplx mp = m(r, p);
    const cplx mq = m(r, q);
    m(r, p) = mp * v.v00 + mq * v.v10;
    m(r, q) = mp * v.v01 + mq * v.v11;
  }
}

void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q,
                 const Rotation& v) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const cplx mp = m(p, c);
    const cplx mq = m(q, c);
    m(p, c) = std::conj(v.v00) * mp + std::conj(v.v10) * mq;
    m(q, c) = std::conj(v.v01) * mp + std::conj(v.v11) * mq;
  }
}

double off_diagonal_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// Orthogonalises column `col` of `basis` against columns [0, col) twice
// (classical Gram-Schmidt with reorthogonalisation) and returns its norm.
double orthogonalize(ComplexMatrix& basis, std::size_t col) {
  const std::size_t m = basis.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < col; ++j) {
      cplx dot = 0.0;
      for (std::size_t r = 0; r < m; ++r)
        dot += std::conj(basis(r, j)) * basis(r, col);
      for (std::size_t r = 0; r < m; ++r) basis(r, col) -= dot * basis(r, j);
    }
  }
  double s = 0.0;
  for (std::size_t r = 0; r < m; ++r) s += std::norm(basis(r, col));
  return std::sqrt(s);
}

void scale_column(ComplexMatrix& m, std::size_t col, double s) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, col) *= s;
}

}  // namespace

EigenSystem herm_eig(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "herm_eig: not square");
  const double herm = hermitian_residual(a);
  if (herm > structural_tol(a)) {
    throw Error(ErrorKind::NotHermitian,
                "||A - A*||_F = " + std::to_string(herm));
  }
  const std::size_t n = a.rows();
  ComplexMatrix m = a + a.adjoint();
  m *= 0.5;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = fro_norm(m);

  double prev_off = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(m);
    if (off <= 1e-15 * scale || off == 0.0) {
      converged = true;
      break;
    }
    // Roundoff floor: no further progress is possible.
    if (off >= prev_off && off <= 1e-12 * scale) {
      converged = true;
      break;
    }
    prev_off = off;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx beta = m(p, q);
        if (std::abs(beta) <= 1e-300) continue;
        const Rotation rot = jacobi_rotation(m(p, p).real(), m(q, q).real(), beta);
        rotate_columns(m, p, q, rot);
        rotate_rows(m, p, q, rot);
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        m(p, p) = m(p, p).real();
        m(q, q) = m(q, q).real();
        rotate_columns(v, p, q, rot);
      }
    }
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence, "herm_eig sweep budget exhausted");
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i).real();
  const auto order = descending_order(diag);
  EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, order[j]);
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& a) {
  auto values = herm_eig(a).values;
  return values.empty() ? 0.0 : values.back();
}

double max_eigenvalue(const ComplexMatrix& a) {
  auto values = herm_eig(a).values;
  return values.empty() ? 0.0 : values.front();
}

SvdResult svd(const ComplexMatrix& x) {
  if (x.rows() < x.cols()) {
    SvdResult t = svd(x.adjoint());
    return {std::move(t.right), std::move(t.values), std::move(t.left)};
  }
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  ComplexMatrix g = x;
  ComplexMatrix v = ComplexMatrix::identity(n);

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, gamma = 0.0;
        cplx beta = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          alpha += std::norm(g(r, p));
          gamma += std::norm(g(r, q));
          beta += std::conj(g(r, p)) * g(r, q);
        }
        const double mag = std::abs(beta);
        if (mag == 0.0 || mag <= 1e-15 * std::sqrt(alpha * gamma)) continue;
        rotated = true;
        const Rotation rot = jacobi_rotation(alpha, gamma, beta);
        rotate_columns(g, p, q, rot);
        rotate_columns(v, p, q, rot);
      }
    }
    converged = !rotated;
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "svd sweep budget exhausted");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += std::norm(g(r, j));
    sigma[j] = std::sqrt(s);
  }
  const auto order = descending_order(sigma);
  const double smax = n == 0 ? 0.0 : sigma[order[0]];
  const double cutoff = static_cast<double>(std::max(m, n)) * kEps * smax;

  SvdResult out{ComplexMatrix(m, m), std::vector<double>(n), ComplexMatrix(n, n)};
  std::size_t filled = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = sigma[src];
    for (std::size_t r = 0; r < n; ++r) out.right(r, j) = v(r, src);
    if (sigma[src] > cutoff && sigma[src] > 0.0) {
      for (std::size_t r = 0; r < m; ++r) out.left(r, filled) = g(r, src);
      const double nrm = orthogonalize(out.left, filled);
      scale_column(out.left, filled, 1.0 / nrm);
      ++filled;
    }
  }
  // Columns for zero singular values: complete from e_1, e_2, ... in order.
  for (std::size_t e = 0; e < m && filled < m; ++e) {
    for (std::size_t r = 0; r < m; ++r) out.left(r, filled) = r == e ? 1.0 : 0.0;
    const double nrm = orthogonalize(out.left, filled);
    if (nrm > 0.5) {
      scale_column(out.left, filled, 1.0 / nrm);
      ++filled;
    }
  }
  return out;
}

PolarParts polar(const ComplexMatrix& x) {
  if (!x.is_square()) throw Error(ErrorKind::ShapeMismatch, "polar: not square");
  const SvdResult s = svd(x);
  const ComplexMatrix qh = s.right.adjoint();
  ComplexMatrix psd = s.right * ComplexMatrix::diagonal(std::span<const double>(s.values)) * qh;
  ComplexMatrix sym = psd + psd.adjoint();
  sym *= 0.5;
  return {s.left * qh, std::move(sym)};
}

ComplexMatrix polar_unitary(const ComplexMatrix& x) {
  if (!x.is_square()) throw Error(ErrorKind::ShapeMismatch, "polar: not square");
  if (x.rows() == 1) {
    const double r = std::abs(x(0, 0));
    ComplexMatrix u(1, 1);
    u(0, 0) = r > 0.0 ? x(0, 0) / r : cplx(1.0);
    return u;
  }
  const SvdResult s = svd(x);
  return s.left * s.right.adjoint();
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
  const EigenSystem es = herm_eig(a);
  const double floor = -structural_tol(a);
  std::vector<double> roots(es.values.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double lam = es.values[i];
    if (lam < floor) {
      throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lam) +
                                         " below floor " + std::to_string(floor));
    }
    roots[i] = std::sqrt(std::max(lam, 0.0));
  }
  ComplexMatrix r = es.vectors * ComplexMatrix::diagonal(std::span<const double>(roots)) *
                    es.vectors.adjoint();
  ComplexMatrix sym = r + r.adjoint();
  sym *= 0.5;
  return sym;
}

double op_norm(const ComplexMatrix& x) {
  if (x.empty()) return 0.0;
  return svd(x).values.front();
}

}  // namespace mufact
