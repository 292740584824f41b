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

#include "mufact/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mufact/kernels.hpp"

namespace mufact::norms {

double schur_norm_psd(const ComplexMatrix& y) {
  if (!y.is_square()) throw Error(ErrorKind::ShapeMismatch, "schur_norm_psd: not square");
  if (hermitian_residual(y) > structural_tol(y)) {
    throw Error(ErrorKind::NotPSD, "schur_norm_psd: symbol is not Hermitian");
  }
  const double lam = min_eigenvalue(y);
  if (lam < -structural_tol(y)) {
    throw Error(ErrorKind::NotPSD, "schur_norm_psd: eigenvalue " + std::to_string(lam));
  }
  double best = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i) best = std::max(best, y(i, i).real());
  return best;
}

namespace {

// Projection onto {[[R, A], [A*, S]] : diag(R), diag(S) <= t} within the
// Hermitian matrices.
void project_constraints(ComplexMatrix& y, const ComplexMatrix& a, double t) {
  const std::size_t k = a.rows();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      y(i, k + j) = a(i, j);
      y(k + j, i) = std::conj(a(i, j));
    }
  for (std::size_t i = 0; i < 2 * k; ++i) y(i, i) = std::min(y(i, i).real(), t);
}

ComplexMatrix project_psd(const ComplexMatrix& x) {
  const EigenSystem es = herm_eig(x);
  const std::size_t n = x.rows();
  ComplexMatrix out(n, n);
  for (std::size_t e = 0; e < n; ++e) {
    const double lam = es.values[e];
    if (lam <= 0.0) break;
    for (std::size_t r = 0; r < n; ++r) {
      const cplx vr = lam * es.vectors(r, e);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(es.vectors(c, e));
    }
  }
  return out;
}

struct Feasibility {
  bool feasible = false;
  double gap = 0.0;
  int iterations = 0;
};

// Dykstra's algorithm between the constraint set at level t and the PSD
// cone. `x` carries the PSD iterate between calls as a warm start.
Feasibility dykstra(const ComplexMatrix& a, double t, ComplexMatrix& x,
                    const CbNormOptions& opts) {
  const std::size_t n = x.rows();
  ComplexMatrix p(n, n), q(n, n);
  Feasibility out;
  double gap_checkpoint = std::numeric_limits<double>::infinity();
  constexpr int kWindow = 25;
  for (int it = 1; it <= opts.projection_budget; ++it) {
    ComplexMatrix y = x + p;
    project_constraints(y, a, t);
    p = x + p - y;
    ComplexMatrix z = y + q;
    x = project_psd(z);
    q = z - x;

    // y + gap I is PSD; the margin covers roundoff in the eigensolver.
    const double raw_gap = fro_norm(x - y);
    out.gap = raw_gap + 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + fro_norm(y));
    out.iterations = it;
    if (raw_gap <= opts.feasibility_tol) {
      out.feasible = true;
      return out;
    }
    if (it % kWindow == 0) {
      // Declare infeasible when the observed linear rate cannot reach the
      // tolerance within the remaining budget.
      const double ratio = raw_gap / gap_checkpoint;
      if (ratio >= 1.0) return out;
      const double needed = std::log(opts.feasibility_tol / raw_gap) / std::log(ratio) * kWindow;
      if (needed > opts.projection_budget - it) return out;
      gap_checkpoint = raw_gap;
    }
  }
  return out;
}

}  // namespace

CbNormResult schur_cb_norm_bisection(const ComplexMatrix& a, const CbNormOptions& opts) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "schur_cb_norm: not square");
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, "schur_cb_norm: non-finite symbol");
  const std::size_t k = a.rows();
  CbNormResult res;
  res.estimate.method = "dykstra-bisection";
  const double scale = max_abs(a);
  if (scale == 0.0) return res;

  // The norm is homogeneous, so work with max |a_ij| = 1.
  ComplexMatrix an = a;
  an *= 1.0 / scale;

  // Explicit factorisation a_ij = <x_i, y_j> with x_i the rows of A and
  // y_j = e_j, or the transposed choice, gives a certified starting upper.
  double row_max = 0.0, col_max = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double r = 0.0, c = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      r += std::norm(an(i, j));
      c += std::norm(an(j, i));
    }
    row_max = std::max(row_max, std::sqrt(r));
    col_max = std::max(col_max, std::sqrt(c));
  }
  double upper = std::min(row_max, col_max);
  double lower = 0.0;
  double lo = 0.0, hi = static_cast<double>(k);

  ComplexMatrix x(2 * k, 2 * k);
  for (int depth = 0; depth < opts.bisection_depth; ++depth) {
    const double mid = 0.5 * (lo + hi);
    const Feasibility f = dykstra(an, mid, x, opts);
    res.trace.push_back({mid * scale, f.feasible, f.gap * scale, f.iterations});
    if (f.feasible) {
      hi = mid;
      upper = std::min(upper, mid + f.gap);
    } else {
      lo = mid;
      lower = std::max(lower, mid);
      // Any constraint iterate still certifies level t + gap.
      upper = std::min(upper, mid + f.gap);
    }
  }
  res.estimate.lower = std::min(lower, upper) * scale;
  res.estimate.upper = upper * scale;
  return res;
}

namespace {

// Diagonals of U S U^* and V S V^* for D_alpha A D_beta = U S V^*, and the
// trace norm.
struct ScaledSvd {
  std::vector<double> p, q;
  double trace_norm = 0.0;
};

ScaledSvd scaled_svd(const ComplexMatrix& a, const std::vector<double>& alpha,
                     const std::vector<double>& beta) {
  const std::size_t k = a.rows();
  ComplexMatrix b(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) b(i, j) = alpha[i] * a(i, j) * beta[j];
  const SvdResult s = svd(b);
  ScaledSvd out{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0), 0.0};
  for (std::size_t r = 0; r < k; ++r) {
    const double sigma = s.values[r];
    out.trace_norm += sigma;
    for (std::size_t i = 0; i < k; ++i) {
      out.p[i] += sigma * std::norm(s.left(i, r));
      out.q[i] += sigma * std::norm(s.right(i, r));
    }
  }
  return out;
}

// alpha_i <- c_i / ||c||, kept strictly positive so the certificate exists.
void normalize_positive(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (auto& x : v) {
    x = std::max(x, 1e-12 * top);
    s += x * x;
  }
  s = std::sqrt(s);
  for (auto& x : v) x /= s;
}

double certified_upper(const ScaledSvd& s, const std::vector<double>& alpha,
                       const std::vector<double>& beta) {
  double up = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    up = std::max(up, s.p[i] / (alpha[i] * alpha[i]));
    up = std::max(up, s.q[i] / (beta[i] * beta[i]));
  }
  return up;
}

}  // namespace

NormEstimate schur_cb_norm_scaling(const ComplexMatrix& a, const CbNormOptions& opts) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "schur_cb_norm: not square");
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, "schur_cb_norm: non-finite symbol");
  const std::size_t k = a.rows();
  NormEstimate est{0.0, 0.0, "diagonal-scaling"};
  const double scale = max_abs(a);
  if (scale == 0.0) return est;
  ComplexMatrix an = a;
  an *= 1.0 / scale;

  // Roundoff in the SVD reconstruction of the certificate.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(k);
  std::vector<double> alpha(k, 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<double> beta = alpha;
  // alpha = e_i, beta = e_j gives |a_ij|.
  double lower = 1.0;
  double upper = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.scaling_iters; ++it) {
    ScaledSvd s = scaled_svd(an, alpha, beta);
    lower = std::max(lower, s.trace_norm * (1.0 - slack));
    upper = std::min(upper, certified_upper(s, alpha, beta) * (1.0 + slack));
    if (upper - lower <= 1e-10 * upper) break;
    // P_ii = alpha_i c_i at the current point; the maximiser over alpha for
    // the current singular vectors is proportional to c.
    for (std::size_t i = 0; i < k; ++i) alpha[i] = s.p[i] / alpha[i];
    normalize_positive(alpha);
    s = scaled_svd(an, alpha, beta);
    lower = std::max(lower, s.trace_norm * (1.0 - slack));
    upper = std::min(upper, certified_upper(s, alpha, beta) * (1.0 + slack));
    for (std::size_t j = 0; j < k; ++j) beta[j] = s.q[j] / beta[j];
    normalize_positive(beta);
  }
  est.lower = std::min(lower, upper) * scale;
  est.upper = upper * scale;
  return est;
}

NormEstimate schur_cb_norm(const ComplexMatrix& a, const CbNormOptions& opts) {
  NormEstimate est = schur_cb_norm_scaling(a, opts);
  if (est.upper - est.lower > 1e-4 * est.upper) {
    const NormEstimate bis = schur_cb_norm_bisection(a, opts).estimate;
    if (bis.upper < est.upper) {
      est.upper = bis.upper;
      est.method = "diagonal-scaling+dykstra-bisection";
    }
    est.lower = std::min(est.lower, est.upper);
  }
  if (est.upper - est.lower > 1e-4 * est.upper) {
    throw Error(ErrorKind::NoConvergence,
                "schur_cb_norm: bracket [" + std::to_string(est.lower) + ", " +
                    std::to_string(est.upper) + "] wider than 1e-4 relative");
  }
  return est;
}

BasisActionTable BasisActionTable::from_map(const channels::LinearMap& map) {
  BasisActionTable t{map.dim_in, map.dim_out, {}};
  t.images.reserve(t.n * t.n);
  for (std::size_t a = 0; a < t.n; ++a)
    for (std::size_t b = 0; b < t.n; ++b) {
      ComplexMatrix img = map(ComplexMatrix::unit(t.n, t.n, a, b));
      if (img.rows() != t.m || img.cols() != t.m) {
        throw Error(ErrorKind::ShapeMismatch, "basis image shape");
      }
      t.images.push_back(std::move(img));
    }
  return t;
}

ComplexMatrix BasisActionTable::apply(const ComplexMatrix& x) const {
  if (x.rows() != n || x.cols() != n) throw Error(ErrorKind::ShapeMismatch, "table input");
  ComplexMatrix out(m, m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x(a, b) != cplx(0.0)) out.add_scaled(images[a * n + b], x(a, b));
  return out;
}

namespace {

double ascend(const BasisActionTable& table, ComplexMatrix x, const AscentOptions& opts) {
  const std::size_t n = table.n, m = table.m;
  double value = op_norm(table.apply(x));
  for (std::size_t it = 0; it < opts.max_iters && value > 0.0; ++it) {
    const SvdResult s = svd(table.apply(x));
    // W_ab = u* L(E_ab) v for the top singular pair (u, v).
    ComplexMatrix w(n, n);
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      const ComplexMatrix& img = table.images[idx];
      cplx acc = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        cplx row = 0.0;
        for (std::size_t c = 0; c < m; ++c) row += img(r, c) * s.right(c, 0);
        acc += std::conj(s.left(r, 0)) * row;
      }
      w(idx / n, idx % n) = acc;
    }
    // argmax over unitary X of Re sum_ab X_ab W_ab.
    ComplexMatrix next = polar_unitary(w.conj());
    const double v = op_norm(table.apply(next));
    if (!(v > value)) break;
    const bool small = v - value <= opts.tol * (1.0 + value);
    value = v;
    x = std::move(next);
    if (small) break;
  }
  return value;
}

template <class For>
double superop_norm_lb_impl(const BasisActionTable& table, const AscentOptions& opts,
                            For&& for_each) {
  if (table.images.size() != table.n * table.n) {
    throw Error(ErrorKind::ShapeMismatch, "basis action table size");
  }
  const std::size_t starts = std::max<std::size_t>(opts.starts, 1);
  std::vector<double> values(starts, 0.0);
  for_each(starts, [&](std::size_t s) {
    ComplexMatrix x = s == 0 ? ComplexMatrix::identity(table.n)
                             : random_haar_unitary(table.n, opts.seed.derive(s));
    values[s] = ascend(table, std::move(x), opts);
  });
  return *std::max_element(values.begin(), values.end());
}

}  // namespace

double superop_norm_lb(const BasisActionTable& table, const AscentOptions& opts) {
  return superop_norm_lb_impl(table, opts, [](std::size_t n, auto&& fn) {
    kernels::parallel_for(n, fn);
  });
}

double superop_norm_lb_serial(const BasisActionTable& table, const AscentOptions& opts) {
  return superop_norm_lb_impl(table, opts, [](std::size_t n, auto&& fn) {
    kernels::serial::parallel_for(n, fn);
  });
}

}  // namespace mufact::norms
