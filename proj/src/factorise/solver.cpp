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
#include <numeric>
#include <string>
#include <utility>

#include "mufact/factorise.hpp"
#include "mufact/kernels.hpp"

namespace mufact::factorise {

namespace {

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

struct Atom {
  std::vector<ComplexMatrix> u;
  ComplexMatrix g;  // Gram matrix of u
};

class Solver {
 public:
  Solver(const ComplexMatrix& c, std::size_t d, std::size_t atoms, Seed seed)
      : c_(c), d_(d), k_(c.rows()), seed_(seed), p_(atoms, 1.0 / static_cast<double>(atoms)) {
    for (std::size_t m = 0; m < atoms; ++m) atoms_.push_back(random_atom());
  }

  void warm_start(const UnitaryTupleEnsemble& e) {
    const std::size_t m_total = std::max(e.size(), atoms_.size());
    atoms_.resize(m_total);
    p_.assign(m_total, 0.0);
    step_.assign(m_total, 1.0);
    for (std::size_t m = 0; m < e.size(); ++m) {
      atoms_[m].u = e.tuples[m].unitaries;
      refresh_gram(atoms_[m]);
      p_[m] = e.weights[m];
    }
    // Remaining atoms keep their random tuples with weight 0.
    const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
    for (auto& w : p_) w /= total;
  }

  double objective() const {
    const double r = fro_norm(c_ - achieved());
    return r * r;
  }

  ComplexMatrix achieved() const {
    ComplexMatrix a(k_, k_);
    for (std::size_t m = 0; m < atoms_.size(); ++m)
      if (p_[m] > 0.0) a.add_scaled(atoms_[m].g, p_[m]);
    return a;
  }

  std::vector<double> run(std::size_t max_iters, double tol) {
    std::vector<double> trace;
    double f = objective();
    trace.push_back(f);
    if (f <= tol * tol) return trace;
    for (std::size_t it = 0; it < max_iters; ++it) {
      const auto saved_atoms = atoms_;
      const auto saved_p = p_;
      revive_dead_atoms();
      atom_sweep();
      weight_steps();
      joint_step();
      const double f_new = objective();
      if (!(f_new <= f)) {
        // Roundoff in the incremental bookkeeping; keep the previous point.
        atoms_ = saved_atoms;
        p_ = saved_p;
        break;
      }
      const double gain = f - f_new;
      f = f_new;
      trace.push_back(f);
      if (gain < tol * tol || f <= tol * tol) break;
    }
    return trace;
  }

  UnitaryTupleEnsemble ensemble() const {
    UnitaryTupleEnsemble e{d_, k_, {}, {}};
    for (std::size_t m = 0; m < atoms_.size(); ++m) {
      if (p_[m] <= 0.0) continue;
      e.weights.push_back(p_[m]);
      e.tuples.push_back(UnitaryTuple{d_, k_, atoms_[m].u});
    }
    return e;
  }

 private:
  Atom random_atom() {
    Atom a;
    for (std::size_t i = 0; i < k_; ++i) a.u.push_back(random_haar_unitary(d_, seed_.derive(draws_++)));
    refresh_gram(a);
    return a;
  }

  cplx gram_entry(const ComplexMatrix& ui, const ComplexMatrix& uj) const {
    return hs_inner(ui, uj) / static_cast<double>(d_);
  }

  void refresh_gram(Atom& a) const {
    a.g = ComplexMatrix(k_, k_);
    for (std::size_t i = 0; i < k_; ++i) {
      a.g(i, i) = 1.0;
      for (std::size_t j = i + 1; j < k_; ++j) {
        a.g(i, j) = gram_entry(a.u[i], a.u[j]);
        a.g(j, i) = std::conj(a.g(i, j));
      }
    }
  }

  // Atoms with zero weight do not touch the objective; give them a fresh
  // random tuple so the weight step can pick them up again.
  void revive_dead_atoms() {
    for (std::size_t m = 0; m < atoms_.size(); ++m)
      if (p_[m] == 0.0) atoms_[m] = random_atom();
  }

  // Change in f when row/column i of the achieved matrix moves by delta
  // (delta_i = 0 on the diagonal).
  double delta_f(const ComplexMatrix& r, std::size_t i, const std::vector<cplx>& delta) const {
    double df = 0.0;
    for (std::size_t j = 0; j < k_; ++j) {
      if (j == i) continue;
      df += 2.0 * (std::norm(r(i, j) - delta[j]) - std::norm(r(i, j)));
    }
    return df;
  }

  void atom_sweep() {
    ComplexMatrix r = c_ - achieved();
    for (std::size_t m = 0; m < atoms_.size(); ++m) {
      const double pm = p_[m];
      if (pm <= 0.0) continue;
      Atom& a = atoms_[m];
      for (std::size_t i = 0; i < k_; ++i) {
        // Candidate 1 aligns U_i with the residual that atom m alone should
        // explain: T_ij = R_ij + p_m g_ij. It is the exact minimiser for d = 1.
        // Candidate 2 is a retracted gradient step on f.
        ComplexMatrix z_own(d_, d_), z_grad(d_, d_);
        for (std::size_t j = 0; j < k_; ++j) {
          if (j == i) continue;
          z_own.add_scaled(a.u[j], std::conj(r(i, j) + pm * a.g(i, j)));
          z_grad.add_scaled(a.u[j], std::conj(r(i, j)));
        }
        bool accepted = try_update(a, m, i, polar_unitary(z_own), r);
        double eta = step_[m];
        for (int tries = 0; !accepted && tries < 4; ++tries, eta *= 0.25) {
          ComplexMatrix moved = a.u[i];
          moved.add_scaled(z_grad, eta);
          accepted = try_update(a, m, i, polar_unitary(moved), r);
          if (accepted) step_[m] = std::min(eta * 2.0, 1e3);
        }
        if (!accepted) step_[m] = std::max(step_[m] * 0.5, 1e-6);
      }
    }
  }

  bool try_update(Atom& a, std::size_t m, std::size_t i, ComplexMatrix candidate,
                  ComplexMatrix& r) {
    std::vector<cplx> row(k_), delta(k_, 0.0);
    for (std::size_t j = 0; j < k_; ++j) {
      if (j == i) continue;
      row[j] = gram_entry(candidate, a.u[j]);
      delta[j] = p_[m] * (row[j] - a.g(i, j));
    }
    if (!(delta_f(r, i, delta) < 0.0)) return false;
    a.u[i] = std::move(candidate);
    for (std::size_t j = 0; j < k_; ++j) {
      if (j == i) continue;
      a.g(i, j) = row[j];
      a.g(j, i) = std::conj(row[j]);
      r(i, j) -= delta[j];
      r(j, i) = std::conj(r(i, j));
    }
    return true;
  }

  // Projected gradient on the simplex with backtracking. f(p) is quadratic:
  // f = ||C||^2 - 2 b.p + p.Q.p with Q_mn = Re<g_m, g_n>, b_m = Re<g_m, C>.
  void weight_steps() {
    const std::size_t n = atoms_.size();
    std::vector<double> q(n * n), b(n);
    for (std::size_t m = 0; m < n; ++m) {
      b[m] = hs_inner(atoms_[m].g, c_).real();
      for (std::size_t l = m; l < n; ++l) {
        q[m * n + l] = q[l * n + m] = hs_inner(atoms_[m].g, atoms_[l].g).real();
      }
    }
    auto f_of = [&](const std::vector<double>& p) {
      double v = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        if (p[m] == 0.0) continue;
        double qp = 0.0;
        for (std::size_t l = 0; l < n; ++l) qp += q[m * n + l] * p[l];
        v += p[m] * (qp - 2.0 * b[m]);
      }
      return v;  // f minus the constant ||C||^2
    };
    double f = f_of(p_);
    for (int step = 0; step < 8; ++step) {
      std::vector<double> grad(n);
      for (std::size_t m = 0; m < n; ++m) {
        double qp = 0.0;
        for (std::size_t l = 0; l < n; ++l) qp += q[m * n + l] * p_[l];
        grad[m] = 2.0 * (qp - b[m]);
      }
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        std::vector<double> next(n);
        for (std::size_t m = 0; m < n; ++m) next[m] = p_[m] - weight_step_ * grad[m];
        project_simplex(next);
        double dist2 = 0.0;
        for (std::size_t m = 0; m < n; ++m) dist2 += (next[m] - p_[m]) * (next[m] - p_[m]);
        if (dist2 == 0.0) break;
        const double f_next = f_of(next);
        // Sufficient decrease for a step within the local Lipschitz bound.
        if (f_next <= f - 0.5 / weight_step_ * dist2) {
          p_ = std::move(next);
          f = f_next;
          weight_step_ *= 1.5;
          moved = true;
          break;
        }
        weight_step_ *= 0.5;
      }
      if (!moved) break;
    }
  }

  // One Levenberg-Marquardt step on all active weights and unitaries at once,
  // kept only if f decreases. Rows are Re/Im of the strictly upper residual
  // entries; unitaries move along U_a <- polar(U_a (I + iH)) with H
  // Hermitian, and weights through p_m = s_m^2 / |s|^2. The system is underdetermined, so the step is J^T y with
  // (J J^T + mu I) y = r.
  void joint_step() {
    std::vector<std::size_t> active;
    for (std::size_t m = 0; m < atoms_.size(); ++m)
      if (p_[m] > 0.0) active.push_back(m);
    const std::size_t n = active.size(), dd = d_ * d_;
    const std::size_t rows = k_ * (k_ - 1);
    if (rows == 0) return;
    const std::size_t per_atom = 1 + k_ * dd;
    const std::size_t cols = n * per_atom;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = i + 1; j < k_; ++j) pairs.emplace_back(i, j);

    std::vector<double> jac(rows * cols, 0.0);
    auto put = [&](std::size_t pair, std::size_t col, cplx v) {
      jac[(2 * pair) * cols + col] = v.real();
      jac[(2 * pair + 1) * cols + col] = v.imag();
    };
    const ComplexMatrix ach = achieved();
    const double inv_d = 1.0 / static_cast<double>(d_);
    for (std::size_t slot = 0; slot < n; ++slot) {
      const std::size_t m = active[slot];
      const Atom& a = atoms_[m];
      const std::size_t base = slot * per_atom;
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [i, j] = pairs[q];
        put(q, base, 2.0 * std::sqrt(p_[m]) * (a.g(i, j) - ach(i, j)));
        // delta g_ij = -i tr(H U_i^* U_j)/d when U_i moves, +i tr(H U_i^* U_j)/d
        // when U_j moves.
        const ComplexMatrix nij = a.u[i].adjoint() * a.u[j];
        for (int side = 0; side < 2; ++side) {
          const std::size_t idx = side == 0 ? i : j;
          const cplx sign = (side == 0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0)) * (p_[m] * inv_d);
          std::size_t col = base + 1 + idx * dd;
          for (std::size_t r = 0; r < d_; ++r) {
            put(q, col++, sign * nij(r, r));
            for (std::size_t t = r + 1; t < d_; ++t) {
              put(q, col++, sign * (nij(t, r) + nij(r, t)));
              put(q, col++, sign * cplx(0.0, 1.0) * (nij(t, r) - nij(r, t)));
            }
          }
        }
      }
    }

    const ComplexMatrix resid = c_ - ach;
    std::vector<double> rhs(rows);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      rhs[2 * q] = resid(pairs[q].first, pairs[q].second).real();
      rhs[2 * q + 1] = resid(pairs[q].first, pairs[q].second).imag();
    }
    std::vector<double> jjt(rows * rows, 0.0);
    double diag_max = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t s = r; s < rows; ++s) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += jac[r * cols + c] * jac[s * cols + c];
        jjt[r * rows + s] = jjt[s * rows + r] = acc;
        if (r == s) diag_max = std::max(diag_max, acc);
      }
    if (!(diag_max > 0.0)) return;

    const double f0 = objective();
    for (int attempt = 0; attempt < 6; ++attempt) {
      std::vector<double> a = jjt;
      for (std::size_t r = 0; r < rows; ++r) a[r * rows + r] += mu_ * diag_max;
      std::vector<double> y = rhs;
      if (!cholesky_solve(a, rows, y)) {
        mu_ *= 4.0;
        continue;
      }
      std::vector<double> step(cols, 0.0);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) step[c] += jac[r * cols + c] * y[r];

      const auto saved_atoms = atoms_;
      const auto saved_p = p_;
      for (std::size_t slot = 0; slot < n; ++slot) {
        const std::size_t m = active[slot];
        const double root = std::sqrt(p_[m]) + step[slot * per_atom];
        p_[m] = root * root;
        Atom& at = atoms_[m];
        for (std::size_t idx = 0; idx < k_; ++idx) {
          ComplexMatrix h(d_, d_);
          std::size_t col = slot * per_atom + 1 + idx * dd;
          for (std::size_t r = 0; r < d_; ++r) {
            h(r, r) = step[col++];
            for (std::size_t t = r + 1; t < d_; ++t) {
              const double sym = step[col++], anti = step[col++];
              h(r, t) = cplx(sym, anti);
              h(t, r) = cplx(sym, -anti);
            }
          }
          ComplexMatrix moved = at.u[idx];
          moved.add_scaled(at.u[idx] * h, cplx(0.0, 1.0));
          at.u[idx] = polar_unitary(moved);
        }
        refresh_gram(at);
      }
      const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
      for (auto& w : p_) w /= total;
      if (objective() < f0) {
        mu_ = std::max(mu_ / 3.0, 1e-12);
        return;
      }
      atoms_ = saved_atoms;
      p_ = saved_p;
      mu_ *= 4.0;
    }
  }

  // In-place Cholesky solve of the symmetric positive definite system a x = b.
  static bool cholesky_solve(std::vector<double>& a, std::size_t n, std::vector<double>& b) {
    for (std::size_t j = 0; j < n; ++j) {
      double diag = a[j * n + j];
      for (std::size_t t = 0; t < j; ++t) diag -= a[j * n + t] * a[j * n + t];
      if (!(diag > 0.0)) return false;
      diag = std::sqrt(diag);
      a[j * n + j] = diag;
      for (std::size_t i = j + 1; i < n; ++i) {
        double v = a[i * n + j];
        for (std::size_t t = 0; t < j; ++t) v -= a[i * n + t] * a[j * n + t];
        a[i * n + j] = v / diag;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < i; ++t) b[i] -= a[i * n + t] * b[t];
      b[i] /= a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t t = i + 1; t < n; ++t) b[i] -= a[t * n + i] * b[t];
      b[i] /= a[i * n + i];
    }
    return true;
  }

  const ComplexMatrix& c_;
  std::size_t d_, k_;
  Seed seed_;
  std::uint64_t draws_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> p_;
  std::vector<double> step_ = std::vector<double>(p_.size(), 1.0);
  double weight_step_ = 0.1;
  double mu_ = 1e-3;
};

struct RestartOutcome {
  UnitaryTupleEnsemble ensemble;
  std::vector<double> trace;
  double objective = 0.0;
};

template <class For>
MembershipResult solve_impl(const ComplexMatrix& c, std::size_t d, const SolverOptions& opts,
                            For&& for_each) {
  channels::require_correlation(c);
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "membership_solve: d = 0");
  const std::size_t k = c.rows();
  const std::size_t atoms = opts.atoms == 0 ? k * k + 1 : opts.atoms;
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
  if (opts.warm_start) {
    validate(*opts.warm_start, 1e-9);
    if (opts.warm_start->d != d || opts.warm_start->k != k) {
      throw Error(ErrorKind::ShapeMismatch, "warm start dimensions");
    }
  }

  std::vector<RestartOutcome> outcomes(restarts);
  for_each(restarts, [&](std::size_t s) {
    Solver solver(c, d, atoms, opts.seed.derive(s));
    if (s == 0 && opts.warm_start) solver.warm_start(*opts.warm_start);
    outcomes[s].trace = solver.run(opts.max_iters, opts.tol);
    outcomes[s].objective = outcomes[s].trace.back();
    outcomes[s].ensemble = solver.ensemble();
  });

  MembershipResult res;
  for (std::size_t s = 0; s < restarts; ++s) {
    res.restart_objectives.push_back(outcomes[s].objective);
    if (outcomes[s].objective < outcomes[res.best_restart].objective) res.best_restart = s;
  }
  RestartOutcome& best = outcomes[res.best_restart];
  res.objective = std::move(best.trace);
  res.certificate = make_certificate(std::move(best.ensemble), c);
  return res;
}

}  // namespace

MembershipResult membership_solve(const ComplexMatrix& c, std::size_t d,
                                  const SolverOptions& opts) {
  return solve_impl(c, d, opts, [](std::size_t n, auto&& fn) { kernels::parallel_for(n, fn); });
}

MembershipResult membership_solve_serial(const ComplexMatrix& c, std::size_t d,
                                         const SolverOptions& opts) {
  return solve_impl(c, d, opts,
                    [](std::size_t n, auto&& fn) { kernels::serial::parallel_for(n, fn); });
}

DistanceBound bound_for_certificate(GramCertificate cert) {
  DistanceBound out;
  ComplexMatrix delta = cert.target - cert.achieved;
  delta = 0.5 * (delta + delta.adjoint());
  out.cb = norms::schur_cb_norm(delta);
  // delta = P - N with P, N PSD; ||S_P||_cb = max diag P and likewise for N.
  const EigenSystem es = herm_eig(delta);
  const std::size_t k = delta.rows();
  std::vector<double> pos(k, 0.0), neg(k, 0.0);
  for (std::size_t e = 0; e < k; ++e) {
    const double lam = es.values[e];
    for (std::size_t i = 0; i < k; ++i) {
      const double w = std::norm(es.vectors(i, e));
      (lam > 0.0 ? pos : neg)[i] += std::abs(lam) * w;
    }
  }
  out.psd_split = *std::max_element(pos.begin(), pos.end()) +
                  *std::max_element(neg.begin(), neg.end());
  out.upper = std::min(out.cb.upper, out.psd_split);
  out.certificate = std::move(cert);
  return out;
}

DistanceBound dist_upper_bound(const ComplexMatrix& c, std::size_t d, const SolverOptions& opts) {
  DistanceBound best = bound_for_certificate(membership_solve(c, d, opts).certificate);
  if (opts.warm_start) {
    DistanceBound warm = bound_for_certificate(make_certificate(*opts.warm_start, c));
    if (warm.upper < best.upper) best = std::move(warm);
  }
  return best;
}

}  // namespace mufact::factorise
