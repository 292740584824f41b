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

// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mufact/channels.hpp"
#include "mufact/error.hpp"
#include "mufact/factorise.hpp"
#include "mufact/norms.hpp"
#include "mufact/numkit.hpp"
#include "test_util.hpp"

using namespace mufact;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const Error& e) {
    out = {false, std::string("unexpected error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    out.pass = false;
    out.detail += " (over the " + std::to_string(limit_s) + " s budget)";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %-28s %7.2fs  %s\n", out.pass ? "PASS" : "FAIL", id, name, secs,
              out.detail.c_str());
  std::fflush(stdout);
}

ComplexMatrix unit(std::size_t n, std::size_t a, std::size_t b) {
  ComplexMatrix e(n, n);
  e(a, b) = 1.0;
  return e;
}

// Largest gap between two maps over the matrix units of M_n.
double basis_gap(const channels::LinearMap& f, const channels::LinearMap& g) {
  const std::size_t n = f.dim_in;
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const ComplexMatrix e = unit(n, a, b);
      worst = std::max(worst, max_abs(f(e) - g(e)));
    }
  return worst;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome weyl_depolarizer() {
  double worst = 0.0;
  for (std::size_t d = 1; d <= 6; ++d) {
    const auto ens = channels::depolarizing_ensemble(d);
    if (ens.size() != d * d) return {false, "ensemble size is not d^2"};
    for (std::uint64_t s = 0; s < 100; ++s) {
      const ComplexMatrix x = random_gaussian(d, d, Seed{1000 * d + s});
      const ComplexMatrix expected = normalized_trace(x) * ComplexMatrix::identity(d);
      worst = std::max(worst, max_abs(channels::apply_ensemble(ens, x) - expected));
    }
  }
  return {worst <= 1e-12, fmt("max error %.2e", worst)};
}

Outcome mu_ensemble_matches_lift() {
  const std::size_t shapes[][2] = {{1, 4}, {2, 2}, {2, 3}, {3, 2}};
  double worst = 0.0;
  for (const auto& [d, k] : shapes)
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto e = factorise::sample_fkd_convex(d, k, 2, Seed{20 * d + k + 100 * s});
      const auto mu = channels::as_map(factorise::mu_ensemble_from_tuples(e));
      const auto lifted = channels::lift_schur({factorise::gram_average(e)}, d);
      worst = std::max(worst, basis_gap(mu, lifted));
    }
  return {worst <= 1e-9, fmt("max basis error %.2e", worst)};
}

Outcome tuple_round_trip() {
  double gram_err = 0.0, off_block = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 1 + s % 3, k = 2 + (s / 3) % 3;
    const auto e = factorise::sample_fkd_convex(d, k, 1 + s % 3, Seed{300 + s});
    const ComplexMatrix c = factorise::gram_average(e);
    const auto mu = factorise::mu_ensemble_from_tuples(e);
    off_block = std::max(off_block, factorise::max_off_block(mu, d, k));
    const auto back = factorise::tuples_from_ensemble(mu, c, d, k, 1e-9);
    gram_err = std::max(gram_err, max_abs(factorise::gram_average(back) - c));
  }
  return {gram_err <= 1e-9 && off_block <= 1e-10,
          fmt("Gram error %.2e, off-block %.2e", gram_err, off_block)};
}

Outcome delta_compression() {
  double gap = 0.0, ens_gap = 0.0, excess = -1.0;
  bool channels_ok = true;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 1 + s % 3, k = 1 + (s / 3) % 3, n = d * k;
    const auto phi = testutil::random_ensemble(n, 1 + s % 4, Seed{400 + s});
    const auto dc = channels::delta_compress(phi, d, k);
    channels_ok = channels_ok && channels::verify_channel(dc.channel, 1e-9).all();

    const channels::LinearMap delta{n, n, [d, k](const ComplexMatrix& x) {
                                      return channels::delta_apply(x, d, k);
                                    }};
    const auto phi_map = channels::as_map(phi);
    const channels::LinearMap sandwich{n, n, [&](const ComplexMatrix& x) {
                                         return delta(phi_map(delta(x)));
                                       }};
    const auto target = testutil::depolarizer_tensor(channels::as_map(dc.channel), d, k);
    gap = std::max(gap, basis_gap(sandwich, target));
    if (dc.ensemble) ens_gap = std::max(ens_gap, basis_gap(channels::as_map(*dc.ensemble), target));
    else channels_ok = false;
  }
  // ||(delta_d (x) S_A)(X)|| <= max_i a_ii for PSD A and contractions X.
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 1 + s % 3, k = 1 + (s / 3) % 3;
    const ComplexMatrix g = random_gaussian(k, k, Seed{500 + s});
    const channels::SchurSymbol a{g * g.adjoint()};
    const ComplexMatrix x = random_contraction(d * k, Seed{600 + s});
    const double lhs = op_norm(channels::lift_schur(a, d)(x));
    excess = std::max(excess, lhs - norms::schur_norm_psd(a.matrix));
  }
  const bool pass = channels_ok && gap <= 1e-9 && ens_gap <= 1e-9 && excess <= 1e-10;
  return {pass, fmt("sandwich error %.2e, ensemble error %.2e", gap, ens_gap) +
                    fmt(", norm excess %.2e", excess) + (channels_ok ? "" : ", bad channel")};
}

Outcome biaverage_oracle() {
  double gap = 0.0, min_eig = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t k = 2 + s % 3;
    const auto t = channels::as_map(testutil::random_kraus(k, 1 + s % 3, Seed{700 + s}));
    const auto fast = channels::d_biaverage(t);
    const auto slow = channels::biaverage_pm_oracle(t);
    gap = std::max(gap, max_abs(fast.matrix - slow.matrix));
    min_eig = std::min(min_eig, min_eigenvalue(fast.matrix));
  }
  return {gap <= 1e-10 && min_eig >= -1e-10,
          fmt("max error %.2e, min eigenvalue %.2e", gap, min_eig)};
}

Outcome halmos() {
  double unitarity = 0.0, corners = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t d = 1 + s % 8;
    const ComplexMatrix x = random_contraction(d, Seed{800 + s});
    const ComplexMatrix w = factorise::halmos_dilate(x);
    unitarity = std::max(unitarity, unitarity_residual(w));
    corners = std::max({corners, max_abs(w.block(0, 0, d, d) - x),
                        max_abs(w.block(d, d, d, d) - x)});
  }
  return {unitarity <= 1e-9 && corners == 0.0,
          fmt("unitarity %.2e, corner error %.2e", unitarity, corners)};
}

Outcome correction_bound() {
  const double eps_grid[] = {0.02, 0.1, 0.3};
  factorise::CorrectionOptions opts;
  opts.premise_bound = false;
  int bound_fail = 0, cert_fail = 0;
  double worst_ratio = 0.0, cert_err = 0.0, fixed = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 1 + s % 2, k = 2 + (s / 2) % 3;
    const double eps = eps_grid[(s / 6) % 3];
    // Even seeds: the convex family with eps = 2t. Odd seeds mix a Haar
    // ensemble of weight r into Phi as well, giving eps = 2t + 2r.
    const double r = s % 2 ? eps / 4 : 0.0, t = eps / 2 - r;
    const auto e0 = factorise::sample_fkd_convex(d, k, 2, Seed{900 + s});
    const auto e1 = factorise::sample_fkd_convex(d, k, 2, Seed{1900 + s});
    const ComplexMatrix c =
        (1.0 - t) * factorise::gram_average(e0) + t * factorise::gram_average(e1);
    auto phi = factorise::mu_ensemble_from_tuples(e0);
    if (r > 0) {
      const auto psi = testutil::random_ensemble(d * k, 3, Seed{2900 + s});
      for (auto& w : phi.weights) w *= 1.0 - r;
      for (std::size_t l = 0; l < psi.size(); ++l) {
        phi.weights.push_back(r * psi.weights[l]);
        phi.unitaries.push_back(psi.unitaries[l]);
      }
    }
    const auto rep = factorise::correction_pipeline(c, phi, eps, opts);
    if (!(rep.max_abs_delta < 2.0 * eps)) ++bound_fail;
    worst_ratio = std::max(worst_ratio, rep.max_abs_delta / (2.0 * eps));
    const auto check = factorise::verify_certificate(rep.certificate, 1e-10);
    const double err = max_abs(factorise::gram_average(rep.certificate.ensemble) - rep.c_hat);
    cert_err = std::max(cert_err, err);
    if (!check.ok || err > 1e-10 || rep.certificate.ensemble.d != 2 * d) ++cert_fail;

    const ComplexMatrix c0 = factorise::gram_average(e0);
    const auto exact = factorise::correction_pipeline(
        c0, factorise::mu_ensemble_from_tuples(e0), eps, opts);
    fixed = std::max(fixed, exact.max_abs_delta);
  }
  const bool pass = bound_fail == 0 && cert_fail == 0 && fixed <= 1e-9;
  return {pass, fmt("worst delta/2eps %.3f, certificate error %.2e", worst_ratio, cert_err) +
                    fmt(", fixed point %.2e", fixed) +
                    (bound_fail ? ", bound failures " + std::to_string(bound_fail) : "") +
                    (cert_fail ? ", certificate failures " + std::to_string(cert_fail) : "")};
}

Outcome scalar_membership() {
  int recovered = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto planted = factorise::sample_fkd_convex(1, 4, 3, Seed{3000 + s});
    factorise::SolverOptions o;
    o.restarts = 20;
    o.seed = Seed{s};
    const auto res = factorise::membership_solve(factorise::gram_average(planted), 1, o);
    const double r = res.certificate.residual_fro;
    worst = std::max(worst, r);
    if (r <= 1e-4 && factorise::verify_certificate(res.certificate, 1e-12).ok) ++recovered;
  }
  return {recovered >= 18, std::to_string(recovered) + "/20 recovered" +
                               fmt(", worst residual %.2e", worst)};
}

Outcome doubling_bound() {
  bool pass = true;
  double worst_d = 0.0, worst_2d = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto planted = factorise::sample_fkd_convex(2, 4, 3, Seed{4000 + s});
    const ComplexMatrix c = factorise::gram_average(planted);
    factorise::SolverOptions o;
    o.restarts = 8;
    o.seed = Seed{s};
    const auto at_d = factorise::dist_upper_bound(c, 2, o);
    o.warm_start = factorise::double_dimension(at_d.certificate.ensemble);
    const auto at_2d = factorise::dist_upper_bound(c, 4, o);
    worst_d = std::max(worst_d, at_d.upper);
    worst_2d = std::max(worst_2d, at_2d.upper);
    pass = pass && at_d.upper <= 1e-4 && at_2d.upper <= 1e-4 && at_2d.upper <= at_d.upper;
  }
  return {pass, fmt("bound at d0 %.2e, at 2d0 %.2e", worst_d, worst_2d)};
}

Outcome cb_norms() {
  double psd_err = 0.0;
  int sandwich_fail = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t k = 2 + s % 4;
    const ComplexMatrix g = random_gaussian(k, k, Seed{5000 + s});
    const ComplexMatrix y = g * g.adjoint();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, y(i, i).real());
    const auto est = norms::schur_cb_norm(y);
    psd_err = std::max({psd_err, std::abs(est.upper - max_diag), std::abs(est.lower - max_diag)});
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t k = 2 + s % 4;
    const ComplexMatrix a = random_hermitian(k, Seed{6000 + s});
    const auto cb = norms::schur_cb_norm(a);
    const auto table = norms::BasisActionTable::from_map(channels::schur_map({a}));
    const double lb = norms::superop_norm_lb(table);
    const double slack = 1e-9 * std::max(1.0, cb.upper);
    if (lb > cb.upper + slack || cb.lower > static_cast<double>(k) * lb + slack) ++sandwich_fail;
  }
  return {psd_err <= 1e-4 && sandwich_fail == 0,
          fmt("PSD max error %.2e, sandwich failures %.0f", psd_err, sandwich_fail)};
}

}  // namespace

int main() {
  report(1, "Weyl depolarizer", 5.0, weyl_depolarizer);
  report(2, "tuple ensemble vs lift", 30.0, mu_ensemble_matches_lift);
  report(3, "tuple round trip", 0.0, tuple_round_trip);
  report(4, "delta compression", 0.0, delta_compression);
  report(5, "diagonal biaverage", 0.0, biaverage_oracle);
  report(6, "unitary dilation", 5.0, halmos);
  report(7, "correction bound", 0.0, correction_bound);
  report(8, "scalar membership", 60.0, scalar_membership);
  report(9, "bound under doubling", 0.0, doubling_bound);
  report(10, "Schur cb-norm", 0.0, cb_norms);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
