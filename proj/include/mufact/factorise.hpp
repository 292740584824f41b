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

// Gram matrices of unitary tuples and the mixed-unitary factorisations of
// delta_d (x) S_C they certify.
//
// Convention: the Gram matrix of (U_1, ..., U_k) is c_ij = tr_d(U_i^* U_j).
// Block-diagonal unitaries V_1 (+) ... (+) V_k realise tr_d(V_i V_j^*)
// instead, so the two functions that cross between tuples and ensembles
// take entrywise adjoints.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mufact/channels.hpp"
#include "mufact/norms.hpp"
#include "mufact/numkit.hpp"

namespace mufact::factorise {

struct UnitaryTuple {
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<ComplexMatrix> unitaries;
};

struct UnitaryTupleEnsemble {
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<double> weights;
  std::vector<UnitaryTuple> tuples;

  std::size_t size() const { return tuples.size(); }
};

/// Throws ShapeMismatch or NotUnitary (tolerance 1e-10).
void validate(const UnitaryTuple& t);
/// Also checks positive weights summing to 1 within weight_tol.
void validate(const UnitaryTupleEnsemble& e, double weight_tol = 1e-12);

/// c_ij = tr_d(U_i^* U_j). Throws NotUnitary.
ComplexMatrix gram_matrix(const UnitaryTuple& t);
/// sum_m p_m Gram(tuple_m).
ComplexMatrix gram_average(const UnitaryTupleEnsemble& e);

UnitaryTuple adjoint(const UnitaryTuple& t);

/// k independent Haar unitaries of size d.
UnitaryTuple sample_fkd(std::size_t d, std::size_t k, Seed seed);
/// `atoms` Haar tuples with Dirichlet(1, ..., 1) weights.
UnitaryTupleEnsemble sample_fkd_convex(std::size_t d, std::size_t k, std::size_t atoms,
                                       Seed seed);

/// U -> U (+) U on every tuple member. Gram matrices are unchanged.
UnitaryTupleEnsemble double_dimension(const UnitaryTupleEnsemble& e);

struct GramCertificate {
  UnitaryTupleEnsemble ensemble;
  ComplexMatrix achieved;
  ComplexMatrix target;
  double residual_fro = 0.0;
  double residual_max = 0.0;
};

GramCertificate make_certificate(UnitaryTupleEnsemble ensemble, ComplexMatrix target);

struct CertificateCheck {
  bool ok = false;
  double achieved_error = 0.0;  // |recomputed - stored| entrywise max
  double residual_error = 0.0;  // |recomputed residuals - stored|
  std::string message;
};

/// Recomputes everything from the tuples; never trusts stored matrices.
CertificateCheck verify_certificate(const GramCertificate& cert, double tol = 1e-12);

/// Ensemble on M_d (x) M_k of M d^4 block-diagonal unitaries
/// (+)_i W_l' V_i W_l, V_i = U_i^*, with weights p_m / d^4. It implements
/// delta_d (x) S_C for C = gram_average(e). Throws NotUnitary.
channels::MixedUnitaryEnsemble mu_ensemble_from_tuples(const UnitaryTupleEnsemble& e);

/// Reads the tuples back out of an ensemble implementing delta_d (x) S_C.
/// Verifies the channel on all basis elements, block-diagonality and
/// unitarity of diagonal blocks, and the Gram average, all within tol.
/// Throws NotAFactorisation, NotBlockDiagonal or NotUnitary.
UnitaryTupleEnsemble tuples_from_ensemble(const channels::MixedUnitaryEnsemble& e,
                                          const ComplexMatrix& c, std::size_t d,
                                          std::size_t k, double tol = 1e-9);

/// Largest off-diagonal block entry over an ensemble in the block layout.
double max_off_block(const channels::MixedUnitaryEnsemble& e, std::size_t d, std::size_t k);

/// W = [[X, C U], [-U D, X]] with C = (I - X X^*)^{1/2}, D = (I - X^* X)^{1/2}
/// and U the unitary polar factor of X. Both diagonal corners are X exactly.
/// Norms in (1, 1 + 1e-9] are rescaled to 1; larger ones throw NormTooLarge.
ComplexMatrix halmos_dilate(const ComplexMatrix& x);

struct CorrectionReport {
  ComplexMatrix c;
  ComplexMatrix c_tilde;
  ComplexMatrix c_hat;
  GramCertificate certificate;  // dimension 2d, achieved == c_hat
  double max_abs_delta = 0.0;   // max |c_ij - chat_ij|
  double epsilon_in = 0.0;
  bool bound_ok = false;        // max_abs_delta < 2 epsilon_in
  double max_diag_defect = 0.0; // max |1 - ctilde_ii|
  double cross_check_error = 0.0;  // vs d_biaverage(delta_compress(phi))
  std::optional<double> premise_lower_bound;  // heuristic ||delta_d (x) S_C - phi||
};

struct CorrectionOptions {
  bool premise_bound = true;
  norms::AscentOptions ascent{};
};

/// d is phi.n / k. Corners X_li of the ensemble unitaries give ctilde_ij =
/// sum_l t_l tr_d(X_li X_lj^*); dilating each corner to W_li gives chat_ij =
/// sum_l t_l tr_2d(W_li W_lj^*) together with its certificate. Throws
/// ShapeMismatch, NormTooLarge (a corner of norm above 1 + 1e-9, checked
/// before unitarity), NotUnitary, or NotAFactorisation when the two routes
/// to ctilde disagree by more than 1e-9.
CorrectionReport correction_pipeline(const ComplexMatrix& c,
                                     const channels::MixedUnitaryEnsemble& phi,
                                     double epsilon_in,
                                     const CorrectionOptions& opts = {});

struct SolverOptions {
  std::size_t atoms = 0;  // 0 selects k^2 + 1
  std::size_t restarts = 20;
  std::size_t max_iters = 500;
  double tol = 1e-10;
  Seed seed{0};
  /// Used as restart 0 when present (dimensions must match).
  std::optional<UnitaryTupleEnsemble> warm_start;
};

struct MembershipResult {
  GramCertificate certificate;
  std::vector<double> objective;  // f after each iteration of the best restart
  std::vector<double> restart_objectives;
  std::size_t best_restart = 0;
};

/// Alternating descent on f = ||C - sum_m p_m Gram(tuple_m)||_F^2 over
/// simplex weights and unitary atoms. Restarts run in parallel with seeds
/// derived from opts.seed; the lowest objective wins, ties to the lowest
/// index, so the result equals membership_solve_serial bit for bit.
MembershipResult membership_solve(const ComplexMatrix& c, std::size_t d,
                                  const SolverOptions& opts = {});
MembershipResult membership_solve_serial(const ComplexMatrix& c, std::size_t d,
                                         const SolverOptions& opts = {});

struct DistanceBound {
  GramCertificate certificate;
  norms::NormEstimate cb;  // of C - achieved
  double psd_split = 0.0;  // max diag P + max diag N for C - achieved = P - N
  double upper = 0.0;      // min(cb.upper, psd_split)
};

/// Certified upper bound on dist_cb(delta_d (x) S_C, MU(dk)) from the best
/// certificate found (and the warm start, if any).
DistanceBound dist_upper_bound(const ComplexMatrix& c, std::size_t d,
                               const SolverOptions& opts = {});

/// The bound for a given certificate.
DistanceBound bound_for_certificate(GramCertificate cert);

}  // namespace mufact::factorise
