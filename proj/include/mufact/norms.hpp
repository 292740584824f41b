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

// Norms of Schur multipliers and lower bounds for operator norms of
// superoperators.
//
// The completely bounded norm of X -> A o X is the least t for which
//
//     [ R   A ]
//     [ A*  S ]  >= 0   with  diag(R), diag(S) <= t,
//
// which is Haagerup's factorisation a_ij = <x_i, y_j>, ||x_i||, ||y_j|| <= sqrt(t)
// written as a semidefinite feasibility problem (Paulsen, Completely Bounded
// Maps and Operator Algebras, ch. 8).

#pragma once

#include <string>
#include <vector>

#include "mufact/channels.hpp"
#include "mufact/numkit.hpp"

namespace mufact::norms {

struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
};

/// max_i y_ii, which is both the norm and the cb-norm of S_Y for PSD Y.
/// Throws NotPSD.
double schur_norm_psd(const ComplexMatrix& y);

struct CbNormOptions {
  int scaling_iters = 5000;
  int bisection_depth = 20;
  int projection_budget = 10000;
  double feasibility_tol = 1e-8;
};

/// One feasibility test made during bisection.
struct BisectionStep {
  double t = 0.0;
  bool feasible = false;
  double gap = 0.0;  // certified shift: the constraint iterate plus gap * I is PSD
  int iterations = 0;
};

struct CbNormResult {
  NormEstimate estimate;
  std::vector<BisectionStep> trace;
};

/// Bisection on t over [0, k max|a_ij|] with Dykstra projections between the
/// PSD cone and the constraint set at level t. `upper` is certified: a
/// constraint iterate Y with Y + g I PSD is a feasible point at level t + g.
/// `lower` is the largest level declared infeasible (stagnation or budget),
/// which is a heuristic: Dykstra converges slowly close to the optimum.
CbNormResult schur_cb_norm_bisection(const ComplexMatrix& a, const CbNormOptions& opts = {});

/// Alternating maximisation of ||D_alpha A D_beta||_1 over positive unit
/// vectors alpha, beta. Every iterate certifies both bounds. The trace norm
/// is ||S_A(alpha beta^T)||_1 with ||alpha beta^T||_1 = 1, and S_A has the
/// same norm on the trace class as on M_k. With
/// D_alpha A D_beta = U S V^* the matrix
///
///     [ D_alpha^-1 U S U^* D_alpha^-1   A                              ]
///     [ A^*                            D_beta^-1 V S V^* D_beta^-1    ]
///
/// is PSD, so its largest diagonal entry bounds the cb-norm from above. At a
/// fixed point the two bounds coincide.
NormEstimate schur_cb_norm_scaling(const ComplexMatrix& a, const CbNormOptions& opts = {});

/// Diagonal scaling first, tightened by bisection when its bracket is wider
/// than 1e-4 * upper. Throws NoConvergence if the bracket stays wider.
NormEstimate schur_cb_norm(const ComplexMatrix& a, const CbNormOptions& opts = {});

/// Images L(E_ab) of the matrix units, indexed a * n + b.
struct BasisActionTable {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<ComplexMatrix> images;

  static BasisActionTable from_map(const channels::LinearMap& map);
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

struct AscentOptions {
  std::size_t starts = 8;  // start 0 is the identity, the rest are seeded Haar
  std::size_t max_iters = 200;
  double tol = 1e-12;
  Seed seed{0};
};

/// Lower bound on sup_{||X|| <= 1} ||L(X)|| by alternating maximisation of
/// Re u* L(X) v over unitary X and unit vectors u, v. Each step cannot
/// decrease the value, and the value returned is attained at a unitary X.
double superop_norm_lb(const BasisActionTable& table, const AscentOptions& opts = {});
double superop_norm_lb_serial(const BasisActionTable& table, const AscentOptions& opts = {});

}  // namespace mufact::norms
