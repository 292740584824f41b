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

// Quantum channels on M_k and on M_d (x) M_k.
//
// Block layout: an operator on M_d (x) M_k is stored as a dk x dk matrix
// made of a k x k grid of d x d blocks, flattened index i*d + r for coarse
// i in [0,k) and fine r in [0,d). In Kronecker terms the flat matrix is
// sum_{i,j} E_{i,j} (x) A_{i,j} = kron(coarse, fine), i.e. M_k(M_d).
// Ensemble unitaries on dk use the same layout, so I_d (x) B is kron(B, I_d)
// and the depolariser on the fine factor acts block by block.
//
// Channels come in concrete representations (Kraus list, Choi grid,
// mixed-unitary ensemble, Schur symbol, block formula). Conversions between
// them are explicit function calls; LinearMap is the common "apply" view.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mufact/numkit.hpp"

namespace mufact::channels {

struct KrausChannel {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::vector<ComplexMatrix> kraus_ops;  // each dim_out x dim_in
};

/// Choi matrix (T(E_{i,j}))_{i,j}: a dim_in x dim_in grid of dim_out x
/// dim_out blocks.
struct ChoiMatrix {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  ComplexMatrix matrix;

  ComplexMatrix block(std::size_t i, std::size_t j) const {
    return matrix.block(i * dim_out, j * dim_out, dim_out, dim_out);
  }
};

/// X -> sum_l weights[l] U_l X U_l^*
struct MixedUnitaryEnsemble {
  std::size_t n = 0;
  std::vector<double> weights;
  std::vector<ComplexMatrix> unitaries;

  std::size_t size() const { return weights.size(); }
};

/// A = sum_{i,j} A_{i,j} (x) E_{i,j} held as a k x k grid of d x d blocks.
struct BlockOperator {
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<ComplexMatrix> blocks;  // row-major over (i, j)

  static BlockOperator from_matrix(const ComplexMatrix& a, std::size_t d,
                                   std::size_t k);
  ComplexMatrix to_matrix() const;
  const ComplexMatrix& block(std::size_t i, std::size_t j) const {
    return blocks[i * k + j];
  }
  ComplexMatrix& block(std::size_t i, std::size_t j) { return blocks[i * k + j]; }
};

struct SchurSymbol {
  ComplexMatrix matrix;

  std::size_t k() const { return matrix.rows(); }
};

struct LinearMap {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::function<ComplexMatrix(const ComplexMatrix&)> apply;

  ComplexMatrix operator()(const ComplexMatrix& x) const;
};

struct ChannelReport {
  bool cp = false;
  bool tp = false;
  bool unital = false;
  double min_choi_eigenvalue = 0.0;
  double tp_residual = 0.0;
  double unital_residual = 0.0;

  bool all() const { return cp && tp && unital; }
};

/// Throws InvalidArgument on non-positive weights or a weight sum off by more
/// than `weight_tol`, NotUnitary on a non-unitary member, ShapeMismatch on
/// dimension disagreement.
void validate(const MixedUnitaryEnsemble& e, double weight_tol = 1e-12);

/// PSD within the structural tolerance and unit diagonal within 1e-10.
bool is_correlation(const ComplexMatrix& c, double tol = 1e-10);
void require_correlation(const ComplexMatrix& c);

ComplexMatrix schur_apply(const SchurSymbol& c, const ComplexMatrix& x);

/// W_{a,b} = S^a D^b ordered lexicographically by (a, b), with S the cyclic
/// shift e_j -> e_{j+1 mod d} and D = diag(w, w^2, ..., w^d), w = e^{2 pi i/d}.
std::vector<ComplexMatrix> weyl_unitaries(std::size_t d);
/// The d^2 Weyl unitaries with weight 1/d^2 each.
MixedUnitaryEnsemble depolarizing_ensemble(std::size_t d);
/// tr_d(X) I_d, the direct formula.
ComplexMatrix depolarize(const ComplexMatrix& x);

ComplexMatrix apply_ensemble(const MixedUnitaryEnsemble& e, const ComplexMatrix& x);
/// Serial reference of apply_ensemble.
ComplexMatrix apply_ensemble_serial(const MixedUnitaryEnsemble& e,
                                    const ComplexMatrix& x);

LinearMap as_map(const KrausChannel& ch);
LinearMap as_map(const MixedUnitaryEnsemble& e);
LinearMap as_map(const ChoiMatrix& c);
LinearMap schur_map(const SchurSymbol& c);
/// delta_d (x) S_C in the block layout: block (i,j) -> c_{ij} tr_d(A_ij) I_d.
LinearMap lift_schur(const SchurSymbol& c, std::size_t d);
LinearMap identity_map(std::size_t n);
LinearMap depolarizing_map(std::size_t n);
LinearMap conjugation_map(const ComplexMatrix& v);
/// X -> a(X) - b(X)
LinearMap difference(LinearMap a, LinearMap b);

ChoiMatrix choi_of(const LinearMap& t);
/// Kraus operators from the eigendecomposition of the Choi matrix, keeping
/// eigenvalues above 1e-10. Throws NotPSD.
KrausChannel kraus_from_choi(const ChoiMatrix& c);

ChannelReport verify_channel(const ChoiMatrix& c, double tol = 1e-9);
ChannelReport verify_channel(const LinearMap& t, double tol = 1e-9);
ChannelReport verify_channel(const KrausChannel& ch, double tol = 1e-9);

/// I_d (x) B in the block layout.
ComplexMatrix embed_identity(const ComplexMatrix& b, std::size_t d);
/// (tr_d (x) id)(A): the k x k matrix of normalised block traces.
ComplexMatrix block_traces(const ComplexMatrix& a, std::size_t d, std::size_t k);
/// Delta = delta_d (x) id applied to A.
ComplexMatrix delta_apply(const ComplexMatrix& a, std::size_t d, std::size_t k);
/// Delta as a mixed-unitary ensemble: I_k (x) W_{a,b} with weights 1/d^2.
MixedUnitaryEnsemble delta_ensemble(std::size_t d, std::size_t k);
/// outer o inner as an ensemble of products (outer index major).
MixedUnitaryEnsemble compose(const MixedUnitaryEnsemble& outer,
                             const MixedUnitaryEnsemble& inner);

struct DeltaCompression {
  ChoiMatrix channel;                              // T on M_k
  std::optional<MixedUnitaryEnsemble> ensemble;    // for delta_d (x) T
};

/// T(B) = (tr_d (x) id)(Delta o Phi o Delta (I_d (x) B)).
ChoiMatrix delta_compress(const LinearMap& phi, std::size_t d, std::size_t k);
/// As above; additionally returns Delta o Phi o Delta as an ensemble of size
/// d^2 * |Phi| * d^2.
DeltaCompression delta_compress(const MixedUnitaryEnsemble& phi, std::size_t d,
                                std::size_t k);

/// Schur symbol of the two-sided average of T over diagonal unitaries:
/// b_{ij} = [T(E_ij)]_{ij}. Throws NotCP when the Choi matrix is not PSD.
SchurSymbol d_biaverage(const ChoiMatrix& t);
SchurSymbol d_biaverage(const LinearMap& t);

/// The same symbol computed by literally averaging D1 T(D1 X D2) D2 over all
/// 2^k x 2^k pairs of diagonal sign matrices. Exponential; throws
/// DimensionTooLarge for k > max_k.
SchurSymbol biaverage_pm_oracle(const LinearMap& t, std::size_t max_k = 8);

}  // namespace mufact::channels
