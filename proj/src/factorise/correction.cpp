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
#include <string>

#include "mufact/factorise.hpp"
#include "mufact/kernels.hpp"

namespace mufact::factorise {

ComplexMatrix halmos_dilate(const ComplexMatrix& x_in) {
  if (!x_in.is_square()) throw Error(ErrorKind::ShapeMismatch, "halmos_dilate: not square");
  const std::size_t d = x_in.rows();
  // One SVD X = L S R^* gives every factor of the formula in a shared basis:
  // U = L R^*, D = R (I - S^2)^{1/2} R^*, C = L (I - S^2)^{1/2} L^*, hence
  // C U = U D = L (I - S^2)^{1/2} R^*.
  SvdResult s = svd(x_in);
  const double norm = s.values.empty() ? 0.0 : s.values.front();
  if (norm > 1.0 + 1e-9) {
    throw Error(ErrorKind::NormTooLarge, "halmos_dilate: ||X|| = " + std::to_string(norm));
  }
  ComplexMatrix x = x_in;
  if (norm > 1.0) {
    x *= 1.0 / norm;
    for (auto& v : s.values) v /= norm;
  }

  ComplexMatrix off(d, d);  // L (I - S^2)^{1/2} R^*
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cplx acc = 0.0;
      for (std::size_t e = 0; e < d; ++e) {
        const double comp = std::sqrt(std::max(0.0, 1.0 - s.values[e] * s.values[e]));
        acc += s.left(r, e) * comp * std::conj(s.right(c, e));
      }
      off(r, c) = acc;
    }

  ComplexMatrix w(2 * d, 2 * d);
  w.set_block(0, 0, x);
  w.set_block(0, d, off);
  w.set_block(d, 0, -off);
  w.set_block(d, d, x);
  return w;
}

CorrectionReport correction_pipeline(const ComplexMatrix& c,
                                     const channels::MixedUnitaryEnsemble& phi,
                                     double epsilon_in, const CorrectionOptions& opts) {
  if (!c.is_square() || c.rows() == 0) throw Error(ErrorKind::ShapeMismatch, "C not square");
  const std::size_t k = c.rows();
  if (phi.n % k != 0) {
    throw Error(ErrorKind::ShapeMismatch, "ensemble dimension " + std::to_string(phi.n) +
                                              " is not a multiple of k = " + std::to_string(k));
  }
  if (!(epsilon_in > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon_in must be > 0");
  channels::require_correlation(c);
  for (const auto& u : phi.unitaries) {
    if (u.rows() != phi.n || u.cols() != phi.n) {
      throw Error(ErrorKind::ShapeMismatch, "ensemble member is not n x n");
    }
  }
  const std::size_t d = phi.n / k;
  const std::size_t terms = phi.size();
  const double inv_d = 1.0 / static_cast<double>(d);

  // Corners X_li and their dilations W_li, one term per task.
  std::vector<std::vector<ComplexMatrix>> corners(terms), dilations(terms);
  kernels::parallel_for(terms, [&](std::size_t l) {
    for (std::size_t i = 0; i < k; ++i) {
      corners[l].push_back(phi.unitaries[l].block(i * d, i * d, d, d));
      dilations[l].push_back(halmos_dilate(corners[l].back()));
    }
  });
  // Corners of a corrupt ensemble surface above as NormTooLarge; anything
  // else wrong with it is reported here.
  channels::validate(phi);

  CorrectionReport rep;
  rep.c = c;
  rep.epsilon_in = epsilon_in;
  rep.c_tilde = ComplexMatrix(k, k);
  for (std::size_t l = 0; l < terms; ++l)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        // tr_d(X_i X_j^*) = Tr(X_j^* X_i) / d
        rep.c_tilde(i, j) += phi.weights[l] * inv_d * hs_inner(corners[l][j], corners[l][i]);
      }

  const ComplexMatrix biaverage =
      channels::d_biaverage(channels::delta_compress(channels::as_map(phi), d, k)).matrix;
  rep.cross_check_error = max_abs(biaverage - rep.c_tilde);
  if (rep.cross_check_error > 1e-9) {
    throw Error(ErrorKind::NotAFactorisation,
                "corner average and D-biaverage disagree by " +
                    std::to_string(rep.cross_check_error));
  }
  for (std::size_t i = 0; i < k; ++i) {
    rep.max_diag_defect = std::max(rep.max_diag_defect, std::abs(1.0 - rep.c_tilde(i, i)));
  }

  // Certificate tuples hold W_li^*, so their Gram matrices are tr(W_i W_j^*).
  UnitaryTupleEnsemble cert{2 * d, k, phi.weights, {}};
  for (std::size_t l = 0; l < terms; ++l) {
    UnitaryTuple t{2 * d, k, {}};
    for (std::size_t i = 0; i < k; ++i) t.unitaries.push_back(dilations[l][i].adjoint());
    cert.tuples.push_back(std::move(t));
  }
  rep.certificate = make_certificate(std::move(cert), c);
  rep.c_hat = rep.certificate.achieved;
  rep.max_abs_delta = rep.certificate.residual_max;
  rep.bound_ok = rep.max_abs_delta < 2.0 * epsilon_in;

  if (opts.premise_bound) {
    auto diff = channels::difference(channels::lift_schur({c}, d), channels::as_map(phi));
    rep.premise_lower_bound =
        norms::superop_norm_lb(norms::BasisActionTable::from_map(diff), opts.ascent);
  }
  return rep;
}

}  // namespace mufact::factorise
