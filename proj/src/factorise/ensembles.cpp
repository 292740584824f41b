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
#include <string>

#include "mufact/factorise.hpp"

namespace mufact::factorise {

channels::MixedUnitaryEnsemble mu_ensemble_from_tuples(const UnitaryTupleEnsemble& e) {
  validate(e, 1e-9);
  const std::size_t d = e.d, k = e.k;
  const auto weyl = channels::weyl_unitaries(d);
  const double d4 = static_cast<double>(d * d * d * d);

  channels::MixedUnitaryEnsemble out{d * k, {}, {}};
  out.weights.reserve(e.size() * weyl.size() * weyl.size());
  out.unitaries.reserve(e.size() * weyl.size() * weyl.size());
  std::vector<ComplexMatrix> blocks(k);
  for (std::size_t m = 0; m < e.size(); ++m) {
    const UnitaryTuple v = adjoint(e.tuples[m]);
    for (const auto& wl : weyl)
      for (const auto& wl2 : weyl) {
        for (std::size_t i = 0; i < k; ++i) blocks[i] = wl2 * v.unitaries[i] * wl;
        out.weights.push_back(e.weights[m] / d4);
        out.unitaries.push_back(direct_sum(blocks));
      }
  }
  return out;
}

double max_off_block(const channels::MixedUnitaryEnsemble& e, std::size_t d, std::size_t k) {
  double worst = 0.0;
  for (const auto& u : e.unitaries)
    for (std::size_t r = 0; r < d * k; ++r)
      for (std::size_t c = 0; c < d * k; ++c)
        if (r / d != c / d) worst = std::max(worst, std::abs(u(r, c)));
  return worst;
}

UnitaryTupleEnsemble tuples_from_ensemble(const channels::MixedUnitaryEnsemble& e,
                                          const ComplexMatrix& c, std::size_t d,
                                          std::size_t k, double tol) {
  if (e.n != d * k) throw Error(ErrorKind::ShapeMismatch, "ensemble is not on dimension d*k");
  if (c.rows() != k || c.cols() != k) throw Error(ErrorKind::ShapeMismatch, "C is not k x k");
  channels::validate(e, 1e-9);

  // The channel itself must be delta_d (x) S_C.
  const ComplexMatrix have = channels::choi_of(channels::as_map(e)).matrix;
  const ComplexMatrix want = channels::choi_of(channels::lift_schur({c}, d)).matrix;
  const double mismatch = max_abs(have - want);
  if (mismatch > tol) {
    throw Error(ErrorKind::NotAFactorisation,
                "ensemble differs from delta_d (x) S_C by " + std::to_string(mismatch));
  }

  const double off = max_off_block(e, d, k);
  if (off > tol) {
    throw Error(ErrorKind::NotBlockDiagonal, "off-diagonal block entry " + std::to_string(off));
  }

  UnitaryTupleEnsemble out{d, k, e.weights, {}};
  out.tuples.reserve(e.size());
  for (std::size_t l = 0; l < e.size(); ++l) {
    UnitaryTuple t{d, k, {}};
    for (std::size_t i = 0; i < k; ++i) {
      ComplexMatrix v = e.unitaries[l].block(i * d, i * d, d, d);
      const double res = unitarity_residual(v);
      if (res > tol) {
        throw Error(ErrorKind::NotUnitary, "diagonal block (" + std::to_string(l) + ", " +
                                               std::to_string(i) + ") residual " +
                                               std::to_string(res));
      }
      t.unitaries.push_back(v.adjoint());
    }
    out.tuples.push_back(std::move(t));
  }

  const double gram_err = max_abs(gram_average(out) - c);
  if (gram_err > tol) {
    throw Error(ErrorKind::NotAFactorisation,
                "recovered Gram average differs from C by " + std::to_string(gram_err));
  }
  return out;
}

}  // namespace mufact::factorise
