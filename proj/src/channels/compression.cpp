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

#include <string>

#include "mufact/channels.hpp"

namespace mufact::channels {

ComplexMatrix embed_identity(const ComplexMatrix& b, std::size_t d) {
  return kron(b, ComplexMatrix::identity(d));
}

ComplexMatrix block_traces(const ComplexMatrix& a, std::size_t d, std::size_t k) {
  if (a.rows() != d * k || a.cols() != d * k) {
    throw Error(ErrorKind::ShapeMismatch, "block_traces: operand is not dk x dk");
  }
  ComplexMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      cplx t = 0.0;
      for (std::size_t r = 0; r < d; ++r) t += a(i * d + r, j * d + r);
      out(i, j) = t / static_cast<double>(d);
    }
  return out;
}

ComplexMatrix delta_apply(const ComplexMatrix& a, std::size_t d, std::size_t k) {
  return embed_identity(block_traces(a, d, k), d);
}

MixedUnitaryEnsemble delta_ensemble(std::size_t d, std::size_t k) {
  MixedUnitaryEnsemble weyl = depolarizing_ensemble(d);
  const ComplexMatrix ik = ComplexMatrix::identity(k);
  MixedUnitaryEnsemble out{d * k, weyl.weights, {}};
  out.unitaries.reserve(weyl.unitaries.size());
  for (const auto& w : weyl.unitaries) out.unitaries.push_back(kron(ik, w));
  return out;
}

MixedUnitaryEnsemble compose(const MixedUnitaryEnsemble& outer,
                             const MixedUnitaryEnsemble& inner) {
  if (outer.n != inner.n) throw Error(ErrorKind::ShapeMismatch, "compose dimensions");
  MixedUnitaryEnsemble out{outer.n, {}, {}};
  out.weights.reserve(outer.size() * inner.size());
  out.unitaries.reserve(outer.size() * inner.size());
  for (std::size_t a = 0; a < outer.size(); ++a)
    for (std::size_t b = 0; b < inner.size(); ++b) {
      out.weights.push_back(outer.weights[a] * inner.weights[b]);
      out.unitaries.push_back(outer.unitaries[a] * inner.unitaries[b]);
    }
  return out;
}

ChoiMatrix delta_compress(const LinearMap& phi, std::size_t d, std::size_t k) {
  if (phi.dim_in != d * k || phi.dim_out != d * k) {
    throw Error(ErrorKind::ShapeMismatch,
                "delta_compress: map is not on dimension d*k = " + std::to_string(d * k));
  }
  ChoiMatrix t{k, k, ComplexMatrix(k * k, k * k)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const ComplexMatrix lifted = delta_apply(embed_identity(ComplexMatrix::unit(k, k, i, j), d), d, k);
      const ComplexMatrix image = delta_apply(phi(lifted), d, k);
      t.matrix.set_block(i * k, j * k, block_traces(image, d, k));
    }
  return t;
}

DeltaCompression delta_compress(const MixedUnitaryEnsemble& phi, std::size_t d,
                                std::size_t k) {
  if (phi.n != d * k) {
    throw Error(ErrorKind::ShapeMismatch,
                "delta_compress: ensemble is not on dimension d*k = " + std::to_string(d * k));
  }
  DeltaCompression out{delta_compress(as_map(phi), d, k), std::nullopt};
  const MixedUnitaryEnsemble delta = delta_ensemble(d, k);
  out.ensemble = compose(compose(delta, phi), delta);
  return out;
}

SchurSymbol d_biaverage(const ChoiMatrix& t) {
  if (t.dim_in != t.dim_out) {
    throw Error(ErrorKind::ShapeMismatch, "d_biaverage needs a map M_k -> M_k");
  }
  const ChannelReport rep = verify_channel(t);
  if (!rep.cp) {
    throw Error(ErrorKind::NotCP,
                "Choi minimum eigenvalue " + std::to_string(rep.min_choi_eigenvalue));
  }
  const std::size_t k = t.dim_in;
  SchurSymbol b{ComplexMatrix(k, k)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) b.matrix(i, j) = t.matrix(i * k + i, j * k + j);
  return b;
}

SchurSymbol d_biaverage(const LinearMap& t) { return d_biaverage(choi_of(t)); }

SchurSymbol biaverage_pm_oracle(const LinearMap& t, std::size_t max_k) {
  const std::size_t k = t.dim_in;
  if (t.dim_out != k) throw Error(ErrorKind::ShapeMismatch, "oracle needs M_k -> M_k");
  if (k > max_k || k >= 31) {
    throw Error(ErrorKind::DimensionTooLarge,
                "k = " + std::to_string(k) + " exceeds " + std::to_string(max_k));
  }
  const std::size_t patterns = std::size_t{1} << k;
  std::vector<ComplexMatrix> signs;
  signs.reserve(patterns);
  for (std::size_t s = 0; s < patterns; ++s) {
    ComplexMatrix dm(k, k);
    for (std::size_t i = 0; i < k; ++i) dm(i, i) = (s >> i) & 1 ? -1.0 : 1.0;
    signs.push_back(std::move(dm));
  }
  const double norm = 1.0 / static_cast<double>(patterns * patterns);
  SchurSymbol out{ComplexMatrix(k, k)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const ComplexMatrix x = ComplexMatrix::unit(k, k, i, j);
      ComplexMatrix avg(k, k);
      for (const auto& d1 : signs)
        for (const auto& d2 : signs) avg += d1 * t(d1 * x * d2) * d2;
      avg *= norm;
      out.matrix(i, j) = avg(i, j);
    }
  return out;
}

}  // namespace mufact::channels
