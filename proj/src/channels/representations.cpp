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

#include <cmath>
#include <string>

#include "mufact/channels.hpp"
#include "mufact/kernels.hpp"

namespace mufact::channels {

namespace {

void require_square_dim(const ComplexMatrix& x, std::size_t n, const char* who) {
  if (x.rows() != n || x.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(who) + ": expected " + std::to_string(n) + "x" +
                    std::to_string(n) + ", got " + std::to_string(x.rows()) +
                    "x" + std::to_string(x.cols()));
  }
}

}  // namespace

BlockOperator BlockOperator::from_matrix(const ComplexMatrix& a, std::size_t d,
                                         std::size_t k) {
  require_square_dim(a, d * k, "BlockOperator");
  BlockOperator out{d, k, {}};
  out.blocks.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out.blocks.push_back(a.block(i * d, j * d, d, d));
  return out;
}

ComplexMatrix BlockOperator::to_matrix() const {
  if (blocks.size() != k * k) throw Error(ErrorKind::ShapeMismatch, "block grid size");
  ComplexMatrix out(d * k, d * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto& b = block(i, j);
      if (b.rows() != d || b.cols() != d) {
        throw Error(ErrorKind::ShapeMismatch, "block shape");
      }
      out.set_block(i * d, j * d, b);
    }
  return out;
}

ComplexMatrix LinearMap::operator()(const ComplexMatrix& x) const {
  require_square_dim(x, dim_in, "LinearMap input");
  return apply(x);
}

void validate(const MixedUnitaryEnsemble& e, double weight_tol) {
  if (e.n == 0) throw Error(ErrorKind::InvalidArgument, "ensemble dimension 0");
  if (e.weights.empty() || e.weights.size() != e.unitaries.size()) {
    throw Error(ErrorKind::ShapeMismatch, "ensemble weight/unitary count");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < e.weights.size(); ++l) {
    if (!(e.weights[l] > 0.0) || !std::isfinite(e.weights[l])) {
      throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(l) + " not positive");
    }
    total += e.weights[l];
    require_square_dim(e.unitaries[l], e.n, "ensemble member");
    const double res = unitarity_residual(e.unitaries[l]);
    if (res > 1e-10) {
      throw Error(ErrorKind::NotUnitary, "member " + std::to_string(l) +
                                             " unitarity residual " + std::to_string(res));
    }
  }
  if (std::abs(total - 1.0) > weight_tol) {
    throw Error(ErrorKind::InvalidArgument, "weights sum to " + std::to_string(total));
  }
}

bool is_correlation(const ComplexMatrix& c, double tol) {
  if (!c.is_square() || c.rows() == 0) return false;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (std::abs(c(i, i) - 1.0) > tol) return false;
  }
  if (hermitian_residual(c) > structural_tol(c)) return false;
  return min_eigenvalue(c) >= -structural_tol(c);
}

void require_correlation(const ComplexMatrix& c) {
  if (!is_correlation(c)) {
    throw Error(ErrorKind::InvalidArgument, "not a correlation matrix");
  }
}

ComplexMatrix schur_apply(const SchurSymbol& c, const ComplexMatrix& x) {
  return hadamard(c.matrix, x);
}

ComplexMatrix depolarize(const ComplexMatrix& x) {
  const cplx t = normalized_trace(x);
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) out(i, i) = t;
  return out;
}

ComplexMatrix apply_ensemble(const MixedUnitaryEnsemble& e, const ComplexMatrix& x) {
  require_square_dim(x, e.n, "apply_ensemble");
  return kernels::conjugation_sum(e.weights, e.unitaries, x);
}

ComplexMatrix apply_ensemble_serial(const MixedUnitaryEnsemble& e,
                                    const ComplexMatrix& x) {
  require_square_dim(x, e.n, "apply_ensemble");
  return kernels::serial::conjugation_sum(e.weights, e.unitaries, x);
}

LinearMap as_map(const KrausChannel& ch) {
  for (const auto& a : ch.kraus_ops) {
    if (a.rows() != ch.dim_out || a.cols() != ch.dim_in) {
      throw Error(ErrorKind::ShapeMismatch, "Kraus operator shape");
    }
  }
  return {ch.dim_in, ch.dim_out, [ch](const ComplexMatrix& x) {
            ComplexMatrix out(ch.dim_out, ch.dim_out);
            for (const auto& a : ch.kraus_ops) out += a * x * a.adjoint();
            return out;
          }};
}

LinearMap as_map(const MixedUnitaryEnsemble& e) {
  return {e.n, e.n, [e](const ComplexMatrix& x) { return apply_ensemble(e, x); }};
}

LinearMap as_map(const ChoiMatrix& c) {
  return {c.dim_in, c.dim_out, [c](const ComplexMatrix& x) {
            ComplexMatrix out(c.dim_out, c.dim_out);
            for (std::size_t i = 0; i < c.dim_in; ++i)
              for (std::size_t j = 0; j < c.dim_in; ++j)
                if (x(i, j) != cplx(0.0)) out.add_scaled(c.block(i, j), x(i, j));
            return out;
          }};
}

LinearMap schur_map(const SchurSymbol& c) {
  return {c.k(), c.k(), [c](const ComplexMatrix& x) { return schur_apply(c, x); }};
}

LinearMap lift_schur(const SchurSymbol& c, std::size_t d) {
  const std::size_t k = c.k();
  return {d * k, d * k, [c, d, k](const ComplexMatrix& x) {
            ComplexMatrix out(d * k, d * k);
            for (std::size_t i = 0; i < k; ++i)
              for (std::size_t j = 0; j < k; ++j) {
                cplx t = 0.0;
                for (std::size_t r = 0; r < d; ++r) t += x(i * d + r, j * d + r);
                t *= c.matrix(i, j) / static_cast<double>(d);
                for (std::size_t r = 0; r < d; ++r) out(i * d + r, j * d + r) = t;
              }
            return out;
          }};
}

LinearMap identity_map(std::size_t n) {
  return {n, n, [](const ComplexMatrix& x) { return x; }};
}

LinearMap depolarizing_map(std::size_t n) {
  return {n, n, [](const ComplexMatrix& x) { return depolarize(x); }};
}

LinearMap conjugation_map(const ComplexMatrix& v) {
  if (!v.is_square()) throw Error(ErrorKind::ShapeMismatch, "conjugation_map");
  return {v.rows(), v.rows(),
          [v](const ComplexMatrix& x) { return v * x * v.adjoint(); }};
}

LinearMap difference(LinearMap a, LinearMap b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw Error(ErrorKind::ShapeMismatch, "difference of maps with different shapes");
  }
  const std::size_t in = a.dim_in, out = a.dim_out;
  return {in, out, [a = std::move(a), b = std::move(b)](const ComplexMatrix& x) {
            return a(x) - b(x);
          }};
}

ChoiMatrix choi_of(const LinearMap& t) {
  ChoiMatrix c{t.dim_in, t.dim_out, ComplexMatrix(t.dim_in * t.dim_out, t.dim_in * t.dim_out)};
  for (std::size_t i = 0; i < t.dim_in; ++i)
    for (std::size_t j = 0; j < t.dim_in; ++j) {
      const ComplexMatrix img = t(ComplexMatrix::unit(t.dim_in, t.dim_in, i, j));
      if (img.rows() != t.dim_out || img.cols() != t.dim_out) {
        throw Error(ErrorKind::ShapeMismatch, "map output shape");
      }
      c.matrix.set_block(i * t.dim_out, j * t.dim_out, img);
    }
  return c;
}

KrausChannel kraus_from_choi(const ChoiMatrix& c) {
  const std::size_t m = c.dim_out;
  const std::size_t n = c.dim_in;
  const EigenSystem es = herm_eig(c.matrix);
  if (!es.values.empty() && es.values.back() < -structural_tol(c.matrix)) {
    throw Error(ErrorKind::NotPSD, "Choi matrix eigenvalue " + std::to_string(es.values.back()));
  }
  KrausChannel out{n, m, {}};
  for (std::size_t e = 0; e < es.values.size(); ++e) {
    if (es.values[e] <= 1e-10) break;
    const double s = std::sqrt(es.values[e]);
    // Choi = sum vec(K) vec(K)^*, vec(K)[i*m + r] = K(r, i).
    ComplexMatrix kraus(m, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < m; ++r) kraus(r, i) = s * es.vectors(i * m + r, e);
    out.kraus_ops.push_back(std::move(kraus));
  }
  return out;
}

ChannelReport verify_channel(const ChoiMatrix& c, double tol) {
  ChannelReport rep;
  const ComplexMatrix& m = c.matrix;
  if (hermitian_residual(m) > structural_tol(m)) {
    rep.min_choi_eigenvalue = -std::numeric_limits<double>::infinity();
  } else {
    rep.min_choi_eigenvalue = min_eigenvalue(m);
  }
  rep.cp = rep.min_choi_eigenvalue >= -tol;

  double tp2 = 0.0;
  ComplexMatrix image_of_identity(c.dim_out, c.dim_out);
  for (std::size_t i = 0; i < c.dim_in; ++i)
    for (std::size_t j = 0; j < c.dim_in; ++j) {
      const ComplexMatrix b = c.block(i, j);
      tp2 += std::norm(b.trace() - (i == j ? 1.0 : 0.0));
      if (i == j) image_of_identity += b;
    }
  rep.tp_residual = std::sqrt(tp2);
  rep.tp = rep.tp_residual <= tol;
  rep.unital_residual =
      fro_norm(image_of_identity - ComplexMatrix::identity(c.dim_out));
  rep.unital = rep.unital_residual <= tol;
  return rep;
}

ChannelReport verify_channel(const LinearMap& t, double tol) {
  return verify_channel(choi_of(t), tol);
}

ChannelReport verify_channel(const KrausChannel& ch, double tol) {
  ChannelReport rep;
  ComplexMatrix tp(ch.dim_in, ch.dim_in);
  ComplexMatrix un(ch.dim_out, ch.dim_out);
  for (const auto& a : ch.kraus_ops) {
    tp += a.adjoint() * a;
    un += a * a.adjoint();
  }
  rep.cp = true;
  rep.min_choi_eigenvalue = 0.0;
  rep.tp_residual = fro_norm(tp - ComplexMatrix::identity(ch.dim_in));
  rep.unital_residual = fro_norm(un - ComplexMatrix::identity(ch.dim_out));
  rep.tp = rep.tp_residual <= tol;
  rep.unital = rep.unital_residual <= tol;
  return rep;
}

}  // namespace mufact::channels
