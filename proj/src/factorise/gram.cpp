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
#include <random>
#include <string>

#include "mufact/factorise.hpp"

namespace mufact::factorise {

void validate(const UnitaryTuple& t) {
  if (t.d == 0 || t.k == 0) throw Error(ErrorKind::InvalidArgument, "tuple with d = 0 or k = 0");
  if (t.unitaries.size() != t.k) {
    throw Error(ErrorKind::ShapeMismatch, "tuple holds " + std::to_string(t.unitaries.size()) +
                                              " matrices, expected " + std::to_string(t.k));
  }
  for (std::size_t i = 0; i < t.k; ++i) {
    const auto& u = t.unitaries[i];
    if (u.rows() != t.d || u.cols() != t.d) {
      throw Error(ErrorKind::ShapeMismatch, "tuple member " + std::to_string(i) + " shape");
    }
    const double res = unitarity_residual(u);
    if (res > 1e-10) {
      throw Error(ErrorKind::NotUnitary, "tuple member " + std::to_string(i) +
                                             " unitarity residual " + std::to_string(res));
    }
  }
}

void validate(const UnitaryTupleEnsemble& e, double weight_tol) {
  if (e.tuples.empty() || e.weights.size() != e.tuples.size()) {
    throw Error(ErrorKind::ShapeMismatch, "tuple ensemble weight/tuple count");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < e.size(); ++m) {
    if (!(e.weights[m] > 0.0) || !std::isfinite(e.weights[m])) {
      throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(m) + " not positive");
    }
    total += e.weights[m];
    if (e.tuples[m].d != e.d || e.tuples[m].k != e.k) {
      throw Error(ErrorKind::ShapeMismatch, "tuple " + std::to_string(m) + " dimensions");
    }
    validate(e.tuples[m]);
  }
  if (std::abs(total - 1.0) > weight_tol) {
    throw Error(ErrorKind::InvalidArgument, "weights sum to " + std::to_string(total));
  }
}

ComplexMatrix gram_matrix(const UnitaryTuple& t) {
  validate(t);
  ComplexMatrix g(t.k, t.k);
  const double inv_d = 1.0 / static_cast<double>(t.d);
  for (std::size_t i = 0; i < t.k; ++i) {
    g(i, i) = 1.0;
    for (std::size_t j = i + 1; j < t.k; ++j) {
      g(i, j) = hs_inner(t.unitaries[i], t.unitaries[j]) * inv_d;
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

ComplexMatrix gram_average(const UnitaryTupleEnsemble& e) {
  validate(e, 1e-9);
  ComplexMatrix out(e.k, e.k);
  for (std::size_t m = 0; m < e.size(); ++m) out.add_scaled(gram_matrix(e.tuples[m]), e.weights[m]);
  return out;
}

UnitaryTuple adjoint(const UnitaryTuple& t) {
  UnitaryTuple out{t.d, t.k, {}};
  out.unitaries.reserve(t.k);
  for (const auto& u : t.unitaries) out.unitaries.push_back(u.adjoint());
  return out;
}

UnitaryTuple sample_fkd(std::size_t d, std::size_t k, Seed seed) {
  if (d == 0 || k == 0) throw Error(ErrorKind::InvalidArgument, "sample_fkd: d = 0 or k = 0");
  UnitaryTuple t{d, k, {}};
  t.unitaries.reserve(k);
  for (std::size_t i = 0; i < k; ++i) t.unitaries.push_back(random_haar_unitary(d, seed.derive(i)));
  return t;
}

UnitaryTupleEnsemble sample_fkd_convex(std::size_t d, std::size_t k, std::size_t atoms,
                                       Seed seed) {
  if (atoms == 0) throw Error(ErrorKind::InvalidArgument, "sample_fkd_convex: no atoms");
  UnitaryTupleEnsemble e{d, k, {}, {}};
  std::mt19937_64 gen(seed.derive(0).value);
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (std::size_t m = 0; m < atoms; ++m) {
    // Guard against a (vanishingly unlikely) zero draw.
    const double w = std::max(expo(gen), 1e-12);
    e.weights.push_back(w);
    total += w;
    e.tuples.push_back(sample_fkd(d, k, seed.derive(m + 1)));
  }
  for (auto& w : e.weights) w /= total;
  return e;
}

UnitaryTupleEnsemble double_dimension(const UnitaryTupleEnsemble& e) {
  UnitaryTupleEnsemble out{2 * e.d, e.k, e.weights, {}};
  out.tuples.reserve(e.size());
  for (const auto& t : e.tuples) {
    UnitaryTuple dt{2 * t.d, t.k, {}};
    for (const auto& u : t.unitaries) {
      const ComplexMatrix pair[2] = {u, u};
      dt.unitaries.push_back(direct_sum(pair));
    }
    out.tuples.push_back(std::move(dt));
  }
  return out;
}

GramCertificate make_certificate(UnitaryTupleEnsemble ensemble, ComplexMatrix target) {
  GramCertificate cert{std::move(ensemble), ComplexMatrix(1, 1), std::move(target), 0.0, 0.0};
  cert.achieved = gram_average(cert.ensemble);
  if (cert.target.rows() != cert.ensemble.k || cert.target.cols() != cert.ensemble.k) {
    throw Error(ErrorKind::ShapeMismatch, "certificate target is not k x k");
  }
  const ComplexMatrix r = cert.target - cert.achieved;
  cert.residual_fro = fro_norm(r);
  cert.residual_max = max_abs(r);
  return cert;
}

CertificateCheck verify_certificate(const GramCertificate& cert, double tol) {
  CertificateCheck out;
  try {
    validate(cert.ensemble, 1e-9);
  } catch (const Error& e) {
    out.message = e.what();
    return out;
  }
  const ComplexMatrix achieved = gram_average(cert.ensemble);
  if (cert.achieved.rows() != achieved.rows() || cert.achieved.cols() != achieved.cols() ||
      cert.target.rows() != achieved.rows() || cert.target.cols() != achieved.cols()) {
    out.message = "stored matrices have the wrong shape";
    return out;
  }
  out.achieved_error = max_abs(achieved - cert.achieved);
  const ComplexMatrix r = cert.target - achieved;
  out.residual_error = std::max(std::abs(fro_norm(r) - cert.residual_fro),
                                std::abs(max_abs(r) - cert.residual_max));
  for (const auto& t : cert.ensemble.tuples) {
    if (!channels::is_correlation(gram_matrix(t))) {
      out.message = "a tuple Gram matrix is not a correlation matrix";
      return out;
    }
  }
  out.ok = out.achieved_error <= tol && out.residual_error <= tol;
  if (!out.ok) out.message = "stored values do not match the recomputation";
  return out;
}

}  // namespace mufact::factorise
