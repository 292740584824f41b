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
#include <limits>
#include <string>

#include "mufact/kernels.hpp"
#include "mufact/numkit.hpp"

namespace mufact {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotAFactorisation: return "NotAFactorisation";
    case ErrorKind::NotBlockDiagonal: return "NotBlockDiagonal";
    case ErrorKind::NormTooLarge: return "NormTooLarge";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::Malformed: return "Malformed";
  }
  return "Unknown";
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::ShapeMismatch,
                "entry count " + std::to_string(data_.size()) +
                    " does not match " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  if (!all_finite()) throw Error(ErrorKind::NonFinite, "matrix entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<cplx> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw Error(ErrorKind::ShapeMismatch, "ragged row list");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::unit(std::size_t rows, std::size_t cols,
                                  std::size_t i, std::size_t j) {
  ComplexMatrix m(rows, cols);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0,
                                   std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw Error(ErrorKind::ShapeMismatch, "block out of range");
  }
  ComplexMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0,
                              const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw Error(ErrorKind::ShapeMismatch, "set_block out of range");
  }
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

void ComplexMatrix::add_scaled(const ComplexMatrix& o, cplx s) {
  require_same_shape(*this, o, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a) {
  a *= -1.0;
  return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kernels::matmul(a, b);
}

ComplexMatrix operator*(cplx s, ComplexMatrix a) {
  a *= s;
  return a;
}

ComplexMatrix operator*(ComplexMatrix a, cplx s) {
  a *= s;
  return a;
}

double fro_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

cplx normalized_trace(const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "normalized_trace needs a square matrix");
  }
  return a.trace() / static_cast<double>(a.rows());
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  cplx s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) s += std::conj(ea[i]) * eb[i];
  return s;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard");
  ComplexMatrix out = a;
  auto eo = out.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < eo.size(); ++i) eo[i] *= eb[i];
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx(0.0)) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
          out(i * b.rows() + r, j * b.cols() + c) = s * b(r, c);
    }
  return out;
}

ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out(rows, cols);
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

double hermitian_residual(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "not square");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

double unitarity_residual(const ComplexMatrix& u) {
  if (!u.is_square()) return std::numeric_limits<double>::infinity();
  ComplexMatrix g = u.adjoint() * u;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return fro_norm(g);
}

double structural_tol(const ComplexMatrix& a) {
  return 1e-10 * (1.0 + fro_norm(a));
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return u.is_square() && unitarity_residual(u) <= tol;
}

}  // namespace mufact
