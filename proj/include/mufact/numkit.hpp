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

// Dense complex linear algebra for desk-scale dimensions (up to a few
// hundred). Everything here is a pure function of its inputs; randomness is
// driven by an explicit Seed.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "mufact/error.hpp"

namespace mufact {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws ShapeMismatch if entries.size() != rows*cols and NonFinite on
  /// NaN/Inf input.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<cplx>> rows);
  /// E_{i,j} in dimension rows x cols (0-based).
  static ComplexMatrix unit(std::size_t rows, std::size_t cols, std::size_t i,
                            std::size_t j);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);
  /// this += s * o
  void add_scaled(const ComplexMatrix& o, cplx s);

  bool operator==(const ComplexMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

double fro_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
/// Normalised trace tr_d(X) = Tr(X)/d.
cplx normalized_trace(const ComplexMatrix& a);
/// Tr(A^* B) without forming the product.
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Block-diagonal direct sum.
ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks);

/// ||A - A^*||_F
double hermitian_residual(const ComplexMatrix& a);
/// ||U^* U - I||_F
double unitarity_residual(const ComplexMatrix& u);
/// Structural tolerance 1e-10 (1 + ||A||_F) used by Hermitian/PSD checks.
double structural_tol(const ComplexMatrix& a);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Cyclic complex Jacobi. Throws NotHermitian or NoConvergence.
EigenSystem herm_eig(const ComplexMatrix& a);
double min_eigenvalue(const ComplexMatrix& a);
double max_eigenvalue(const ComplexMatrix& a);

struct SvdResult {
  ComplexMatrix left;          // rows x rows, unitary
  std::vector<double> values;  // min(rows, cols), descending
  ComplexMatrix right;         // cols x cols, unitary
};

/// One-sided Jacobi SVD, X = left * diag(values) * right^*. Left singular
/// vectors for zero singular values complete the basis by Gram-Schmidt over
/// the standard basis in index order, so the zero matrix yields identities.
SvdResult svd(const ComplexMatrix& x);

struct PolarParts {
  ComplexMatrix unitary_factor;
  ComplexMatrix psd_factor;
};

/// X = unitary_factor * psd_factor with a genuine unitary even for singular X.
PolarParts polar(const ComplexMatrix& x);
ComplexMatrix polar_unitary(const ComplexMatrix& x);

/// Square root of a PSD matrix; eigenvalues in [-1e-10 (1+||A||_F), 0) are
/// clamped, anything below throws NotPSD.
ComplexMatrix sqrt_psd(const ComplexMatrix& a);

/// Largest singular value.
double op_norm(const ComplexMatrix& x);

struct Seed {
  std::uint64_t value = 0;

  /// Independent child stream; splitmix64 of (value, stream).
  Seed derive(std::uint64_t stream) const;
  bool operator==(const Seed&) const = default;
};

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, Seed seed);
/// Haar unitary via Gram-Schmidt QR of a complex Gaussian matrix, R diagonal
/// normalised to be positive.
ComplexMatrix random_haar_unitary(std::size_t d, Seed seed);
/// Normalised Gram matrix of k random unit vectors in C^rank (rank 0 means k).
ComplexMatrix random_correlation(std::size_t k, Seed seed, std::size_t rank = 0);
ComplexMatrix random_hermitian(std::size_t n, Seed seed);
/// Gaussian matrix rescaled to an operator norm drawn uniformly from [0, 1].
ComplexMatrix random_contraction(std::size_t n, Seed seed);

}  // namespace mufact
