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

#include "mufact/numkit.hpp"

namespace mufact {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be >= 1");
}

}  // namespace

Seed Seed::derive(std::uint64_t stream) const {
  return Seed{splitmix64(splitmix64(value) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, Seed seed) {
  std::mt19937_64 gen(seed.value);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) {
    const double re = normal(gen);
    const double im = normal(gen);
    z = cplx(re, im) * std::sqrt(0.5);
  }
  return m;
}

ComplexMatrix random_haar_unitary(std::size_t d, Seed seed) {
  require_positive(d, "dimension");
  ComplexMatrix q = random_gaussian(d, d, seed);
  // Modified Gram-Schmidt with one reorthogonalisation pass; R's diagonal is
  // the positive column norm, which is the phase normalisation Haar needs.
  for (std::size_t j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < d; ++r) dot += std::conj(q(r, i)) * q(r, j);
        for (std::size_t r = 0; r < d; ++r) q(r, j) -= dot * q(r, i);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < d; ++r) nrm += std::norm(q(r, j));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < d; ++r) q(r, j) /= nrm;
  }
  return q;
}

ComplexMatrix random_correlation(std::size_t k, Seed seed, std::size_t rank) {
  require_positive(k, "k");
  const std::size_t dim = rank == 0 ? k : rank;
  ComplexMatrix vecs = random_gaussian(dim, k, seed);
  for (std::size_t j = 0; j < k; ++j) {
    double nrm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(vecs(r, j));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < dim; ++r) vecs(r, j) /= nrm;
  }
  ComplexMatrix c = vecs.adjoint() * vecs;
  for (std::size_t i = 0; i < k; ++i) c(i, i) = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) c(j, i) = std::conj(c(i, j));
  return c;
}

ComplexMatrix random_hermitian(std::size_t n, Seed seed) {
  ComplexMatrix g = random_gaussian(n, n, seed);
  ComplexMatrix h = g + g.adjoint();
  h *= 0.5;
  return h;
}

ComplexMatrix random_contraction(std::size_t n, Seed seed) {
  require_positive(n, "dimension");
  ComplexMatrix g = random_gaussian(n, n, seed.derive(0));
  std::mt19937_64 gen(seed.derive(1).value);
  const double target = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
  const double nrm = op_norm(g);
  if (nrm == 0.0) return g;
  g *= target / nrm;
  return g;
}

}  // namespace mufact
