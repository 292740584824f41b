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

#include "gtest/gtest.h"

#include "mufact/channels.hpp"
#include "test_util.hpp"

using namespace mufact;
using namespace mufact::channels;

TEST(schur_apply, examples) {
  const std::size_t k = 4;
  auto x = random_gaussian(k, k, Seed{1});
  ComplexMatrix ones(k, k);
  for (auto& z : ones.entries()) z = 1.0;
  EXPECT_EQ(schur_apply({ones}, x), x);
  auto diag = schur_apply({ComplexMatrix::identity(k)}, x);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(diag(i, j), i == j ? x(i, i) : cplx(0));
  auto c = random_correlation(k, Seed{2});
  EXPECT_LE(fro_norm(schur_apply({c}, ComplexMatrix::identity(k)) - ComplexMatrix::identity(k)),
            1e-12);
  EXPECT_THROW(schur_apply({c}, ComplexMatrix(3, 3)), Error);
}

TEST(weyl, small_dimensions) {
  auto w1 = weyl_unitaries(1);
  ASSERT_EQ(w1.size(), 1u);
  EXPECT_EQ(w1[0], ComplexMatrix::identity(1));

  auto w2 = weyl_unitaries(2);
  ASSERT_EQ(w2.size(), 4u);
  EXPECT_EQ(w2[0], ComplexMatrix::identity(2));
  EXPECT_EQ(w2[1], ComplexMatrix::from_rows({{-1, 0}, {0, 1}}));
  EXPECT_EQ(w2[2], ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_EQ(w2[3], ComplexMatrix::from_rows({{0, 1}, {-1, 0}}));
}

TEST(weyl, trace_orthogonality) {
  for (std::size_t d = 1; d <= 6; ++d) {
    auto w = weyl_unitaries(d);
    ASSERT_EQ(w.size(), d * d);
    for (std::size_t a = 0; a < w.size(); ++a) {
      EXPECT_LE(unitarity_residual(w[a]), 1e-12);
      for (std::size_t b = 0; b < w.size(); ++b) {
        const cplx t = hs_inner(w[a], w[b]);
        EXPECT_NEAR(std::abs(t - (a == b ? cplx(double(d)) : cplx(0))), 0.0, 1e-12);
      }
    }
  }
}

TEST(depolarizing_ensemble, matches_direct_formula) {
  for (std::size_t d = 1; d <= 6; ++d) {
    auto e = depolarizing_ensemble(d);
    for (double w : e.weights) EXPECT_DOUBLE_EQ(w, 1.0 / double(d * d));
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto x = random_gaussian(d, d, Seed{s * 7 + d});
      EXPECT_LE(max_abs(apply_ensemble(e, x) - depolarize(x)), 1e-12);
    }
  }
  auto half = apply_ensemble(depolarizing_ensemble(2), ComplexMatrix::unit(2, 2, 0, 0));
  EXPECT_LE(max_abs(half - 0.5 * ComplexMatrix::identity(2)), 1e-15);
}

TEST(choi, identity_and_depolarizer) {
  const std::size_t k = 3;
  auto id = choi_of(identity_map(k));
  ComplexMatrix expect(k * k, k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      expect += kron(ComplexMatrix::unit(k, k, i, j), ComplexMatrix::unit(k, k, i, j));
  EXPECT_EQ(id.matrix, expect);
  EXPECT_TRUE(verify_channel(id).all());

  auto dep = choi_of(depolarizing_map(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      auto want = i == j ? (1.0 / k) * ComplexMatrix::identity(k) : ComplexMatrix(k, k);
      EXPECT_LE(max_abs(dep.block(i, j) - want), 1e-15);
    }
  EXPECT_TRUE(verify_channel(dep).all());
}

TEST(choi, mixed_unitary_is_unital_channel) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto e = testutil::random_ensemble(4, 3, Seed{s});
    validate(e);
    EXPECT_TRUE(verify_channel(as_map(e)).all());
  }
}

TEST(kraus, round_trip_through_choi) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto ch = testutil::random_kraus(3, 2, Seed{s});
    auto c = choi_of(as_map(ch));
    auto back = kraus_from_choi(c);
    EXPECT_LE(back.kraus_ops.size(), 2u);
    EXPECT_LE(fro_norm(choi_of(as_map(back)).matrix - c.matrix), 1e-9);
  }
  // trace-preserving normalisation shows up in both verifiers
  auto e = testutil::random_ensemble(3, 2, Seed{4});
  KrausChannel kr{3, 3, {}};
  for (std::size_t l = 0; l < e.size(); ++l)
    kr.kraus_ops.push_back(std::sqrt(e.weights[l]) * e.unitaries[l]);
  EXPECT_TRUE(verify_channel(kr).all());
  EXPECT_TRUE(verify_channel(as_map(kr)).all());
}

TEST(kraus, rejects_non_psd_choi) {
  // transpose map: Choi is the swap, eigenvalue -1
  const std::size_t k = 2;
  auto c = choi_of({k, k, [](const ComplexMatrix& x) { return x.transpose(); }});
  EXPECT_FALSE(verify_channel(c).cp);
  try {
    kraus_from_choi(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(lift_schur, basis_examples) {
  const std::size_t d = 3, k = 3;
  auto c = random_correlation(k, Seed{10});
  auto lift = lift_schur({c}, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      auto a = embed_identity(ComplexMatrix::unit(k, k, i, j), d);
      auto want = c(i, j) * a;
      EXPECT_LE(max_abs(lift(a) - want), 1e-15);
    }
  // C = J: block-wise depolariser
  ComplexMatrix ones(k, k);
  for (auto& z : ones.entries()) z = 1.0;
  auto x = random_gaussian(d * k, d * k, Seed{11});
  auto y = lift_schur({ones}, d)(x);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      EXPECT_LE(max_abs(y.block(i * d, j * d, d, d) - depolarize(x.block(i * d, j * d, d, d))),
                1e-14);
}

TEST(lift_schur, is_unital_channel_for_correlations) {
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::size_t k = 1; k <= 4; ++k) {
      auto c = random_correlation(k, Seed{d * 10 + k});
      auto rep = verify_channel(lift_schur({c}, d));
      EXPECT_TRUE(rep.all()) << d << " " << k;
    }
}

TEST(delta_compress, identity_and_depolarizer) {
  const std::size_t d = 2, k = 3;
  auto t = delta_compress(identity_map(d * k), d, k);
  EXPECT_LE(fro_norm(t.matrix - choi_of(identity_map(k)).matrix), 1e-14);
  auto dep = delta_compress(depolarizing_map(d * k), d, k);
  EXPECT_LE(fro_norm(dep.matrix - choi_of(depolarizing_map(k)).matrix), 1e-14);
  EXPECT_THROW(delta_compress(identity_map(5), d, k), Error);
}

TEST(delta_compress, block_diagonal_conjugation_gives_schur) {
  const std::size_t d = 3, k = 3;
  std::vector<ComplexMatrix> us;
  for (std::uint64_t i = 0; i < k; ++i) us.push_back(random_haar_unitary(d, Seed{40 + i}));
  auto v = direct_sum(us);
  auto t = delta_compress(conjugation_map(v), d, k);
  ComplexMatrix c(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) c(i, j) = normalized_trace(us[i] * us[j].adjoint());
  EXPECT_LE(fro_norm(t.matrix - choi_of(schur_map({c})).matrix), 1e-12);
}

TEST(delta_compress, mixed_unitary_yields_unital_channel_and_ensemble) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t d = 1 + s % 3, k = 1 + (s / 3) % 3;
    auto phi = testutil::random_ensemble(d * k, 3, Seed{s});
    auto comp = delta_compress(phi, d, k);
    EXPECT_TRUE(verify_channel(comp.channel).all());
    ASSERT_TRUE(comp.ensemble.has_value());
    EXPECT_EQ(comp.ensemble->size(), d * d * phi.size() * d * d);
    validate(*comp.ensemble, 1e-12);
    // composed ensemble implements Delta o Phi o Delta = delta_d (x) T
    auto tensor = testutil::depolarizer_tensor(as_map(comp.channel), d, k);
    for (std::size_t a = 0; a < d * k; ++a)
      for (std::size_t b = 0; b < d * k; ++b) {
        auto x = ComplexMatrix::unit(d * k, d * k, a, b);
        auto direct = delta_apply(apply_ensemble(phi, delta_apply(x, d, k)), d, k);
        EXPECT_LE(max_abs(apply_ensemble(*comp.ensemble, x) - direct), 1e-12);
        EXPECT_LE(max_abs(tensor(x) - direct), 1e-12);
      }
  }
}

TEST(delta_compress, idempotent_on_depolarizer_tensor) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t d = 2, k = 3;
    auto t = as_map(testutil::random_kraus(k, 3, Seed{s}));
    auto back = delta_compress(testutil::depolarizer_tensor(t, d, k), d, k);
    EXPECT_LE(fro_norm(back.matrix - choi_of(t).matrix), 1e-10);
  }
}

TEST(d_biaverage, examples) {
  const std::size_t k = 3;
  auto b = d_biaverage(identity_map(k));
  for (auto z : b.matrix.entries()) EXPECT_EQ(z, cplx(1.0));
  auto dep = d_biaverage(depolarizing_map(k));
  EXPECT_LE(max_abs(dep.matrix - (1.0 / k) * ComplexMatrix::identity(k)), 1e-15);

  std::vector<cplx> z = {std::polar(1.0, 0.3), std::polar(1.0, -1.1), std::polar(1.0, 2.0)};
  auto diag = d_biaverage(conjugation_map(ComplexMatrix::diagonal(std::span<const cplx>(z))));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      EXPECT_NEAR(std::abs(diag.matrix(i, j) - z[i] * std::conj(z[j])), 0.0, 1e-14);
  EXPECT_TRUE(is_correlation(diag.matrix));
}

TEST(d_biaverage, rejects_non_cp) {
  try {
    d_biaverage(LinearMap{2, 2, [](const ComplexMatrix& x) { return x.transpose(); }});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCP);
  }
}

TEST(biaverage_pm_oracle, agrees_with_choi_compression) {
  ComplexMatrix j2(2, 2);
  for (auto& z : j2.entries()) z = 1.0;
  EXPECT_LE(max_abs(biaverage_pm_oracle(identity_map(2)).matrix - j2), 1e-15);
  EXPECT_LE(max_abs(biaverage_pm_oracle(depolarizing_map(2)).matrix -
                    0.5 * ComplexMatrix::identity(2)),
            1e-15);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto t = as_map(testutil::random_kraus(3, 2, Seed{s}));
    auto b = d_biaverage(t);
    EXPECT_LE(max_abs(b.matrix - biaverage_pm_oracle(t).matrix), 1e-10);
    EXPECT_GE(min_eigenvalue(b.matrix), -1e-10);
  }
  try {
    biaverage_pm_oracle(identity_map(9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionTooLarge);
  }
}

TEST(d_biaverage, unital_diagonal_bounds_and_contraction) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t k = 3;
    auto c = random_correlation(k, Seed{s});
    auto e = testutil::random_ensemble(k, 3, Seed{s + 50});
    auto t = as_map(e);
    auto b = d_biaverage(t);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_GE(b.matrix(i, i).real(), -1e-12);
      EXPECT_LE(b.matrix(i, i).real(), 1.0 + 1e-9);
    }
    auto diff = difference(schur_map({c}), t);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const double lhs = std::abs(c(i, j) - b.matrix(i, j));
        EXPECT_LE(lhs, op_norm(diff(ComplexMatrix::unit(k, k, i, j))) + 1e-12);
      }
  }
}

TEST(validate, ensemble_errors) {
  auto e = testutil::random_ensemble(3, 2, Seed{1});
  auto bad_weight = e;
  bad_weight.weights[0] = 0.0;
  EXPECT_THROW(validate(bad_weight), Error);
  auto bad_unitary = e;
  bad_unitary.unitaries[1] = 2.0 * bad_unitary.unitaries[1];
  try {
    validate(bad_unitary);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotUnitary);
  }
}
