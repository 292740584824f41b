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

// Instance generators and direct-formula oracles shared by the test suites.

#pragma once

#include <random>

#include "mufact/channels.hpp"
#include "mufact/numkit.hpp"

namespace testutil {

using namespace mufact;

inline std::vector<double> random_weights(std::size_t m, Seed seed) {
  std::mt19937_64 gen(seed.value);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(m);
  double total = 0.0;
  for (auto& x : w) total += (x = u(gen));
  for (auto& x : w) x /= total;
  return w;
}

inline channels::MixedUnitaryEnsemble random_ensemble(std::size_t n, std::size_t m,
                                                      Seed seed) {
  channels::MixedUnitaryEnsemble e{n, random_weights(m, seed.derive(0)), {}};
  for (std::size_t l = 0; l < m; ++l) {
    e.unitaries.push_back(random_haar_unitary(n, seed.derive(l + 1)));
  }
  return e;
}

/// Arbitrary completely positive map (not trace preserving).
inline channels::KrausChannel random_kraus(std::size_t n, std::size_t m, Seed seed) {
  channels::KrausChannel ch{n, n, {}};
  for (std::size_t l = 0; l < m; ++l) {
    ch.kraus_ops.push_back(random_gaussian(n, n, seed.derive(l)));
  }
  return ch;
}

/// delta_d (x) T in the block layout, from the defining formula
/// (delta_d (x) T)(kron(B, A)) = kron(T(B), tr_d(A) I_d).
inline channels::LinearMap depolarizer_tensor(channels::LinearMap t, std::size_t d,
                                              std::size_t k) {
  return {d * k, d * k, [t = std::move(t), d, k](const ComplexMatrix& x) {
            ComplexMatrix traces(k, k);
            for (std::size_t i = 0; i < k; ++i)
              for (std::size_t j = 0; j < k; ++j) {
                cplx s = 0.0;
                for (std::size_t r = 0; r < d; ++r) s += x(i * d + r, j * d + r);
                traces(i, j) = s / static_cast<double>(d);
              }
            return kron(t(traces), ComplexMatrix::identity(d));
          }};
}

}  // namespace testutil
