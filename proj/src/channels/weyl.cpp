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
#include <numbers>

#include "mufact/channels.hpp"

namespace mufact::channels {

namespace {

// exp(2 pi i m / d), exact at the quarter turns.
cplx root_of_unity(std::size_t m, std::size_t d) {
  m %= d;
  if (m == 0) return 1.0;
  if (4 * m == d) return cplx(0.0, 1.0);
  if (2 * m == d) return -1.0;
  if (4 * m == 3 * d) return cplx(0.0, -1.0);
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) /
                             static_cast<double>(d));
}

}  // namespace

std::vector<ComplexMatrix> weyl_unitaries(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "weyl_unitaries: d = 0");
  // Shift with wraparound: S e_j = e_{j+1 mod d}.
  ComplexMatrix shift(d, d);
  for (std::size_t j = 0; j < d; ++j) shift((j + 1) % d, j) = 1.0;

  std::vector<ComplexMatrix> out;
  out.reserve(d * d);
  ComplexMatrix shift_power = ComplexMatrix::identity(d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      // D^b has entries w^{(j+1) b} for the 0-based index j; S^a D^b scales
      // column j of S^a.
      ComplexMatrix w = shift_power;
      for (std::size_t j = 0; j < d; ++j) {
        const cplx f = root_of_unity((j + 1) * b, d);
        for (std::size_t r = 0; r < d; ++r) w(r, j) *= f;
      }
      out.push_back(std::move(w));
    }
    shift_power = shift * shift_power;
  }
  return out;
}

MixedUnitaryEnsemble depolarizing_ensemble(std::size_t d) {
  MixedUnitaryEnsemble e{d, {}, weyl_unitaries(d)};
  e.weights.assign(e.unitaries.size(), 1.0 / static_cast<double>(d * d));
  return e;
}

}  // namespace mufact::channels
