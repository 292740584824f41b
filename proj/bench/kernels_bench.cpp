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

// Times each OpenMP kernel against its serial reference and checks that the
// two agree bit for bit. Usage: mufact_bench [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "mufact/channels.hpp"
#include "mufact/factorise.hpp"
#include "mufact/kernels.hpp"
#include "mufact/norms.hpp"
#include "mufact/numkit.hpp"

using namespace mufact;

namespace {

template <class Fn>
double best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s < best) best = s;
  }
  return best;
}

void row(const char* name, double par, double ser, bool same) {
  std::printf("%-34s %10.4f %10.4f %8.2fx  %s\n", name, par, ser, ser / par,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", kernels::max_threads(), repeats);
  std::printf("%-34s %10s %10s %9s\n", "kernel", "openmp s", "serial s", "speedup");

  {
    const ComplexMatrix a = random_gaussian(256, 256, Seed{1});
    const ComplexMatrix b = random_gaussian(256, 256, Seed{2});
    ComplexMatrix p, s;
    const double tp = best_of(repeats, [&] { p = kernels::matmul(a, b); });
    const double ts = best_of(repeats, [&] { s = kernels::serial::matmul(a, b); });
    row("matmul 256", tp, ts, p == s);
  }
  {
    const auto e = channels::depolarizing_ensemble(12);
    const ComplexMatrix x = random_gaussian(12, 12, Seed{3});
    ComplexMatrix p, s;
    const double tp = best_of(repeats, [&] { p = channels::apply_ensemble(e, x); });
    const double ts = best_of(repeats, [&] { s = channels::apply_ensemble_serial(e, x); });
    row("apply_ensemble Weyl d=12", tp, ts, p == s);
  }
  {
    std::vector<ComplexMatrix> us;
    std::vector<double> ws;
    for (std::uint64_t l = 0; l < 64; ++l) {
      us.push_back(random_haar_unitary(48, Seed{100 + l}));
      ws.push_back(1.0 / 64);
    }
    const ComplexMatrix x = random_gaussian(48, 48, Seed{4});
    ComplexMatrix p, s;
    const double tp = best_of(repeats, [&] { p = kernels::conjugation_sum(ws, us, x); });
    const double ts = best_of(repeats, [&] { s = kernels::serial::conjugation_sum(ws, us, x); });
    row("conjugation_sum 64 x 48", tp, ts, p == s);
  }
  {
    const auto planted = factorise::sample_fkd_convex(2, 4, 3, Seed{5});
    const ComplexMatrix c = factorise::gram_average(planted);
    factorise::SolverOptions o;
    o.restarts = 16;
    o.max_iters = 100;
    factorise::MembershipResult p, s;
    const double tp = best_of(repeats, [&] { p = factorise::membership_solve(c, 2, o); });
    const double ts = best_of(repeats, [&] { s = factorise::membership_solve_serial(c, 2, o); });
    row("membership_solve 16 restarts", tp, ts,
        p.certificate.residual_fro == s.certificate.residual_fro &&
            p.best_restart == s.best_restart);
  }
  {
    const ComplexMatrix a = random_hermitian(6, Seed{6});
    const auto table = norms::BasisActionTable::from_map(channels::schur_map({a}));
    norms::AscentOptions o;
    o.starts = 32;
    double p = 0.0, s = 0.0;
    const double tp = best_of(repeats, [&] { p = norms::superop_norm_lb(table, o); });
    const double ts = best_of(repeats, [&] { s = norms::superop_norm_lb_serial(table, o); });
    row("superop_norm_lb 32 starts", tp, ts, p == s);
  }
  return 0;
}
