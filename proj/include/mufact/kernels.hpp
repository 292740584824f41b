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

// OpenMP kernels and their serial references. Every parallel kernel produces
// results bit-identical to its serial counterpart: work is split so that each
// output element is computed by exactly one thread in the same operation
// order, and reductions across threads are done serially in index order.

#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "mufact/numkit.hpp"

namespace mufact::kernels {

/// Caps the number of OpenMP threads used by the kernels; 0 restores the
/// OpenMP default.
void set_max_threads(int n);
int max_threads();

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// sum_l w_l U_l X U_l^*
ComplexMatrix conjugation_sum(std::span<const double> weights,
                              std::span<const ComplexMatrix> unitaries,
                              const ComplexMatrix& x);

/// Runs fn(i) for i in [0, n). Exceptions are captured and the one from the
/// lowest index is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
  const int threads = max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conjugation_sum(std::span<const double> weights,
                              std::span<const ComplexMatrix> unitaries,
                              const ComplexMatrix& x);

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace serial

}  // namespace mufact::kernels
