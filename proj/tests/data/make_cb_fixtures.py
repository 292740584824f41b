# Copyright 2026 The mufact Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates cb_norm_fixtures.json with an interior-point SDP solver.

The cb-norm of the Schur multiplier with symbol A is the optimum of

    minimise t  s.t.  [[R, A], [A^*, S]] >= 0,  diag(R) <= t,  diag(S) <= t.

Usage: python3 make_cb_fixtures.py > cb_norm_fixtures.json
"""

import json

import cvxpy as cp
import numpy as np


def cb_norm(a):
    # Complex PSD constraints are posed through the real embedding
    # [[Re Z, -Im Z], [Im Z, Re Z]] >= 0.
    k = a.shape[0]
    n = 2 * k
    x = cp.Variable((n, n), symmetric=True)
    y = cp.Variable((n, n))
    t = cp.Variable()
    big = cp.bmat([[x, -y], [y, x]])
    cons = [big >> 0, y == -y.T]
    cons += [x[:k, k:] == a.real, y[:k, k:] == a.imag]
    cons += [x[i, i] <= t for i in range(n)]
    prob = cp.Problem(cp.Minimize(t), cons)
    prob.solve(solver=cp.CLARABEL)
    assert prob.status == cp.OPTIMAL, prob.status
    return float(t.value)


def main():
    rng = np.random.default_rng(20261016)
    cases = []
    for idx in range(24):
        k = 2 + idx % 5
        a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        if idx % 3 == 1:
            a = a + a.conj().T  # Hermitian, indefinite
        elif idx % 3 == 2:
            g = rng.normal(size=(k, 2)) + 1j * rng.normal(size=(k, 2))
            h = rng.normal(size=(k, 2)) + 1j * rng.normal(size=(k, 2))
            a = g @ g.conj().T - h @ h.conj().T  # difference of low-rank PSD
        cases.append({
            "rows": k,
            "cols": k,
            "entries": [[z.real, z.imag] for z in a.reshape(-1)],
            "cb_norm": cb_norm(a),
        })
    json.dump(cases, __import__("sys").stdout, indent=1)


if __name__ == "__main__":
    main()
