"""
Sparse error recovery on a single word
======================================

A length-N codeword hit by a few real-valued errors is repaired by the
l1 program ``min |e|_1 s.t. H e = H y``, solved with the in-package simplex.
"""

import numpy as np

from turbolp import CodeSpec, L1Problem, l0_min_eq, l1_min_eq, p0_p1_equivalence_check
from turbolp.matgen import code_matrices

spec = CodeSpec(64)
H, G = code_matrices(spec)
rng = np.random.default_rng(1)

# %%
# Encode a random message and corrupt ``capacity`` positions.

m = rng.standard_normal(spec.K)
e = np.zeros(spec.N)
e[rng.choice(spec.N, spec.guaranteed_t_word, replace=False)] = rng.standard_normal(spec.guaranteed_t_word)
y = G @ m + e

sol = l1_min_eq(L1Problem(H, H @ y))
print("status", sol.status, "iterations", sol.iterations)
print("support found", sol.support, "true", tuple(np.flatnonzero(e).tolist()))
print("message error", np.abs(G.T @ (y - sol.x) - m).max())

# %%
# Beyond the guarantee l1 often still works; with 20 errors it usually does not.

for t in (5, 10, 20):
    hits = 0
    for i in range(20):
        e = np.zeros(spec.N)
        e[rng.choice(spec.N, t, replace=False)] = rng.standard_normal(t)
        hits += np.abs(l1_min_eq(L1Problem(H, H @ e)).x - e).max() < 1e-6
    print(f"t={t:2d}: recovered {hits}/20")

# %%
# For small words the l0 oracle is cheap enough to confirm the two agree.

small = CodeSpec(8)
H8, _ = code_matrices(small)
e = np.zeros(8)
e[6] = 2.0
print("l0 support", l0_min_eq(L1Problem(H8, H8 @ e), 1).support)
print("agreement over 200 trials", p0_p1_equivalence_check(small, 200, seed=3))
