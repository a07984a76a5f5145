"""
Chernoff bounds on decoding failure
===================================

Evaluate the per-row and per-block bounds over block length, in log space.
"""

import numpy as np

from turbolp.bounds import (
    BoundParams,
    appendix_terms,
    block_error_bound,
    chernoff_q,
    chernoff_q_simplified,
    emit_bound_curves,
    find_N0,
    t_of_n,
)

# %%
# Row bound, its simplified form, and the block bound at a few sizes.

print(f"{'n':>10} {'t(n)':>6} {'q':>10} {'q_simp':>10} {'P_b':>10}")
for n in (1e3, 1e4, 1e5, 1e6, 1e8):
    p = BoundParams(n)
    print(f"{n:10.0e} {t_of_n(p):6d} {chernoff_q(p):10.3e} "
          f"{chernoff_q_simplified(p):10.3e} {block_error_bound(p):10.3e}")

# %%
# Where does the block bound start to decay?

for alpha in (0.5, 0.65, 0.8):
    print(f"alpha={alpha}: N0 = {find_N0(alpha)}")

# %%
# The constants that appear when the bound is simplified.

for n in (64, 1e4, 1e8):
    A, B, C = appendix_terms(BoundParams(n))
    print(f"n={n:8.0e}  A={A:.3e}  B={B:.4f}  C={C:.4f}")

# %%
# Curves as CSV, skipping points outside a formula's domain.

for curve in emit_bound_curves(0.65, np.geomspace(1e3, 1e8, 6)):
    print(curve.to_csv(), end="")
