"""
Two-step decoding of a product code
===================================

Rows are decoded first, the surviving errors are pushed into K columns,
and a second l1 pass cleans them up.  A whole corrupted row, far beyond
what one word can absorb, is repaired this way.
"""

import numpy as np

from turbolp import CodeSpec, burst_corrupt, burst_length, encode, random_errors, turbo_decode

spec = CodeSpec(8)
rng = np.random.default_rng(0)
M = rng.standard_normal((spec.K, spec.K))

# %%
# One full row of errors: the outer pass fails on that row only.

E = np.zeros((8, 8))
E[5] = rng.standard_normal(8)
rep = turbo_decode(encode(M, spec) + E, true_error=E, true_message=M)
print("row failures", rep.row_failures, "column failures", rep.column_failures)
print("success", rep.success, "message error", rep.message_error_max)

# %%
# Two full rows in the Hadamard half usually defeat the inner pass.

E = np.zeros((8, 8))
E[[4, 6]] = rng.standard_normal((2, 8))
rep = turbo_decode(encode(M, spec) + E, true_error=E, true_message=M)
print("two rows: success", rep.success, "column failures", rep.column_failures)

# %%
# Bursts: any run of ``N(c-1) + 2c + 1`` consecutive cells is corrected.

spec16 = CodeSpec(16)
L = burst_length(spec16)
ok = sum(turbo_decode(encode(np.zeros((8, 8)), spec16) + burst_corrupt(spec16, s, L, seed=s),
                      true_error=burst_corrupt(spec16, s, L, seed=s)).success
         for s in range(spec16.n - L + 1))
print(f"N=16 bursts of length {L}: {ok}/{spec16.n - L + 1} offsets recovered")

# %%
# Random errors at larger size.

spec32 = CodeSpec(32)
for t in (16, 60, 120):
    E = random_errors(spec32, t, rng)
    rep = turbo_decode(encode(np.zeros((16, 16)), spec32) + E, true_error=E)
    print(f"N=32 t={t:3d}: success={rep.success}  "
          f"stage ms={ {k: round(v, 1) for k, v in rep.stage_times_ms.items()} }")
