"""
Identity + Hadamard dictionaries
================================

Build the parity check and generator for a few word lengths, check the
algebra, and compare spark with cospark on the small ones.
"""

import math

import numpy as np

from turbolp import CodeSpec, build_generator, build_parity_check, coherence
from turbolp import cospark_bruteforce, spark_bruteforce

# %%
# The parity check is ``[I | W / sqrt(r)]`` with ``W`` a Sylvester Hadamard
# matrix, and the generator spans its null space.

for N in (4, 8, 16, 64, 128):
    spec = CodeSpec(N)
    pc = build_parity_check(spec)
    G = build_generator(pc).entries
    print(f"N={N:4d}  |HG|={np.abs(pc.entries @ G).max():.1e}  "
          f"|G'G-I|={np.abs(G.T @ G - np.eye(spec.K)).max():.1e}  "
          f"mu={coherence(pc):.4f} (1/sqrt r = {1 / math.sqrt(spec.r):.4f})  "
          f"capacity={spec.guaranteed_t_word}")

# %%
# Spark of H and cospark of G agree; brute force only works for tiny N.

for N in (4, 8):
    pc = build_parity_check(CodeSpec(N))
    print(f"N={N}: spark(H)={spark_bruteforce(pc.entries)}  "
          f"cospark(G)={cospark_bruteforce(build_generator(pc).entries)}")
