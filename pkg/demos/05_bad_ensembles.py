"""
How often is an error pattern "bad"?
====================================

An error support is bad when more than ``theta = alpha n^(1/4)`` rows
carry more than ``theta`` errors each.  For moderate sizes the
probability is computed exactly with a row-by-row count; Monte Carlo
gives the same answer within its standard error.
"""

from turbolp.bounds import BoundParams, t_loglog_of_n, t_of_n
from turbolp.ensembles import EnsembleSpec, exact_bad_prob, monte_carlo_bad_freq

# %%
# Error budget ``alpha n^(3/4) / ln n``.

for n in (81, 441, 1369, 3481):
    t = t_of_n(BoundParams(n))
    spec = EnsembleSpec.from_alpha(n, t)
    ex = exact_bad_prob(spec)
    line = f"n={n:5d} t={t:3d} exact log10={ex.log10_probability:8.3f}"
    if n <= 441:
        mc = monte_carlo_bad_freq(spec, 20000, seed=1)
        line += f"  monte carlo {mc.probability:.2e} +/- {mc.std_error:.1e}"
    print(line)

print("n=81 exact fraction:", exact_bad_prob(EnsembleSpec.from_alpha(81, 4)).exact)

# %%
# The larger budget ``alpha n^(3/4) / ln ln n`` makes bad patterns common.

for n in (441, 1369, 3481):
    t = t_loglog_of_n(BoundParams(n))
    print(f"n={n:5d} t={t:3d} exact log10={exact_bad_prob(EnsembleSpec.from_alpha(n, t)).log10_probability:8.3f}")
