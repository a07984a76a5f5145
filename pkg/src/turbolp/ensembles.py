"""Probability of a "bad" error ensemble in an ``N x N`` block.

A row is heavy when it holds more than ``theta = alpha n^(1/4)`` errors; an
ensemble is bad when more than ``theta`` rows are heavy.  With a real
threshold "more than theta" means at least ``floor(theta) + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, logsumexp

from .exceptions import InvalidArgumentError, ResourceError
from .matgen import DEFAULT_ALPHA

EXACT_MAX_SIDE = 64
EXACT = "exact"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class EnsembleSpec:
    n: int
    t: int
    theta: float
    alpha: float = DEFAULT_ALPHA
    heavy_override: int | None = None

    def __post_init__(self):
        N = math.isqrt(self.n)
        if self.n < 1 or N * N != self.n:
            raise InvalidArgumentError(f"block length must be a perfect square, got {self.n!r}")
        if not 0 <= self.t <= self.n:
            raise InvalidArgumentError(f"error count must lie in [0, {self.n}], got {self.t!r}")

    @classmethod
    def from_alpha(cls, n: int, t: int, alpha: float = DEFAULT_ALPHA) -> "EnsembleSpec":
        return cls(n=n, t=t, theta=alpha * n ** 0.25, alpha=alpha)

    @property
    def N(self) -> int:
        return math.isqrt(self.n)

    @property
    def heavy_min(self) -> int:
        """Smallest integer strictly greater than ``theta``, unless overridden.

        The same integer is used as the per-row error level and as the
        heavy-row count that makes an ensemble bad.
        """
        if self.heavy_override is not None:
            return self.heavy_override
        return math.floor(self.theta) + 1


@dataclass
class EnsembleResult:
    n: int
    t: int
    alpha: float
    method: str
    probability: float
    log10_probability: float
    trials: int = 0
    std_error: float = 0.0
    seed: int | None = None
    exact: Fraction | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("exact")
        d["log10"] = d.pop("log10_probability")
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def bad_count(spec: EnsembleSpec, max_side: int = EXACT_MAX_SIDE) -> int:
    """Number of size-``t`` supports whose heavy-row count exceeds ``theta``.

    Row-by-row DP over (errors placed, heavy rows so far capped at the
    badness level); a row with ``k`` errors contributes ``C(N, k)``.
    """
    N, t, h = spec.N, spec.t, spec.heavy_min
    if N > max_side:
        raise ResourceError(f"exact DP limited to N <= {max_side}, got {N}")
    binom = [math.comb(N, k) for k in range(N + 1)]
    # ways[e][j]: placements of e errors with j heavy rows (j == h means "h or more")
    ways = [[0] * (h + 1) for _ in range(t + 1)]
    ways[0][0] = 1
    for _ in range(N):
        nxt = [[0] * (h + 1) for _ in range(t + 1)]
        for e in range(t + 1):
            row = ways[e]
            for j in range(h + 1):
                w = row[j]
                if not w:
                    continue
                for k in range(min(N, t - e) + 1):
                    jj = min(h, j + (k >= h))
                    nxt[e + k][jj] += w * binom[k]
        ways = nxt
    return ways[t][h]


def exact_bad_prob(spec: EnsembleSpec, max_side: int = EXACT_MAX_SIDE) -> EnsembleResult:
    """Exact bad-ensemble probability for a uniformly random size-``t`` support."""
    bad = bad_count(spec, max_side)
    total = math.comb(spec.n, spec.t)
    frac = Fraction(bad, total)
    log10 = math.log10(bad) - math.log10(total) if bad else -math.inf
    return EnsembleResult(spec.n, spec.t, spec.alpha, EXACT, float(frac), log10, exact=frac)


def _block_size(n: int) -> int:
    return max(1, min(4096, (1 << 22) // n))


def monte_carlo_bad_freq(spec: EnsembleSpec, trials: int, seed: int) -> EnsembleResult:
    """Frequency of bad ensembles among ``trials`` random supports.

    Supports come from a partial Fisher-Yates shuffle of the ``n`` cells,
    vectorised across a block of trials.  Block ``b`` draws from the
    generator seeded with ``(seed, b)``, and the block size depends only on
    ``n``, so the count is the same however the blocks are scheduled.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be positive")
    n, t, N, h = spec.n, spec.t, spec.N, spec.heavy_min
    bsize = _block_size(n)
    bad = 0
    for b, start in enumerate(range(0, trials, bsize)):
        m = min(bsize, trials - start)
        bad += _count_bad_block(np.random.default_rng([seed, b]), m, n, t, N, h)
    p = bad / trials
    se = math.sqrt(p * (1 - p) / trials)
    log10 = math.log10(p) if p > 0 else -math.inf
    return EnsembleResult(n, t, spec.alpha, MONTE_CARLO, p, log10, trials, se, seed)


def _count_bad_block(rng, m, n, t, N, h) -> int:
    if t == 0:
        return 0
    perm = np.tile(np.arange(n, dtype=np.int32), (m, 1))
    ar = np.arange(m)
    for i in range(t):
        j = i + rng.integers(0, n - i, size=m)
        a = perm[ar, i].copy()
        perm[ar, i] = perm[ar, j]
        perm[ar, j] = a
    rows = perm[:, :t] // N + (N * ar)[:, None]
    counts = np.bincount(rows.ravel(), minlength=m * N).reshape(m, N)
    heavy = (counts >= h).sum(axis=1)
    return int(np.count_nonzero(heavy >= h))


def log_binomial_upper_tail(trials: int, prob: float, threshold: float) -> float:
    """``log P(y > threshold)`` for ``y ~ Binomial(trials, prob)``, summed in log space."""
    if trials > 10**6:
        raise ResourceError("binomial tail limited to trials <= 1e6")
    lo = math.floor(threshold) + 1
    if lo > trials:
        return -math.inf
    if lo <= 0:
        return 0.0
    k = np.arange(lo, trials + 1)
    logpmf = (gammaln(trials + 1) - gammaln(k + 1) - gammaln(trials - k + 1)
              + k * math.log(prob) + (trials - k) * math.log1p(-prob))
    return min(0.0, float(logsumexp(logpmf)))


def log_row_overflow_prob_exact(spec: EnsembleSpec) -> float:
    """``log P(y >= heavy_min)`` for ``y ~ Binomial(t, 1/sqrt(n))``."""
    return log_binomial_upper_tail(spec.t, 1.0 / spec.N, spec.heavy_min - 1)


def row_overflow_prob_exact(spec: EnsembleSpec) -> float:
    return math.exp(log_row_overflow_prob_exact(spec))
