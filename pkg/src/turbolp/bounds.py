"""Closed-form error budgets and Chernoff bounds for the two-step decoder.

Logarithms are natural.  Probability bounds are evaluated as logarithms
first (the exponents reach the thousands for large ``n``); the plain
versions just exponentiate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError, InvalidArgumentError
from .matgen import DEFAULT_ALPHA

CURVE_LABELS = ("t", "t_b", "q", "q_simplified", "P_b", "A", "B", "C", "s_outer", "s_inner")


@dataclass(frozen=True)
class BoundParams:
    n: float
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not self.n >= 2:
            raise DomainError(f"block length must be >= 2, got {self.n!r}")
        if not 0 <= self.alpha <= 1:
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha!r}")

    @property
    def theta(self) -> float:
        """Heavy-row threshold ``alpha n^(1/4)``."""
        return self.alpha * self.n ** 0.25


@dataclass
class BoundCurve:
    label: str
    samples: list[tuple[float, float]] = field(default_factory=list)
    skipped: list[float] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,value,label"]
        lines += [f"{n:.17g},{v:.17g},{self.label}" for n, v in self.samples]
        return "\n".join(lines) + "\n"


def t_real(p: BoundParams) -> float:
    return p.alpha * p.n ** 0.75 / math.log(p.n)


def t_of_n(p: BoundParams) -> int:
    """Error budget ``alpha n^(3/4) / ln n`` rounded to the nearest integer.

    Rounding (not flooring) gives the reference counts 4, 10, 20, 36
    for n = 81, 441, 1369, 3481; the n=81 value is 3.994.
    """
    return int(math.floor(t_real(p) + 0.5))


def t_loglog_real(p: BoundParams) -> float:
    if p.n <= math.e:
        raise DomainError(f"ln ln n needs n > e, got {p.n!r}")
    return p.alpha * p.n ** 0.75 / math.log(math.log(p.n))


def t_loglog_of_n(p: BoundParams) -> int:
    """``floor(alpha n^(3/4) / ln ln n)``."""
    return int(math.floor(t_loglog_real(p)))


def t_burst(p: BoundParams) -> float:
    """Guaranteed burst length ``alpha n^(3/4) - n^(1/2) + 2 alpha n^(1/4) + 1``."""
    return p.alpha * p.n ** 0.75 - p.n ** 0.5 + 2 * p.theta + 1


def chernoff_s_outer(p: BoundParams, t: float | None = None) -> float:
    """Optimal Chernoff parameter for ``P(y > theta)``, ``y ~ B(t, n^(-1/2))``.

    Positive exactly when ``theta < t < alpha n^(3/4)``.
    """
    t = t_real(p) if t is None else t
    q = p.n ** -0.5
    if t <= p.theta:
        raise DomainError("optimal s needs t > alpha n^(1/4)")
    return math.log((1 - q) * p.theta / (q * (t - p.theta)))


def chernoff_bound_generic(trials: float, prob: float, threshold: float, s: float) -> float:
    """``log( e^{-s threshold} (prob e^s + 1 - prob)^trials )`` at a given ``s``."""
    return -s * threshold + trials * math.log1p(prob * math.expm1(s))


def in_validity_window(p: BoundParams, t: float | None = None) -> bool:
    """Whether ``alpha n^(1/4) < t < alpha n^(3/4)``, i.e. the optimal ``s`` is positive."""
    t = t_real(p) if t is None else t
    return p.theta < t < p.alpha * p.n ** 0.75


def log_chernoff_q(p: BoundParams) -> float:
    L = math.log(p.n)
    rn = p.n ** -0.5
    if 1 / L - rn <= 0:
        raise DomainError(f"1/ln n - n^(-1/2) must be positive, got n={p.n!r}")
    t = t_real(p)
    base = math.log1p(-rn) - math.log(1 / L - rn)
    return (t - p.theta) * base - t * math.log(L)


def chernoff_q(p: BoundParams) -> float:
    """Chernoff bound on a row receiving more than ``theta`` of ``t(n)`` errors.

    ``((1 - n^-1/2) / (1/ln n - n^-1/2))^(t - theta) * (ln n)^(-t)`` with the
    real-valued ``t = alpha n^(3/4) / ln n``.
    """
    return math.exp(log_chernoff_q(p))


def _loglog_bracket(n: float) -> float:
    L = math.log(n)
    return math.log(L) - 1.5 + 1 / L - n ** -0.5


def log_chernoff_q_simplified(p: BoundParams) -> float:
    return -p.theta * _loglog_bracket(p.n)


def chernoff_q_simplified(p: BoundParams) -> float:
    """``exp(-alpha n^(1/4) (ln ln n - 3/2 + 1/ln n - n^(-1/2)))``."""
    return math.exp(log_chernoff_q_simplified(p))


def block_exponent_bracket(n: float, alpha: float) -> float:
    """Bracketed factor of the block-error exponent; the bound decays where it is positive."""
    r4 = n ** 0.25
    if r4 <= alpha:
        raise DomainError(f"block bound needs n^(1/4) > alpha, got n={n!r}")
    return (math.log(math.log(n)) - 1.5 + math.log1p(-alpha / r4) / alpha ** 2
            - math.log(r4 / alpha - 1) / (r4 * alpha))


def log_block_error_bound(p: BoundParams) -> float:
    if p.alpha == 0:
        return 0.0
    return -p.alpha ** 2 * p.n ** 0.5 * block_exponent_bracket(p.n, p.alpha)


def block_error_bound(p: BoundParams) -> float:
    """Sub-exponential block-error bound ``P_b``."""
    return math.exp(log_block_error_bound(p))


def chernoff_s_inner(p: BoundParams) -> float:
    """Optimal Chernoff parameter for more than ``theta`` of ``sqrt(n)`` rows failing at rate ``q(n)``."""
    q = chernoff_q(p)
    return math.log((1 - q) * p.theta / (q * (p.n ** 0.5 - p.theta)))


def appendix_terms(p: BoundParams) -> tuple[float, float, float]:
    """``A = (ln n)^(-alpha n^1/4)``, ``B = (1 - 1/m)^(-m)`` with ``m = sqrt(n)/ln n``, ``C = (1 - n^-1/2)^sqrt(n)``."""
    L = math.log(p.n)
    m = p.n ** 0.5 / L
    if m <= 1:
        raise DomainError("B(n) needs sqrt(n) / ln n > 1")
    A = math.exp(-p.theta * math.log(L)) if p.theta else 1.0
    B = math.exp(-m * math.log1p(-1 / m))
    C = math.exp(p.n ** 0.5 * math.log1p(-p.n ** -0.5))
    return A, B, C


def find_N0(alpha: float, n_max: float = 1e8) -> int:
    """Smallest integer ``n`` from which the block-error exponent is negative.

    The bracket is bisected for its last sign change below ``n_max``; the
    result is then checked at log-spaced points up to ``n_max``.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie in (0, 1)")
    lo = max(2.0, (alpha * 1.0001) ** 4 + 1)
    grid = np.geomspace(lo, n_max, 400)
    vals = np.array([block_exponent_bracket(x, alpha) for x in grid])
    if vals[-1] <= 0:
        raise DomainError(f"bracket still non-positive at n={n_max:g}")
    neg = np.flatnonzero(vals <= 0)
    if neg.size == 0:
        return int(math.ceil(lo))
    i = int(neg[-1])
    root = brentq(lambda x: block_exponent_bracket(x, alpha), grid[i], grid[i + 1], xtol=1e-6)
    n0 = int(math.floor(root))
    while block_exponent_bracket(n0, alpha) <= 0:
        n0 += 1
    while n0 - 1 >= lo and block_exponent_bracket(n0 - 1, alpha) > 0:
        n0 -= 1
    return n0


_EVALUATORS = {
    "t": t_real,
    "t_b": t_burst,
    "q": chernoff_q,
    "q_simplified": chernoff_q_simplified,
    "P_b": block_error_bound,
    "A": lambda p: appendix_terms(p)[0],
    "B": lambda p: appendix_terms(p)[1],
    "C": lambda p: appendix_terms(p)[2],
    "s_outer": chernoff_s_outer,
    "s_inner": chernoff_s_inner,
}


def emit_bound_curves(alpha: float, n_grid, labels=("q_simplified", "P_b")) -> list[BoundCurve]:
    """Sample the named quantities on ``n_grid``.

    Grid points outside a formula's domain are recorded in
    ``BoundCurve.skipped`` instead of raising.
    """
    grid = [float(x) for x in n_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError("n grid must be sorted")
    curves = []
    for label in labels:
        if label not in _EVALUATORS:
            raise InvalidArgumentError(f"unknown curve label {label!r}")
        curve = BoundCurve(label)
        for n in grid:
            try:
                v = _EVALUATORS[label](BoundParams(n, alpha))
            except (DomainError, ValueError, ZeroDivisionError, OverflowError):
                curve.skipped.append(n)
                continue
            if math.isfinite(v):
                curve.samples.append((n, v))
            else:
                curve.skipped.append(n)
        curves.append(curve)
    return curves
