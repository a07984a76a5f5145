"""Equality-constrained l1 minimisation by linear programming.

``l1_min_eq`` solves ``min ||x||_1 s.t. H x = s`` through the split
``x = u - v`` with ``u, v >= 0``, handed to a dense revised primal simplex.
``l0_min_eq`` is the exhaustive sparsest-solution oracle used to check it on
small instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidArgumentError, ResourceError
from .matgen import CodeSpec, code_matrices

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration-limit"
UNBOUNDED = "unbounded"

# refactor the basis inverse from scratch this often
_REFACTOR_EVERY = 50
# consecutive degenerate pivots before Dantzig pricing gives way to Bland
_STALL_LIMIT = 20

L0_MAX_COLUMNS = 32
L0_MAX_SUPPORT = 4


class LPResult(NamedTuple):
    x: np.ndarray
    objective: float
    status: str
    iterations: int


def _crash_basis(A: np.ndarray) -> np.ndarray:
    """Pick a unit column for every row that has one; -1 where none exists."""
    m = A.shape[0]
    basis = np.full(m, -1, dtype=np.intp)
    nnz = np.count_nonzero(A, axis=0)
    for j in np.flatnonzero(nnz == 1):
        i = int(np.flatnonzero(A[:, j])[0])
        if basis[i] < 0 and A[i, j] == 1.0:
            basis[i] = j
    return basis


def _run_simplex(A, b, c, basis, rule, max_iter, tol, allowed=None):
    """Revised simplex from a feasible basis.  Mutates ``basis`` in place."""
    m = A.shape[0]
    binv = np.linalg.inv(A[:, basis])
    xB = binv @ b
    stalled = 0
    for it in range(max_iter):
        if it and it % _REFACTOR_EVERY == 0:
            binv = np.linalg.inv(A[:, basis])
            xB = binv @ b
        y = c[basis] @ binv
        d = c - y @ A
        d[basis] = 0.0
        if allowed is not None:
            d[~allowed] = 0.0
        if rule == "bland" or stalled >= _STALL_LIMIT:
            cand = np.flatnonzero(d < -tol)
            if cand.size == 0:
                return OPTIMAL, it
            j = int(cand[0])
        else:
            j = int(np.argmin(d))
            if d[j] >= -tol:
                return OPTIMAL, it
        u = binv @ A[:, j]
        rows = np.flatnonzero(u > tol)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = np.maximum(xB[rows], 0.0) / u[rows]
        rmin = ratios.min()
        ties = rows[ratios <= rmin + tol * max(1.0, rmin)]
        leave = int(ties[np.argmin(basis[ties])])
        step = max(xB[leave], 0.0) / u[leave]
        stalled = stalled + 1 if step <= tol else 0
        xB -= step * u
        xB[leave] = step
        pivot_row = binv[leave] / u[leave]
        binv -= np.outer(u, pivot_row)
        binv[leave] = pivot_row
        basis[leave] = j
    return ITERATION_LIMIT, max_iter


def simplex(c, A_eq, b_eq, *, rule: str = "dantzig", max_iter: int | None = None,
            tol: float = 1e-9) -> LPResult:
    """Minimise ``c @ z`` subject to ``A_eq @ z == b_eq`` and ``z >= 0``.

    Two-phase revised simplex on dense arrays.  ``rule`` is ``"bland"``
    (smallest eligible index) or ``"dantzig"`` (most negative reduced cost,
    falling back to Bland after a run of degenerate pivots).  Ties are
    always broken by the smallest index, so results are deterministic.
    """
    if rule not in ("dantzig", "bland"):
        raise InvalidArgumentError(f"unknown pivot rule {rule!r}")
    c = np.asarray(c, dtype=float)
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise InvalidArgumentError("inconsistent LP dimensions")
    if max_iter is None:
        max_iter = 50 * (m + n)

    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    basis = _crash_basis(A)
    missing = np.flatnonzero(basis < 0)
    iters = 0
    if missing.size:
        art = np.zeros((m, missing.size))
        art[missing, np.arange(missing.size)] = 1.0
        A1 = np.hstack([A, art])
        basis[missing] = n + np.arange(missing.size)
        c1 = np.concatenate([np.zeros(n), np.ones(missing.size)])
        status, iters = _run_simplex(A1, b, c1, basis, "bland", max_iter, tol)
        if status != OPTIMAL:
            return LPResult(np.zeros(n), math.nan, status, iters)
        xB = np.linalg.solve(A1[:, basis], b)
        if xB[basis >= n].sum() > tol * max(1.0, np.abs(b).max()) * m:
            return LPResult(np.zeros(n), math.nan, INFEASIBLE, iters)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = np.ones(m, dtype=bool)
        for pos in np.flatnonzero(basis >= n):
            binv = np.linalg.inv(A1[:, basis])
            row = binv[pos] @ A
            row[basis[basis < n]] = 0.0
            cand = np.flatnonzero(np.abs(row) > 1e-9)
            if cand.size:
                basis[pos] = cand[0]
            else:
                keep[pos] = False
        if not keep.all():
            A, b, basis = A[keep], b[keep], basis[keep]

    status, it2 = _run_simplex(A, b, c, basis, rule, max_iter - iters, tol)
    iters += it2
    if status != OPTIMAL:
        return LPResult(np.zeros(n), math.nan, status, iters)
    x = np.zeros(n)
    x[basis] = np.maximum(np.linalg.solve(A[:, basis], b), 0.0)
    return LPResult(x, float(c @ x), OPTIMAL, iters)


@dataclass(frozen=True)
class L1Problem:
    constraint_matrix: np.ndarray = field(repr=False)
    syndrome: np.ndarray = field(repr=False)
    feasibility_tolerance: float = 1e-9
    zero_threshold: float = 1e-6

    def __post_init__(self):
        H = np.asarray(self.constraint_matrix, dtype=float)
        s = np.asarray(self.syndrome, dtype=float).reshape(-1)
        if H.ndim != 2 or H.shape[0] != s.shape[0]:
            raise InvalidArgumentError(
                f"constraint matrix {H.shape} does not match syndrome length {s.shape[0]}")
        if not np.all(np.isfinite(s)):
            raise InvalidArgumentError("syndrome must be finite")
        if not 0 < self.feasibility_tolerance < self.zero_threshold:
            raise InvalidArgumentError("need 0 < feasibility_tolerance < zero_threshold")
        object.__setattr__(self, "constraint_matrix", H)
        object.__setattr__(self, "syndrome", s)


@dataclass
class L1Solution:
    x: np.ndarray
    objective: float
    support: tuple[int, ...]
    status: str
    iterations: int = 0


def _finish(problem: L1Problem, x: np.ndarray, status: str, iterations: int) -> L1Solution:
    if status == OPTIMAL:
        resid = np.max(np.abs(problem.constraint_matrix @ x - problem.syndrome), initial=0.0)
        if resid > problem.feasibility_tolerance:
            status = INFEASIBLE
    support = tuple(int(i) for i in np.flatnonzero(np.abs(x) > problem.zero_threshold))
    return L1Solution(x, float(np.abs(x).sum()), support, status, iterations)


def l1_min_eq(problem: L1Problem, *, rule: str = "dantzig",
              max_iter: int | None = None) -> L1Solution:
    """Minimum-l1 solution of ``H x = s``.

    A non-optimal status (iteration limit, infeasible) is reported on the
    solution, with ``x`` set to zero; it never raises.
    """
    H = problem.constraint_matrix
    N = H.shape[1]
    res = simplex(np.ones(2 * N), np.hstack([H, -H]), problem.syndrome,
                  rule=rule, max_iter=max_iter)
    x = res.x[:N] - res.x[N:]
    return _finish(problem, x, res.status, res.iterations)


def l0_min_eq(problem: L1Problem, max_support: int) -> L1Solution:
    """Sparsest solution of ``H x = s`` with at most ``max_support`` nonzeros.

    Supports are tried by increasing size, in lexicographic order within a
    size; the first whose least-squares residual is within the feasibility
    tolerance wins.
    """
    H = problem.constraint_matrix
    s = problem.syndrome
    N = H.shape[1]
    if N > L0_MAX_COLUMNS or max_support > L0_MAX_SUPPORT:
        raise ResourceError(
            f"l0 search limited to {L0_MAX_COLUMNS} columns and support {L0_MAX_SUPPORT}")
    tol = problem.feasibility_tolerance
    if np.max(np.abs(s), initial=0.0) <= tol:
        return _finish(problem, np.zeros(N), OPTIMAL, 0)
    tried = 0
    for size in range(1, max_support + 1):
        for cols in itertools.combinations(range(N), size):
            tried += 1
            sub = H[:, cols]
            coef, *_ = np.linalg.lstsq(sub, s, rcond=None)
            if np.max(np.abs(sub @ coef - s)) <= tol:
                x = np.zeros(N)
                x[list(cols)] = coef
                return _finish(problem, x, OPTIMAL, tried)
    return L1Solution(np.zeros(N), math.nan, (), INFEASIBLE, tried)


def solutions_agree(a: L1Solution, b: L1Solution, zero_threshold: float) -> bool:
    return (a.status == b.status == OPTIMAL and a.support == b.support
            and np.max(np.abs(a.x - b.x), initial=0.0) <= zero_threshold)


def p0_p1_equivalence_check(spec: CodeSpec, trials: int, seed: int,
                            support_size: int | None = None) -> float:
    """Fraction of random sparse errors where the l1 and l0 solutions agree.

    Supports of ``support_size`` (default: the guaranteed per-word
    capacity) are drawn uniformly with standard-normal magnitudes; trial
    ``i`` uses the generator seeded by ``(seed, i)``.
    """
    if spec.N > 16:
        raise InvalidArgumentError("equivalence check is limited to N <= 16")
    if trials < 1:
        raise InvalidArgumentError("trials must be positive")
    c = spec.guaranteed_t_word if support_size is None else support_size
    H, _ = code_matrices(spec)
    agree = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        e = np.zeros(spec.N)
        idx = rng.choice(spec.N, size=c, replace=False)
        e[idx] = rng.standard_normal(c)
        prob = L1Problem(H, H @ e)
        if solutions_agree(l1_min_eq(prob), l0_min_eq(prob, max(c, 1)), prob.zero_threshold):
            agree += 1
    return agree / trials
