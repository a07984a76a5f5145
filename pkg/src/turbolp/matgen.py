"""Dictionaries and generators for the Identity+Hadamard analog code.

The inner code has word length ``N`` and rate 1/2.  Its parity check is
``H = [I_r | Phi]`` with ``Phi = Hadamard(r) / sqrt(r)`` and ``r = N / 2``;
the generator ``G = [-Phi; I_r] / sqrt(2)`` has orthonormal columns and
satisfies ``H @ G == 0``.

Spark and cospark are computed by exhaustive search and are only meant as
small-scale oracles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import InvalidArgumentError, ResourceError

DEFAULT_ALPHA = 0.65
# max column count (spark) / row count (cospark) for the exhaustive oracles
ORACLE_BUDGET = 24

__all__ = [
    "CodeSpec",
    "ParityCheck",
    "Generator",
    "build_hadamard",
    "build_parity_check",
    "build_generator",
    "coherence",
    "spark_bruteforce",
    "cospark_bruteforce",
    "is_power_of_two",
]


def is_power_of_two(x: int) -> bool:
    return isinstance(x, (int, np.integer)) and x > 0 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class CodeSpec:
    """Sizes of the rate-1/2 inner code and of its product code.

    Parameters
    ----------
    N : int
        Inner word length, ``N = 2 * 2**m``.
    alpha : float
        Correction-rate constant used by the analytic bounds.
    """

    N: int
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 2 or not is_power_of_two(self.N):
            raise InvalidArgumentError(f"word length must be 2 * 2**m, got {self.N!r}")
        if not 0 < self.alpha <= 1:
            raise InvalidArgumentError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def K(self) -> int:
        return self.N // 2

    @property
    def r(self) -> int:
        return self.N // 2

    @property
    def n(self) -> int:
        return self.N * self.N

    @property
    def k(self) -> int:
        return self.K * self.K

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def guaranteed_t_word(self) -> int:
        """Errors per word that l1 decoding always corrects, ``floor((sqrt(2)-1/2) sqrt(r))``."""
        # the coherence of H is exactly 1/sqrt(r)
        return int(math.floor((math.sqrt(2) - 0.5) * math.sqrt(self.r)))


@dataclass(frozen=True)
class ParityCheck:
    entries: np.ndarray = field(repr=False)
    column_norm_tolerance: float = 1e-12

    @property
    def r(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @property
    def phi(self) -> np.ndarray:
        """Right (scaled Hadamard) block."""
        return self.entries[:, self.r:]


@dataclass(frozen=True)
class Generator:
    entries: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    @property
    def K(self) -> int:
        return self.entries.shape[1]


def build_hadamard(order: int) -> np.ndarray:
    """Sylvester Hadamard matrix of the given power-of-two order, as int64.

    >>> build_hadamard(2)
    array([[ 1,  1],
           [ 1, -1]])
    """
    if not is_power_of_two(order):
        raise InvalidArgumentError(f"Hadamard order must be a power of two, got {order!r}")
    W = np.ones((1, 1), dtype=np.int64)
    while W.shape[0] < order:
        W = np.block([[W, W], [W, -W]])
    return W


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def _parity_entries(r: int) -> np.ndarray:
    phi = build_hadamard(r) / math.sqrt(r)
    return _readonly(np.hstack([np.eye(r), phi]))


def build_parity_check(spec: CodeSpec) -> ParityCheck:
    """Identity+Hadamard dictionary ``[I_r | Hadamard(r)/sqrt(r)]``."""
    return ParityCheck(_parity_entries(spec.r))


def build_generator(pc: ParityCheck) -> Generator:
    """Orthonormal generator ``[-Phi; I] / sqrt(2)`` spanning the kernel of ``pc``."""
    r = pc.r
    phi = pc.phi
    G = np.vstack([-phi, np.eye(r)]) / math.sqrt(2)
    return Generator(_readonly(G))


@lru_cache(maxsize=None)
def code_matrices(spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cached ``(H, G)`` arrays for ``spec``."""
    pc = build_parity_check(spec)
    return pc.entries, build_generator(pc).entries


def coherence(pc: ParityCheck) -> float:
    """Largest ``|<e_i, phi_j>|`` between the identity and Hadamard blocks."""
    # <e_i, phi_j> is just Phi[i, j]
    return float(np.max(np.abs(pc.phi)))


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InvalidArgumentError("expected a 2-D matrix")
    return A


def spark_bruteforce(A, tol: float = 1e-9) -> float:
    """Smallest number of linearly dependent columns of ``A``.

    Returns ``math.inf`` when the columns are linearly independent.
    """
    A = _as_matrix(A)
    ncols = A.shape[1]
    if ncols > ORACLE_BUDGET:
        raise ResourceError(f"spark search limited to {ORACLE_BUDGET} columns, got {ncols}")
    rank = np.linalg.matrix_rank(A, tol=tol)
    if rank == ncols:
        return math.inf
    for size in range(1, rank + 2):
        for cols in itertools.combinations(range(ncols), size):
            if np.linalg.matrix_rank(A[:, cols], tol=tol) < size:
                return size
    raise AssertionError("unreachable: rank + 1 columns are always dependent")


def cospark_bruteforce(A, tol: float = 1e-9) -> int:
    """Minimum of ``||A x||_0`` over nonzero ``x`` for full-column-rank ``A``.

    A minimiser vanishes on a row set of rank ``k - 1``, so it suffices to
    take the kernel vector of every ``(k-1)``-row subset of full rank.
    """
    A = _as_matrix(A)
    m, k = A.shape
    if m > ORACLE_BUDGET:
        raise ResourceError(f"cospark search limited to {ORACLE_BUDGET} rows, got {m}")
    if np.linalg.matrix_rank(A, tol=tol) < k:
        raise InvalidArgumentError("cospark requires full column rank")
    scale = max(1.0, float(np.max(np.abs(A))))
    if k == 1:
        return int(np.count_nonzero(np.abs(A[:, 0]) > tol * scale))
    best = m
    for rows in itertools.combinations(range(m), k - 1):
        _, sv, vt = np.linalg.svd(A[list(rows), :])
        if sv[-1] <= tol * scale:
            continue
        x = vt[-1]
        y = A @ x
        best = min(best, int(np.count_nonzero(np.abs(y) > tol * scale)))
    return best
