"""Analog product code ``Y = G M G^T + E`` and its two-step l1 decoder.

Decoding runs one outer pass over the ``N`` rows of ``Y`` and one inner pass
over the ``K`` columns of the projected matrix ``(Y - E_hat) G``.  A row that
the outer pass gets wrong only spoils the same row of the projection, so the
inner pass sees at most one error per column for every such row.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidArgumentError
from .l1lp import OPTIMAL, L1Problem, l1_min_eq
from .matgen import CodeSpec, code_matrices

ZERO_THRESHOLD = 1e-6

__all__ = [
    "ProductCodeword",
    "ErrorMatrix",
    "SyndromePair",
    "DecodeReport",
    "encode",
    "compute_syndromes",
    "decode_outer",
    "project_inner",
    "decode_inner",
    "recover_message",
    "turbo_decode",
    "burst_corrupt",
    "burst_length",
    "random_errors",
]


@dataclass(frozen=True)
class ProductCodeword:
    Y: np.ndarray = field(repr=False)
    spec: CodeSpec

    def __post_init__(self):
        Y = np.asarray(self.Y, dtype=float)
        if Y.shape != (self.spec.N, self.spec.N):
            raise InvalidArgumentError(f"codeword must be {self.spec.N}x{self.spec.N}, got {Y.shape}")
        object.__setattr__(self, "Y", Y)

    def __add__(self, other):
        E = other.E if isinstance(other, ErrorMatrix) else np.asarray(other, dtype=float)
        return ProductCodeword(self.Y + E, self.spec)


@dataclass(frozen=True)
class ErrorMatrix:
    E: np.ndarray = field(repr=False)

    @property
    def support(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in zip(*np.nonzero(self.E))}

    @property
    def l0(self) -> int:
        return int(np.count_nonzero(self.E))


@dataclass(frozen=True)
class SyndromePair:
    S_row: np.ndarray
    S_col: np.ndarray


@dataclass
class DecodeReport:
    M_hat: np.ndarray = field(repr=False)
    E_hat_outer: np.ndarray = field(repr=False)
    E_check_inner: np.ndarray = field(repr=False)
    E_total: np.ndarray = field(repr=False)
    row_failures: list[int]
    column_failures: list[int]
    residual_max: float
    success: bool
    stage_times_ms: dict[str, float]
    error_max: float | None = None
    message_error_max: float | None = None

    def to_dict(self) -> dict:
        d = {
            "success": self.success,
            "row_failures": self.row_failures,
            "column_failures": self.column_failures,
            "residual_max": self.residual_max,
            "stage_times_ms": self.stage_times_ms,
        }
        if self.error_max is not None:
            d["error_max"] = self.error_max
        if self.message_error_max is not None:
            d["message_error_max"] = self.message_error_max
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def encode(M, spec: CodeSpec) -> ProductCodeword:
    """Product-encode a ``K x K`` message: columns by ``G``, then rows by ``G``."""
    M = np.asarray(M, dtype=float)
    if M.shape != (spec.K, spec.K):
        raise InvalidArgumentError(f"message must be {spec.K}x{spec.K}, got {M.shape}")
    _, G = code_matrices(spec)
    return ProductCodeword(G @ M @ G.T, spec)


def compute_syndromes(cw: ProductCodeword) -> SyndromePair:
    H, _ = code_matrices(cw.spec)
    return SyndromePair(S_row=H @ cw.Y.T, S_col=H @ cw.Y)


def _decode_words(words: np.ndarray, spec: CodeSpec, zero_threshold: float):
    """l1-decode each column of ``words`` (shape ``N x m``) independently.

    Returns the error estimates (same shape) and the indices of words whose
    LP did not finish or whose support exceeds the per-word guarantee.
    """
    H, _ = code_matrices(spec)
    S = H @ words
    cap = spec.guaranteed_t_word
    est = np.zeros_like(words)
    failures = []
    for j in range(words.shape[1]):
        sol = l1_min_eq(L1Problem(H, S[:, j], zero_threshold=zero_threshold))
        if sol.status == OPTIMAL:
            est[:, j] = sol.x
            if len(sol.support) > cap:
                failures.append(j)
        else:
            failures.append(j)
    return est, failures


def decode_outer(cw: ProductCodeword, zero_threshold: float = ZERO_THRESHOLD):
    """Row-by-row l1 decoding.  Returns ``(E_hat, row_failures)``.

    Rows whose LP hits a non-optimal status are left at zero; rows decoded
    beyond the guarantee keep whatever the LP returned.
    """
    est, failures = _decode_words(cw.Y.T, cw.spec, zero_threshold)
    return est.T, failures


def project_inner(cw: ProductCodeword, E_hat) -> np.ndarray:
    """Least-squares solution of ``M_tilde G^T = Y - E_hat``, i.e. ``(Y - E_hat) G``."""
    _, G = code_matrices(cw.spec)
    return (cw.Y - np.asarray(E_hat, dtype=float)) @ G


def decode_inner(M_tilde_hat, spec: CodeSpec, zero_threshold: float = ZERO_THRESHOLD):
    """Column-by-column l1 decoding of the projected ``N x K`` matrix.

    Returns ``(E_check, column_failures)``.
    """
    M_tilde_hat = np.asarray(M_tilde_hat, dtype=float)
    if M_tilde_hat.shape != (spec.N, spec.K):
        raise InvalidArgumentError(f"expected {spec.N}x{spec.K}, got {M_tilde_hat.shape}")
    return _decode_words(M_tilde_hat, spec, zero_threshold)


def recover_message(M_tilde_hat, E_check, spec: CodeSpec) -> np.ndarray:
    _, G = code_matrices(spec)
    return G.T @ (np.asarray(M_tilde_hat, dtype=float) - np.asarray(E_check, dtype=float))


def turbo_decode(cw: ProductCodeword, *, true_error=None, true_message=None,
                 zero_threshold: float = ZERO_THRESHOLD) -> DecodeReport:
    """Outer row pass, projection, inner column pass, message recovery.

    ``success`` requires the reconstruction ``G M_hat G^T + E_total`` to
    reproduce ``Y`` and, when the injected error and/or message are
    supplied, to match them within ``zero_threshold`` (max-abs).  Without
    a reference it instead requires an empty ``column_failures``.
    Decoding failures never raise.
    """
    spec = cw.spec
    _, G = code_matrices(spec)

    t0 = time.perf_counter()
    E_hat, row_fail = decode_outer(cw, zero_threshold)
    t1 = time.perf_counter()
    M_tilde_hat = project_inner(cw, E_hat)
    E_check, col_fail = decode_inner(M_tilde_hat, spec, zero_threshold)
    t2 = time.perf_counter()
    M_hat = recover_message(M_tilde_hat, E_check, spec)
    E_total = cw.Y - G @ M_hat @ G.T
    t3 = time.perf_counter()
    times = {"outer": (t1 - t0) * 1e3, "inner": (t2 - t1) * 1e3, "recover": (t3 - t2) * 1e3}

    residual = float(np.max(np.abs(cw.Y - (G @ M_hat @ G.T + E_total))))
    success = bool(np.all(np.isfinite(M_hat))) and residual <= zero_threshold
    if true_error is None and true_message is None:
        # no reference: trust the inner pass only if every column stayed within capacity
        success = success and not col_fail
    error_max = message_error_max = None
    if true_error is not None:
        Etrue = true_error.E if isinstance(true_error, ErrorMatrix) else np.asarray(true_error)
        error_max = float(np.max(np.abs(E_total - Etrue)))
        success = success and error_max <= zero_threshold
    if true_message is not None:
        message_error_max = float(np.max(np.abs(M_hat - np.asarray(true_message))))
        success = success and message_error_max <= zero_threshold

    return DecodeReport(
        M_hat=M_hat,
        E_hat_outer=E_hat,
        E_check_inner=E_check,
        E_total=E_total,
        row_failures=row_fail,
        column_failures=col_fail,
        residual_max=residual,
        success=success,
        stage_times_ms=times,
        error_max=error_max,
        message_error_max=message_error_max,
    )


def burst_length(spec: CodeSpec) -> int:
    """Integer burst size ``N (c - 1) + 2 c + 1`` with ``c`` the per-word capacity."""
    c = spec.guaranteed_t_word
    return spec.N * (c - 1) + 2 * c + 1


def burst_corrupt(spec: CodeSpec, start: int, length: int, seed: int) -> ErrorMatrix:
    """Standard-normal errors on ``length`` consecutive row-major cells from ``start``."""
    n = spec.n
    if start < 0 or length < 0 or start + length > n:
        raise InvalidArgumentError(f"burst [{start}, {start + length}) outside block of {n}")
    rng = np.random.default_rng(seed)
    e = np.zeros(n)
    e[start:start + length] = rng.standard_normal(length)
    return ErrorMatrix(e.reshape(spec.N, spec.N))


def random_errors(spec: CodeSpec, t: int, rng: np.random.Generator) -> ErrorMatrix:
    """``t`` uniformly placed standard-normal errors in the ``N x N`` block."""
    if not 0 <= t <= spec.n:
        raise InvalidArgumentError(f"error count must lie in [0, {spec.n}], got {t}")
    e = np.zeros(spec.n)
    idx = rng.choice(spec.n, size=t, replace=False)
    e[idx] = rng.standard_normal(t)
    return ErrorMatrix(e.reshape(spec.N, spec.N))


def fit_power_law(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return math.nan
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
