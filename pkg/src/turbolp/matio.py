"""Plain-text matrix format.

The first line holds ``rows cols``; each following line is one row of
whitespace-separated decimals written with 17 significant digits.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .exceptions import InvalidArgumentError


def format_matrix(A) -> str:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2:
        raise InvalidArgumentError("only 2-D arrays can be written")
    buf = io.StringIO()
    buf.write(f"{A.shape[0]} {A.shape[1]}\n")
    for row in A:
        buf.write(" ".join(f"{v:.17g}" for v in row))
        buf.write("\n")
    return buf.getvalue()


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidArgumentError("empty matrix text")
    try:
        rows, cols = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise InvalidArgumentError(f"bad header line {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise InvalidArgumentError(f"header says {rows} rows, found {len(lines) - 1}")
    A = np.empty((rows, cols))
    for i, ln in enumerate(lines[1:]):
        vals = ln.split()
        if len(vals) != cols:
            raise InvalidArgumentError(f"row {i} has {len(vals)} entries, expected {cols}")
        A[i] = [float(v) for v in vals]
    return A


def write_matrix(path: str | os.PathLike, A) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(A))


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read())
