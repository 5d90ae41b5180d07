"""The weighted distance sum F_A(G) = sum_{i<j} d(i,j) * a[i][j] and its weight classes."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .graph_core import Graph, all_pairs_distances
from .spectra import check_symmetric

MAX_INT_WEIGHT = 10**6
FLOAT_ZERO_REL = 1e-15


class WeightError(ValueError):
    pass


class WeightClass(NamedTuple):
    nonnegative: bool
    in_N_n: bool
    positive_offdiag: bool


def as_weights(a) -> np.ndarray:
    """Validate a weight matrix: square, symmetric, bounded if integer.

    Integer input comes back as int64 (so F is exact); anything else as float64.
    """
    a = np.asarray(a)
    if a.dtype == bool or np.issubdtype(a.dtype, np.integer):
        a = a.astype(np.int64)
        if a.size and np.abs(a).max() > MAX_INT_WEIGHT:
            raise WeightError(f"integer weights must lie within +-{MAX_INT_WEIGHT}")
    else:
        a = a.astype(np.float64)
        if not np.all(np.isfinite(a)):
            raise WeightError("weights must be finite")
    try:
        return check_symmetric(a)
    except ValueError as exc:
        raise WeightError(str(exc)) from None


def is_exact(a: np.ndarray) -> bool:
    return np.issubdtype(a.dtype, np.integer)


def _scalar(v, exact: bool):
    return int(v) if exact else float(v)


@lru_cache(maxsize=None)
def _triu(n: int):
    return np.triu_indices(n, 1)


def evaluate_F(d, a):
    """Sum of d[i][j] * a[i][j] over unordered pairs; the diagonal of ``a`` is ignored.

    Equals the l1 norm of the Hadamard product of ``a`` and ``d`` over the
    upper triangle. Exact (a Python int) for integer weights.
    """
    d = np.asarray(d)
    a = as_weights(a)
    if d.shape != a.shape:
        raise WeightError(f"order mismatch: distances {d.shape} vs weights {a.shape}")
    iu = _triu(a.shape[0])
    return _scalar((d[iu].astype(a.dtype) * a[iu]).sum(), is_exact(a))


def F_of_graph(g: Graph, a):
    return evaluate_F(all_pairs_distances(g), a)


def _zero_mask(a: np.ndarray) -> np.ndarray:
    if is_exact(a):
        return a == 0
    scale = np.abs(a).max() if a.size else 0.0
    return np.abs(a) <= FLOAT_ZERO_REL * scale


def classify_weights(a) -> WeightClass:
    """Flags for the three hypothesis classes.

    ``in_N_n`` means nonnegative with at most one zero off-diagonal entry per row.
    """
    a = as_weights(a)
    n = a.shape[0]
    off = ~np.eye(n, dtype=bool)
    zero = _zero_mask(a) & off
    nonneg = bool(np.all((a >= 0) | zero))
    zeros_per_row = zero.sum(axis=1)
    in_N = nonneg and bool(np.all(zeros_per_row <= 1))
    positive = bool(np.all((a > 0) & ~zero | ~off))
    return WeightClass(nonneg, in_N, positive)


RANK_ONE_KINDS = ("product", "square_sum", "square_diff")


def rank_one_weights(x, kind: str) -> np.ndarray:
    """Weights x_i x_j, (x_i + x_j)^2 or (x_i - x_j)^2 with a zero diagonal."""
    x = np.asarray(x, dtype=np.float64)
    if kind == "product":
        a = np.outer(x, x)
    elif kind == "square_sum":
        a = np.add.outer(x, x) ** 2
    elif kind == "square_diff":
        a = np.subtract.outer(x, x) ** 2
    else:
        raise ValueError(f"unknown rank-one kind {kind!r}; expected one of {RANK_ONE_KINDS}")
    np.fill_diagonal(a, 0.0)
    return a


def read_weights_csv(text: str) -> np.ndarray:
    rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
    cells = [[c.strip() for c in r.split(",")] for r in rows]
    n = len(cells)
    if any(len(r) != n for r in cells):
        raise WeightError(f"weights CSV must be {n}x{n}")
    try:
        a = np.array([[int(c) for c in r] for r in cells], dtype=np.int64)
    except ValueError:
        try:
            a = np.array([[float(c) for c in r] for r in cells], dtype=np.float64)
        except ValueError as exc:
            raise WeightError(f"non-numeric weight: {exc}") from None
    return as_weights(a)
