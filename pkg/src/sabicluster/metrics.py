"""Correlation-based bicluster quality: Pearson, ACV, fitness, overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .bicluster import Bicluster, BiclusterScore, cells, submatrix
from .errors import ContractError, DegenerateBiclusterError, DimensionError, EmptyInputError

DEFAULT_DELTA = 0.93

UNDEFINED = math.nan


def is_undefined(r: float) -> bool:
    return math.isnan(r)


@dataclass(frozen=True)
class AcvThreshold:
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if not (0.0 < self.delta <= 1.0):
            raise ContractError(f"ACV threshold must lie in (0, 1], got {self.delta}")

    def __float__(self):
        return float(self.delta)


def _delta(threshold) -> float:
    # Bare floats may be 0 (every 2x2+ selection feasible); AcvThreshold may not.
    d = float(threshold)
    if not (0.0 <= d <= 1.0):
        raise ContractError(f"ACV threshold must lie in [0, 1], got {d}")
    return d


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation, or ``UNDEFINED`` (nan) when either vector is constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionError(f"vectors must have equal 1-d shape, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise DimensionError("need at least 2 observations")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return UNDEFINED
    # dividing by the range keeps tiny spreads from underflowing when squared
    xc = (x - x.mean()) / np.ptp(x)
    yc = (y - y.mean()) / np.ptp(y)
    r = float(xc @ yc / math.sqrt(float(xc @ xc) * float(yc @ yc)))
    return max(-1.0, min(1.0, r))


def _unit_rows(x: np.ndarray) -> np.ndarray:
    """Centre and scale each row to unit length; constant rows become zero."""
    spread = x.max(axis=1) - x.min(axis=1)
    flat = spread == 0
    spread[flat] = 1.0
    # dividing by the range keeps tiny spreads from underflowing when squared
    xc = (x - x.sum(axis=1, keepdims=True) / x.shape[1]) / spread[:, None]
    norms = np.sqrt((xc * xc).sum(axis=1))
    norms[flat] = 1.0
    z = xc / norms[:, None]
    z[flat] = 0.0
    return z


def mean_abs_correlation(x: np.ndarray) -> float:
    """Mean |r| over ordered pairs of distinct rows of ``x``.

    Equals ``(sum_ij |r_ij| - n) / (n^2 - n)`` with the diagonal taken as 1;
    pairs involving a constant row count as 0.
    """
    n = x.shape[0]
    z = _unit_rows(x)
    g = np.abs(z @ z.T)
    off = float(g.sum() - np.trace(g))
    return min(1.0, max(0.0, off / (n * n - n)))


def acv_values(x: np.ndarray) -> float:
    """ACV of a dense block: the larger of the row-wise and column-wise term."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise DegenerateBiclusterError(f"ACV needs at least 2x2, got shape {x.shape}")
    return max(mean_abs_correlation(x), mean_abs_correlation(x.T))


def acv(b: Bicluster) -> float:
    if b.n_rows < 2 or b.n_cols < 2:
        raise DegenerateBiclusterError(
            f"ACV needs at least 2 rows and 2 columns, got {b.n_rows}x{b.n_cols}"
        )
    return acv_values(submatrix(b))


def fitness_values(
    values: np.ndarray,
    row_mask: np.ndarray,
    col_mask: np.ndarray,
    delta: float,
    min_rows: int = 2,
    min_cols: int = 2,
) -> float:
    """Fitness straight from masks; the search loops call this."""
    nr = int(np.count_nonzero(row_mask))
    nc = int(np.count_nonzero(col_mask))
    if nr < max(2, min_rows) or nc < max(2, min_cols):
        return 0.0
    x = values[np.ix_(row_mask, col_mask)]
    # ACV is the max of the two terms, so the second is only needed if the first falls short
    if mean_abs_correlation(x) >= delta or mean_abs_correlation(x.T) >= delta:
        return float(nr * nc)
    return 0.0


def fitness(
    b: Bicluster,
    threshold: AcvThreshold | float = DEFAULT_DELTA,
    min_rows: int = 2,
    min_cols: int = 2,
) -> float:
    """Volume when ACV clears the threshold, else 0.

    Selections smaller than ``min_rows x min_cols`` (never less than 2x2) score 0.
    Raising the minimum keeps out 2-wide selections, whose Pearson terms are
    identically +-1 and so always clear any threshold.
    """
    if b.source is None:
        raise ContractError("bicluster is not bound to a matrix")
    return fitness_values(
        b.source.values, b.row_mask, b.col_mask, _delta(threshold), min_rows, min_cols
    )


def score(
    b: Bicluster,
    threshold: AcvThreshold | float = DEFAULT_DELTA,
    min_rows: int = 2,
    min_cols: int = 2,
) -> BiclusterScore:
    d = _delta(threshold)
    if b.n_rows < 2 or b.n_cols < 2:
        return BiclusterScore(acv=None, volume=b.volume, fitness=0.0)
    a = acv(b)
    big_enough = b.n_rows >= min_rows and b.n_cols >= min_cols
    return BiclusterScore(
        acv=a, volume=b.volume, fitness=float(b.volume) if a >= d and big_enough else 0.0
    )


def pair_overlap(a: Bicluster, b: Bicluster) -> float:
    """Shared cells over the smaller bicluster's cell count (0 if either is empty)."""
    small = min(a.volume, b.volume)
    if small == 0:
        return 0.0
    shared = int(np.count_nonzero(a.row_mask & b.row_mask)) * int(
        np.count_nonzero(a.col_mask & b.col_mask)
    )
    return shared / small


def overlapping_degree(bs: Sequence[Bicluster]) -> float:
    """Mean pairwise overlap across all unordered pairs; 0 for a single bicluster."""
    if len(bs) == 0:
        raise EmptyInputError("overlapping degree of an empty list")
    if len(bs) == 1:
        return 0.0
    vals = [pair_overlap(a, b) for a, b in combinations(bs, 2)]
    return math.fsum(vals) / len(vals)


def cell_overlap(a: Bicluster, b: Bicluster) -> float:
    """Same quantity as :func:`pair_overlap` computed from explicit cell sets."""
    ca, cb = cells(a), cells(b)
    small = min(len(ca), len(cb))
    return len(ca & cb) / small if small else 0.0
