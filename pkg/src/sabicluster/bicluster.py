"""Bicluster encoding: a flat binary string over rows then columns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ContractError, EmptySelectionError
from .usage import SessionPageMatrix


def make_rng(seed: int) -> np.random.Generator:
    """All randomness in the package goes through PCG64 so seeds are portable."""
    return np.random.Generator(np.random.PCG64(seed))


def _as_mask(bits, length: int | None = None) -> np.ndarray:
    mask = np.array(bits, dtype=bool).reshape(-1)
    if length is not None and mask.size != length:
        raise ContractError(f"mask has length {mask.size}, expected {length}")
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True, eq=False)
class Bicluster:
    """Row and column membership masks over ``source``.

    Instances are immutable. ``source`` may be ``None`` for a bare encoding
    that has not been bound to a matrix yet (see :meth:`bind`).
    """

    row_mask: np.ndarray
    col_mask: np.ndarray
    source: SessionPageMatrix | None = None

    def __post_init__(self):
        if self.source is not None:
            n, m = self.source.shape
        else:
            n = m = None
        object.__setattr__(self, "row_mask", _as_mask(self.row_mask, n))
        object.__setattr__(self, "col_mask", _as_mask(self.col_mask, m))

    @classmethod
    def from_encoding(cls, bits, n_rows: int, source: SessionPageMatrix | None = None) -> "Bicluster":
        bits = np.asarray(bits, dtype=bool).reshape(-1)
        return cls(bits[:n_rows], bits[n_rows:], source)

    @classmethod
    def from_indices(
        cls, rows: Iterable[int], cols: Iterable[int], source: SessionPageMatrix
    ) -> "Bicluster":
        n, m = source.shape
        rm = np.zeros(n, dtype=bool)
        cm = np.zeros(m, dtype=bool)
        rm[list(rows)] = True
        cm[list(cols)] = True
        return cls(rm, cm, source)

    @classmethod
    def full(cls, source: SessionPageMatrix) -> "Bicluster":
        n, m = source.shape
        return cls(np.ones(n, bool), np.ones(m, bool), source)

    def bind(self, source: SessionPageMatrix) -> "Bicluster":
        return Bicluster(self.row_mask, self.col_mask, source)

    @property
    def encoding(self) -> np.ndarray:
        return np.concatenate([self.row_mask, self.col_mask])

    @property
    def rows(self) -> np.ndarray:
        return np.flatnonzero(self.row_mask)

    @property
    def cols(self) -> np.ndarray:
        return np.flatnonzero(self.col_mask)

    @property
    def n_rows(self) -> int:
        return int(self.row_mask.sum())

    @property
    def n_cols(self) -> int:
        return int(self.col_mask.sum())

    @property
    def volume(self) -> int:
        return self.n_rows * self.n_cols

    def __eq__(self, other):
        if not isinstance(other, Bicluster):
            return NotImplemented
        return (
            np.array_equal(self.row_mask, other.row_mask)
            and np.array_equal(self.col_mask, other.col_mask)
        )

    def __hash__(self):
        return hash((self.row_mask.tobytes(), self.col_mask.tobytes()))

    def __repr__(self):
        return f"Bicluster(rows={self.rows.tolist()}, cols={self.cols.tolist()})"


@dataclass(frozen=True)
class BiclusterScore:
    acv: float | None  # None for selections under 2x2
    volume: int
    fitness: float


def random_encodings(n_rows: int, n_cols: int, count: int, seed: int) -> np.ndarray:
    """``count x (n_rows + n_cols)`` boolean array, each bit a fair coin.

    Bits are drawn as ``rint(uniform[0, 1))`` so the construction matches the
    usual ``round(rand(N, L))`` recipe.
    """
    if count < 1:
        raise ContractError("population size must be at least 1")
    if n_rows < 2 or n_cols < 2:
        raise ContractError("matrix must be at least 2x2")
    u = make_rng(seed).random((count, n_rows + n_cols))
    return np.rint(u).astype(bool)


def random_population(
    n_rows: int,
    n_cols: int,
    count: int,
    seed: int,
    source: SessionPageMatrix | None = None,
) -> list[Bicluster]:
    enc = random_encodings(n_rows, n_cols, count, seed)
    return [Bicluster.from_encoding(e, n_rows, source) for e in enc]


def submatrix(b: Bicluster) -> np.ndarray:
    """Selected rows and columns, original order kept."""
    if b.source is None:
        raise ContractError("bicluster is not bound to a matrix")
    if not b.row_mask.any() or not b.col_mask.any():
        raise EmptySelectionError("bicluster selects no rows or no columns")
    return b.source.values[np.ix_(b.row_mask, b.col_mask)]


def cells(b: Bicluster) -> set[tuple[int, int]]:
    return {(int(i), int(j)) for i in b.rows for j in b.cols}


def hamming(a: Bicluster, b: Bicluster) -> int:
    return int(np.count_nonzero(a.encoding != b.encoding))
