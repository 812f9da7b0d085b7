"""Planted-block benchmark matrices with known ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bicluster import Bicluster, make_rng
from .errors import ContractError
from .usage import SessionPageMatrix, from_array


@dataclass(frozen=True)
class PlantedMatrix:
    matrix: SessionPageMatrix
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def truth(self) -> Bicluster:
        return Bicluster.from_indices(self.rows, self.cols, self.matrix)

    def sidecar(self) -> dict:
        return {
            "shape": list(self.matrix.shape),
            "rows": list(self.rows),
            "cols": list(self.cols),
        }


def planted_matrix(
    n_rows: int,
    n_cols: int,
    block_rows: int,
    block_cols: int,
    noise: float = 0.01,
    seed: int = 0,
    kind: str = "scaling",
) -> PlantedMatrix:
    """Uniform [0, 1) background with one coherent block at random positions.

    Block row ``i`` is ``s_i * base`` (``kind="scaling"``, ``s_i`` in
    [0.3, 1)) or ``base + t_i - 0.4`` (``kind="translation"``, ``t_i`` in
    [0, 0.4)), plus N(0, noise) jitter clipped to [0, 1]. ``base`` is an evenly
    spaced ramp over [0.4, 1] in shuffled column order, so the block pattern
    has the same contrast for every seed. Noiseless values stay inside [0, 1].
    """
    if not (2 <= block_rows <= n_rows and 2 <= block_cols <= n_cols):
        raise ContractError(
            f"planted block {block_rows}x{block_cols} does not fit in {n_rows}x{n_cols}"
        )
    if noise < 0:
        raise ContractError("noise level must be non-negative")
    if kind not in ("scaling", "translation"):
        raise ContractError(f"unknown pattern kind {kind!r}")
    rng = make_rng(seed)
    values = rng.random((n_rows, n_cols))
    rows = np.sort(rng.choice(n_rows, size=block_rows, replace=False))
    cols = np.sort(rng.choice(n_cols, size=block_cols, replace=False))
    base = rng.permutation(np.linspace(0.4, 1.0, block_cols))
    if kind == "scaling":
        block = rng.uniform(0.3, 1.0, size=(block_rows, 1)) * base
    else:
        block = rng.uniform(0.0, 0.4, size=(block_rows, 1)) + (base - 0.4)
    if noise > 0:
        block = np.clip(block + rng.normal(0.0, noise, size=block.shape), 0.0, 1.0)
    values[np.ix_(rows, cols)] = block
    return PlantedMatrix(from_array(values), tuple(int(r) for r in rows), tuple(int(c) for c in cols))


def planted_recall(found: Bicluster, truth: Bicluster) -> float:
    """Fraction of planted cells covered by ``found``."""
    if truth.volume == 0:
        return 0.0
    hit = int(np.count_nonzero(found.row_mask & truth.row_mask)) * int(
        np.count_nonzero(found.col_mask & truth.col_mask)
    )
    return hit / truth.volume
