"""Steepest-ascent hill climbing over single-bit flips, the baseline for SA."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .bicluster import Bicluster, random_encodings
from .errors import ContractError
from .metrics import DEFAULT_DELTA, fitness_values
from .report import RunReport, ordered_map, select_optimal, summarize, worker_count
from .usage import SessionPageMatrix


@dataclass(frozen=True)
class GreedyConfig:
    population: int = 100
    delta: float = DEFAULT_DELTA
    seed: int = 0
    max_stall: int = 1000  # upper bound on sweeps per restart
    min_rows: int = 2
    min_cols: int = 2

    def __post_init__(self):
        if self.population < 1 or self.max_stall < 1:
            raise ContractError("population and max_stall must be >= 1")
        if not (0.0 <= self.delta <= 1.0):
            raise ContractError("delta must lie in [0, 1]")
        if self.min_rows < 2 or self.min_cols < 2:
            raise ContractError("minimum selection is 2x2")

    def echo(self) -> dict:
        return asdict(self)


def neighbor_fitnesses(bits: np.ndarray, matrix: SessionPageMatrix, config: GreedyConfig) -> np.ndarray:
    """Fitness of every single-flip neighbour of ``bits``, indexed by flipped position."""
    n = matrix.n_sessions
    out = np.empty(bits.size)
    trial = bits.copy()
    for k in range(bits.size):
        trial[k] = not trial[k]
        out[k] = fitness_values(
            matrix.values, trial[:n], trial[n:], config.delta, config.min_rows, config.min_cols
        )
        trial[k] = not trial[k]
    return out


def climb(start: Bicluster, matrix: SessionPageMatrix, config: GreedyConfig) -> tuple[Bicluster, list[float]]:
    """Hill-climb from ``start``; returns the end point and the fitness after each step.

    Each sweep scores all neighbours and takes the best strictly improving one,
    lowest flipped index on ties. Stops at a local optimum or after
    ``config.max_stall`` sweeps.
    """
    n = matrix.n_sessions
    bits = start.encoding.copy()
    f = fitness_values(matrix.values, bits[:n], bits[n:], config.delta, config.min_rows, config.min_cols)
    trajectory = [f]
    for _ in range(config.max_stall):
        nf = neighbor_fitnesses(bits, matrix, config)
        k = int(np.argmax(nf))  # first maximum -> lowest index
        if nf[k] <= f:
            break
        bits[k] = not bits[k]
        f = float(nf[k])
        trajectory.append(f)
    return Bicluster.from_encoding(bits, n, matrix), trajectory


def run_greedy(
    matrix: SessionPageMatrix,
    config: GreedyConfig = GreedyConfig(),
    workers: int | None = None,
) -> tuple[list[Bicluster], RunReport]:
    """Climb from each of ``config.population`` random starts (same draw as SA for a given seed)."""
    matrix.require_scorable()
    t0 = time.perf_counter()
    n, m = matrix.shape
    starts = random_encodings(n, m, config.population, config.seed)

    def one(i: int) -> tuple[Bicluster, float]:
        end, traj = climb(Bicluster.from_encoding(starts[i], n, matrix), matrix, config)
        return end, traj[-1]

    results = ordered_map(one, list(range(config.population)), worker_count(workers))
    optimal = [b for b, _ in select_optimal(results)]
    report = summarize(
        "greedy",
        optimal,
        config.delta,
        config.echo(),
        time.perf_counter() - t0,
        config.min_rows,
        config.min_cols,
    )
    return optimal, report
