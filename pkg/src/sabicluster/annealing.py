"""Simulated-annealing biclustering.

Each initial bicluster of a random population seeds one independent chain.
A chain proposes single-bit flips (add or drop one session or page), scores
them with the thresholded-volume fitness, and accepts worse proposals with
Boltzmann probability. Temperature falls geometrically, ``T <- T / (1 + alpha)``,
once per epoch of ``moves_per_temperature`` proposals until it reaches
``t_min``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .bicluster import Bicluster, make_rng, random_encodings
from .errors import ContractError
from .metrics import DEFAULT_DELTA, fitness_values
from .report import RunReport, ordered_map, select_optimal, summarize, worker_count
from .usage import SessionPageMatrix


@dataclass(frozen=True)
class AnnealingConfig:
    t_initial: float = 50.0
    alpha: float = 0.7
    t_min: float = 0.01
    population: int = 100
    delta: float = DEFAULT_DELTA
    moves_per_temperature: int = 20
    seed: int = 0
    # Follow the published loop literally: one proposal per step, and cool only
    # when a worsening proposal is rejected. Plateaus can then stall the
    # temperature, so ``max_moves`` bounds the chain.
    compat_pseudocode: bool = False
    max_moves: int = 200_000
    min_rows: int = 2
    min_cols: int = 2

    def __post_init__(self):
        if not (self.t_initial > self.t_min > 0):
            raise ContractError("need t_initial > t_min > 0")
        if self.alpha <= 0:
            raise ContractError("alpha must be positive")
        if self.population < 1 or self.moves_per_temperature < 1 or self.max_moves < 1:
            raise ContractError("population, moves_per_temperature and max_moves must be >= 1")
        if not (0.0 <= self.delta <= 1.0):
            raise ContractError("delta must lie in [0, 1]")
        if self.min_rows < 2 or self.min_cols < 2:
            raise ContractError("minimum selection is 2x2")

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class ChainState:
    current: Bicluster
    current_energy: float
    best: Bicluster
    best_energy: float
    temperature: float
    rng: np.random.Generator
    cooling_steps: int = 0
    moves: int = 0
    # (temperature, current_energy, best_energy) at the end of each epoch, when recorded
    history: list[tuple[float, float, float]] = field(default_factory=list)


def cool(temperature: float, alpha: float) -> float:
    return temperature / (1.0 + alpha)


def cooling_schedule_length(t_initial: float, alpha: float, t_min: float) -> int:
    """Number of ``cool`` applications before the temperature drops to ``t_min`` or below."""
    k, t = 0, t_initial
    while t > t_min:
        t = cool(t, alpha)
        k += 1
    return k


def accept(delta_e: float, temperature: float, rng: np.random.Generator) -> bool:
    """Metropolis rule for a maximised energy.

    ``delta_e = e_new - e``. Non-negative changes are always taken (no random
    draw is consumed); losses are taken with probability ``exp(delta_e / T)``.
    """
    if not temperature > 0:
        raise ContractError(f"temperature must be positive, got {temperature}")
    if delta_e >= 0:
        return True
    return math.exp(delta_e / temperature) > rng.random()


def _flip(bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    out = bits.copy()
    k = rng.integers(out.size)
    out[k] = not out[k]
    return out


def neighbor(b: Bicluster, rng: np.random.Generator) -> Bicluster:
    """Copy of ``b`` with exactly one uniformly chosen row or column toggled."""
    bits = _flip(b.encoding, rng)
    return Bicluster.from_encoding(bits, b.row_mask.size, b.source)


def run_chain(
    start: Bicluster,
    config: AnnealingConfig,
    matrix: SessionPageMatrix,
    rng: np.random.Generator | None = None,
    record: bool = False,
) -> ChainState:
    """Anneal one chain from ``start``. ``rng`` defaults to a fresh stream from ``config.seed``."""
    if start.row_mask.size != matrix.n_sessions or start.col_mask.size != matrix.n_pages:
        raise ContractError("start bicluster does not match the matrix shape")
    rng = make_rng(config.seed) if rng is None else rng
    values = matrix.values
    n = matrix.n_sessions

    def energy(bits: np.ndarray) -> float:
        return fitness_values(values, bits[:n], bits[n:], config.delta, config.min_rows, config.min_cols)

    s = start.encoding
    e = energy(s)
    best, e_best = s, e
    t = config.t_initial
    steps = moves = 0
    history = []

    if config.compat_pseudocode:
        while t > config.t_min and moves < config.max_moves:
            s_new = _flip(s, rng)
            e_new = energy(s_new)
            moves += 1
            if e_new > e_best:
                best, e_best = s_new, e_new
            elif accept(e_new - e, t, rng):
                s, e = s_new, e_new
            else:
                t = cool(t, config.alpha)
                steps += 1
                if record:
                    history.append((t, e, e_best))
    else:
        while t > config.t_min:
            for _ in range(config.moves_per_temperature):
                s_new = _flip(s, rng)
                e_new = energy(s_new)
                moves += 1
                if e_new > e_best:
                    best, e_best = s_new, e_new
                if accept(e_new - e, t, rng):
                    s, e = s_new, e_new
            t = cool(t, config.alpha)
            steps += 1
            if record:
                history.append((t, e, e_best))

    return ChainState(
        current=Bicluster.from_encoding(s, n, matrix),
        current_energy=e,
        best=Bicluster.from_encoding(best, n, matrix),
        best_energy=e_best,
        temperature=t,
        rng=rng,
        cooling_steps=steps,
        moves=moves,
        history=history,
    )


def chain_seed(seed: int, index: int) -> int:
    """Seed of chain ``index`` (0-based); the population itself is drawn from ``seed``."""
    return seed + index + 1


def run_sa(
    matrix: SessionPageMatrix,
    config: AnnealingConfig = AnnealingConfig(),
    workers: int | None = None,
) -> tuple[list[Bicluster], RunReport]:
    """Anneal ``config.population`` independent chains and return the deduplicated optimal set.

    Output depends only on ``(matrix, config)``; ``workers`` (default from
    ``$BICLUSTER_THREADS``) changes speed, never results.
    """
    matrix.require_scorable()
    t0 = time.perf_counter()
    n, m = matrix.shape
    starts = random_encodings(n, m, config.population, config.seed)

    def one(i: int) -> ChainState:
        start = Bicluster.from_encoding(starts[i], n, matrix)
        return run_chain(start, config, matrix, make_rng(chain_seed(config.seed, i)))

    states = ordered_map(one, list(range(config.population)), worker_count(workers))
    kept = select_optimal([(st.best, st.best_energy) for st in states])
    optimal = [b for b, _ in kept]
    report = summarize(
        "sa",
        optimal,
        config.delta,
        config.echo(),
        time.perf_counter() - t0,
        config.min_rows,
        config.min_cols,
    )
    return optimal, report
