"""Turning per-restart winners into an optimal set plus run statistics."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

from .bicluster import Bicluster
from .metrics import overlapping_degree, pair_overlap, score

DEDUP_OVERLAP = 0.9
THREADS_ENV = "BICLUSTER_THREADS"

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class RunReport:
    method: str
    best_fitness: float
    worst_fitness: float
    best_acv: float | None
    worst_acv: float | None
    mean_acv: float | None
    mean_volume: float
    overlapping_degree: float
    n_biclusters: int
    elapsed: float = field(default=0.0, compare=False)
    config_echo: dict = field(default_factory=dict)

    def to_record(self, include_elapsed: bool = False) -> dict:
        rec = asdict(self)
        if not include_elapsed:
            rec.pop("elapsed")
        return rec


def worker_count(requested: int | None = None) -> int:
    """Resolve the worker cap: explicit argument, else $BICLUSTER_THREADS, 0 meaning all CPUs."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError("worker count must be >= 0")
    return requested or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    """``map`` that may fan out over threads; results always come back in input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def deduplicate(ranked: Iterable[tuple[Bicluster, float]], threshold: float = DEDUP_OVERLAP) -> list[tuple[Bicluster, float]]:
    """Greedy suppression: walk candidates best-first, drop any that overlap a kept one by >= ``threshold``.

    Candidates must already be sorted best-first; the sort must be stable so
    that equal-fitness candidates keep restart order.
    """
    kept: list[tuple[Bicluster, float]] = []
    for b, f in ranked:
        if b.volume == 0:
            continue
        if all(pair_overlap(b, k) < threshold for k, _ in kept):
            kept.append((b, f))
    return kept


def select_optimal(candidates: Sequence[tuple[Bicluster, float]]) -> list[tuple[Bicluster, float]]:
    """Sort by fitness (descending, stable), deduplicate, and drop zero-fitness
    leftovers whenever something scored above zero."""
    ranked = sorted(candidates, key=lambda bf: -bf[1])
    kept = deduplicate(ranked)
    if not kept:
        # every candidate was empty; keep the first so the report is never empty
        kept = ranked[:1]
    if any(f > 0 for _, f in kept):
        kept = [(b, f) for b, f in kept if f > 0]
    return kept


def summarize(
    method: str,
    biclusters: Sequence[Bicluster],
    delta: float,
    config_echo: dict,
    elapsed: float = 0.0,
    min_rows: int = 2,
    min_cols: int = 2,
) -> RunReport:
    scores = [score(b, delta, min_rows, min_cols) for b in biclusters]
    fits = [s.fitness for s in scores]
    acvs = [s.acv for s in scores if s.acv is not None]
    return RunReport(
        method=method,
        best_fitness=max(fits),
        worst_fitness=min(fits),
        best_acv=max(acvs) if acvs else None,
        worst_acv=min(acvs) if acvs else None,
        mean_acv=math.fsum(acvs) / len(acvs) if acvs else None,
        mean_volume=math.fsum(s.volume for s in scores) / len(scores),
        overlapping_degree=overlapping_degree(list(biclusters)),
        n_biclusters=len(biclusters),
        elapsed=elapsed,
        config_echo=dict(config_echo),
    )


def bicluster_record(b: Bicluster, delta: float, min_rows: int = 2, min_cols: int = 2) -> dict:
    s = score(b, delta, min_rows, min_cols)
    return {
        "rows": b.rows.tolist(),
        "cols": b.cols.tolist(),
        "acv": s.acv,
        "volume": s.volume,
        "fitness": s.fitness,
    }
