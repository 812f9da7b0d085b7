"""Correlation biclustering of session x page usage matrices by simulated annealing."""

__version__ = "0.1.0"

from .annealing import AnnealingConfig, ChainState, accept, cool, neighbor, run_chain, run_sa
from .bicluster import Bicluster, BiclusterScore, cells, random_population, submatrix
from .greedy import GreedyConfig, run_greedy
from .metrics import AcvThreshold, acv, fitness, overlapping_degree, pearson
from .profiles import UsageProfile, build_profile, build_profiles, page_weight
from .report import RunReport
from .usage import (
    PageCatalog,
    SessionPageMatrix,
    filter_by_session_length,
    load_sessions,
    normalize,
)

__all__ = [
    "AcvThreshold",
    "AnnealingConfig",
    "Bicluster",
    "BiclusterScore",
    "ChainState",
    "GreedyConfig",
    "PageCatalog",
    "RunReport",
    "SessionPageMatrix",
    "UsageProfile",
    "accept",
    "acv",
    "build_profile",
    "build_profiles",
    "cells",
    "cool",
    "filter_by_session_length",
    "fitness",
    "load_sessions",
    "neighbor",
    "normalize",
    "overlapping_degree",
    "page_weight",
    "pearson",
    "random_population",
    "run_chain",
    "run_greedy",
    "run_sa",
    "submatrix",
]
