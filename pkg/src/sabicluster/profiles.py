"""Aggregate usage profiles: weighted page lists distilled from biclusters."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from typing import Sequence

from .bicluster import Bicluster
from .errors import ContractError, DegenerateBiclusterError, EmptyInputError
from .metrics import acv

log = logging.getLogger(__name__)

DEFAULT_MIN_WEIGHT = 0.5


@dataclass(frozen=True)
class ProfilePage:
    code: int
    label: str
    weight: float


@dataclass(frozen=True)
class UsageProfile:
    pages: tuple[ProfilePage, ...]
    acv: float | None
    user_fraction: float
    source_bicluster: Bicluster

    def to_record(self) -> dict:
        return {
            "pages": [{"code": p.code, "label": p.label, "weight": p.weight} for p in self.pages],
            "acv": self.acv,
            "user_fraction": self.user_fraction,
        }

    def __len__(self) -> int:
        return len(self.pages)


def page_weight(b: Bicluster, page: int) -> float:
    """Mean value of column ``page`` over the bicluster's users."""
    if b.source is None:
        raise ContractError("bicluster is not bound to a matrix")
    if not (0 <= page < b.col_mask.size) or not b.col_mask[page]:
        raise ContractError(f"page column {page} is not selected by the bicluster")
    n_users = b.n_rows
    if n_users == 0:
        raise ContractError("bicluster selects no users")
    column = b.source.values[b.row_mask, page]
    return float(column.sum() / n_users)


def build_profile(b: Bicluster, min_weight: float = DEFAULT_MIN_WEIGHT) -> UsageProfile:
    """Keep every selected page whose weight is strictly above ``min_weight``.

    Pages come out heaviest first, ties broken by page code.
    """
    if b.source is None:
        raise ContractError("bicluster is not bound to a matrix")
    if b.n_rows < 1 or b.n_cols < 1:
        raise ContractError("bicluster must select at least one user and one page")
    catalog = b.source.catalog
    pages = []
    for col in b.cols:
        w = page_weight(b, int(col))
        if w > min_weight:
            code = catalog.codes[col]
            pages.append(ProfilePage(code, catalog.label(code), w))
    pages.sort(key=lambda p: (-p.weight, p.code))
    try:
        a = acv(b)
    except DegenerateBiclusterError:
        a = None
    return UsageProfile(
        pages=tuple(pages),
        acv=a,
        user_fraction=b.n_rows / b.source.n_sessions,
        source_bicluster=b,
    )


def build_profiles(optimal: Sequence[Bicluster], min_weight: float = DEFAULT_MIN_WEIGHT) -> list[UsageProfile]:
    """Profiles for an already fitness-ordered set; empty profiles are dropped."""
    if len(optimal) == 0:
        raise EmptyInputError("no biclusters to profile")
    profiles = [build_profile(b, min_weight) for b in optimal]
    kept = [p for p in profiles if p.pages]
    if not kept:
        log.warning("no page cleared min_weight=%s in any of %d biclusters", min_weight, len(optimal))
    return kept


def profiles_csv(profiles: Sequence[UsageProfile]) -> str:
    """One row per profile, columns as in a printed profile table."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["profile", "pages", "weights", "acv", "user_percentage"])
    for i, p in enumerate(profiles, start=1):
        w.writerow(
            [
                i,
                ",".join(str(pg.code) for pg in p.pages),
                ",".join(f"{pg.weight:.4f}" for pg in p.pages),
                "" if p.acv is None else f"{p.acv:.4f}",
                f"{100 * p.user_fraction:.2f}%",
            ]
        )
    return buf.getvalue()

