"""Session x pageview matrices: loading, length filtering and normalization.

Two on-disk formats are understood:

``matrix-csv``
    header ``session,<label1>,...,<labelk>`` then one ``id,v1,...,vk`` line per session.

``raw-clickstream``
    one ``id: c1,c2,...`` line per session where each ``ci`` is an integer page
    code; the page catalog comes from a separate ``code,label`` CSV.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateMatrixError, EmptyInputError, ParseError

log = logging.getLogger(__name__)

MATRIX_CSV = "matrix-csv"
RAW_CLICKSTREAM = "raw-clickstream"
FORMATS = (MATRIX_CSV, RAW_CLICKSTREAM)

# Root-page categories of the CTI university log, numbered as in the original study.
CTI_CATALOG_ENTRIES: tuple[tuple[int, str], ...] = (
    (1, "search"),
    (2, "programs"),
    (3, "news"),
    (4, "admissions"),
    (5, "advising"),
    (6, "courses"),
    (7, "people"),
    (8, "authenticate"),
    (9, "cti"),
    (10, "miscellaneous"),
)


@dataclass(frozen=True)
class PageCatalog:
    """Ordered ``(code, label)`` pairs; codes run 1..k without gaps."""

    entries: tuple[tuple[int, str], ...]

    def __post_init__(self):
        entries = tuple((int(c), str(l)) for c, l in self.entries)
        object.__setattr__(self, "entries", entries)
        codes = [c for c, _ in entries]
        if codes != list(range(1, len(entries) + 1)):
            raise ValueError(f"page codes must be contiguous from 1, got {codes}")
        labels = [l for _, l in entries]
        if any(not l.strip() for l in labels):
            raise ValueError("page labels must be non-empty")
        if len(set(labels)) != len(labels):
            raise ValueError("page labels must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def codes(self) -> list[int]:
        return [c for c, _ in self.entries]

    @property
    def labels(self) -> list[str]:
        return [l for _, l in self.entries]

    def label(self, code: int) -> str:
        return self.entries[code - 1][1]

    def column(self, code: int) -> int:
        """Zero-based matrix column for a page code."""
        if not 1 <= code <= len(self.entries):
            raise KeyError(code)
        return code - 1

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "PageCatalog":
        return cls(tuple((i + 1, l) for i, l in enumerate(labels)))

    @classmethod
    def cti(cls) -> "PageCatalog":
        return cls(CTI_CATALOG_ENTRIES)


@dataclass(frozen=True)
class SessionPageMatrix:
    """Dense session x page matrix plus the identifiers needed to report on it.

    ``values`` holds raw hit counts straight after loading and per-row min-max
    weights after :func:`normalize`.
    """

    values: np.ndarray
    session_ids: tuple[str, ...]
    catalog: PageCatalog
    normalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "session_ids", tuple(str(s) for s in self.session_ids))
        if values.ndim != 2:
            raise ValueError("values must be two-dimensional")
        if values.shape[0] != len(self.session_ids):
            raise ValueError("one session id per row required")
        if values.shape[1] != len(self.catalog):
            raise ValueError(
                f"matrix has {values.shape[1]} columns but catalog has {len(self.catalog)} pages"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix entries must be finite")
        if self.normalized and values.size and (values.min() < 0 or values.max() > 1):
            raise ValueError("normalized entries must lie in [0, 1]")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_sessions(self) -> int:
        return self.values.shape[0]

    @property
    def n_pages(self) -> int:
        return self.values.shape[1]

    def session_lengths(self) -> np.ndarray:
        """Total hits per session (row sums of the raw counts)."""
        return self.values.sum(axis=1)

    def require_scorable(self) -> None:
        if self.n_sessions < 2 or self.n_pages < 2:
            raise DegenerateMatrixError(
                f"need at least a 2x2 matrix, got {self.n_sessions}x{self.n_pages}"
            )


def load_catalog(path: str | os.PathLike) -> PageCatalog:
    """Read a two-column ``code,label`` CSV. A header row is optional."""
    text = _read_text(path)
    entries = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", lineno, str(path))
        code, label = (cell.strip() for cell in row)
        if lineno == 1 and not code.lstrip("-").isdigit():
            continue  # header
        try:
            entries.append((int(code), label))
        except ValueError:
            raise ParseError(f"page code {code!r} is not an integer", lineno, str(path)) from None
    if not entries:
        raise EmptyInputError(f"{path}: catalog is empty")
    entries.sort()
    try:
        return PageCatalog(tuple(entries))
    except ValueError as exc:
        raise ParseError(str(exc), path=str(path)) from None


def load_sessions(
    path: str | os.PathLike,
    format: str = MATRIX_CSV,
    catalog: PageCatalog | None = None,
) -> SessionPageMatrix:
    """Load raw visit frequencies. Row order follows the file.

    ``catalog`` is required for ``raw-clickstream`` input and ignored for
    ``matrix-csv``, whose header carries the page labels.
    """
    if format == MATRIX_CSV:
        return _load_matrix_csv(path)
    if format == RAW_CLICKSTREAM:
        if catalog is None:
            raise ValueError("raw-clickstream input needs a page catalog")
        return _load_clickstream(path, catalog)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def _read_text(path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load_matrix_csv(path) -> SessionPageMatrix:
    text = _read_text(path)
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1) if r]
    if not rows:
        raise EmptyInputError(f"{path}: empty file")
    _, header = rows[0]
    labels = [h.strip() for h in header[1:]]
    if not labels:
        raise ParseError("header lists no pages", 1, str(path))
    width = len(header)
    ids, values = [], []
    for lineno, row in rows[1:]:
        if len(row) != width:
            raise ParseError(f"expected {width} fields, got {len(row)}", lineno, str(path))
        try:
            vals = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), lineno, str(path)) from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite value", lineno, str(path))
        ids.append(row[0].strip())
        values.append(vals)
    if not values:
        raise EmptyInputError(f"{path}: no session rows")
    try:
        catalog = PageCatalog.from_labels(labels)
    except ValueError as exc:
        raise ParseError(str(exc), 1, str(path)) from None
    return SessionPageMatrix(np.array(values), tuple(ids), catalog)


def _load_clickstream(path, catalog: PageCatalog) -> SessionPageMatrix:
    text = _read_text(path)
    k = len(catalog)
    ids, values = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        sid, sep, rest = line.partition(":")
        if not sep or not sid.strip():
            raise ParseError("expected 'id: code,code,...'", lineno, str(path))
        counts = np.zeros(k)
        fields = [f.strip() for f in rest.split(",")]
        if fields == [""]:
            fields = []
        for f in fields:
            try:
                code = int(f)
                counts[catalog.column(code)] += 1
            except (ValueError, KeyError):
                raise ParseError(f"unknown page code {f!r}", lineno, str(path)) from None
        ids.append(sid.strip())
        values.append(counts)
    if not values:
        raise EmptyInputError(f"{path}: empty file")
    return SessionPageMatrix(np.array(values), tuple(ids), catalog)


def write_matrix_csv(m: SessionPageMatrix, path: str | os.PathLike) -> None:
    """Write ``m`` as matrix-csv. ``repr`` floats make the round trip exact."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["session", *m.catalog.labels])
    for sid, row in zip(m.session_ids, m.values):
        w.writerow([sid, *(_fmt(v) for v in row)])
    atomic_write(path, buf.getvalue())


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 2**53 else repr(float(v))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def filter_by_session_length(
    m: SessionPageMatrix, min_len: int, max_len: float
) -> SessionPageMatrix:
    """Keep sessions whose total hit count lies in ``[min_len, max_len]``."""
    if min_len < 1 or max_len < min_len:
        raise ValueError(f"invalid length bounds [{min_len}, {max_len}]")
    lengths = m.session_lengths()
    keep = (lengths >= min_len) & (lengths <= max_len)
    if keep.sum() < 2:
        raise DegenerateMatrixError(
            f"only {int(keep.sum())} session(s) have length in [{min_len}, {max_len}]"
        )
    ids = tuple(s for s, k in zip(m.session_ids, keep) if k)
    return SessionPageMatrix(m.values[keep], ids, m.catalog, normalized=m.normalized)


def normalize(m: SessionPageMatrix) -> SessionPageMatrix:
    """Min-max scale each row to [0, 1]. Constant rows become zeros (with a warning)."""
    v = m.values
    lo = v.min(axis=1, keepdims=True)
    span = v.max(axis=1, keepdims=True) - lo
    flat = span[:, 0] == 0
    if flat.any():
        log.warning(
            "%d constant session row(s) mapped to zeros: %s",
            int(flat.sum()),
            ", ".join(s for s, f in zip(m.session_ids, flat) if f)[:200],
        )
    out = np.zeros_like(v)
    ok = ~flat
    out[ok] = (v[ok] - lo[ok]) / span[ok]
    np.clip(out, 0.0, 1.0, out=out)
    return SessionPageMatrix(out, m.session_ids, m.catalog, normalized=True)


def from_array(values: Sequence[Sequence[float]] | np.ndarray, labels=None, ids=None) -> SessionPageMatrix:
    """Wrap a plain array, inventing ``s1..`` / ``p1..`` names when none are given."""
    values = np.asarray(values, dtype=float)
    n, k = values.shape
    labels = labels or [f"p{j + 1}" for j in range(k)]
    ids = ids or [f"s{i + 1}" for i in range(n)]
    return SessionPageMatrix(values, tuple(ids), PageCatalog.from_labels(labels))
