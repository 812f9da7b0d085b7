"""``sabicluster`` command line.

Subcommands::

    preprocess  raw sessions -> filtered, row-normalized matrix-csv
    sa          simulated-annealing biclustering + profiles
    greedy      hill-climbing baseline + profiles
    compare     both methods over a run of seeds, side-by-side table
    synth       planted-block benchmark matrix
    profile     profiles from an existing biclusters file

Exit status: 0 success, 1 search/runtime failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .annealing import AnnealingConfig, run_sa
from .bicluster import Bicluster
from .errors import BiclusterError, ContractError, EmptyInputError, ParseError
from .greedy import GreedyConfig, run_greedy
from .profiles import DEFAULT_MIN_WEIGHT, build_profiles, profiles_csv
from .report import RunReport, bicluster_record
from .synth import planted_matrix
from .usage import (
    FORMATS,
    MATRIX_CSV,
    RAW_CLICKSTREAM,
    atomic_write,
    filter_by_session_length,
    load_catalog,
    load_sessions,
    normalize,
    write_matrix_csv,
)

log = logging.getLogger("sabicluster")

COMPARE_COLUMNS = ("method", "mean_volume", "mean_acv", "overlapping_degree", "best_acv", "worst_acv")
PER_SEED_COLUMNS = (
    "seed",
    "method",
    "best_fitness",
    "best_acv",
    "worst_acv",
    "mean_acv",
    "mean_volume",
    "overlapping_degree",
    "n_biclusters",
)


class UsageError(Exception):
    """Bad flags or missing inputs (exit code 2)."""


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _write_json(path: Path, obj) -> None:
    atomic_write(path, _dump(obj))


def _require_file(path: str | None, flag: str) -> Path:
    if not path:
        raise UsageError(f"{flag} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: no such file: {path}")
    return p


def _outdir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load_matrix(args):
    path = _require_file(args.input, "--input")
    return load_sessions(path, MATRIX_CSV)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_shared(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--input", help="input file")
    p.add_argument("--output-dir", default=".", help="directory for output files (default: .)")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-weight", type=float, default=DEFAULT_MIN_WEIGHT,
                   help="profile page weight cut-off, strict (default: %(default)s)")


def _add_search(p: argparse.ArgumentParser) -> None:
    d = AnnealingConfig()
    p.add_argument("--population", type=int, default=d.population)
    p.add_argument("--delta", type=float, default=d.delta, help="ACV threshold")
    p.add_argument("--min-rows", type=int, default=d.min_rows,
                   help="smallest session count that can score (default: %(default)s)")
    p.add_argument("--min-cols", type=int, default=d.min_cols,
                   help="smallest page count that can score (default: %(default)s)")


def _add_sa(p: argparse.ArgumentParser) -> None:
    d = AnnealingConfig()
    p.add_argument("--t-initial", type=float, default=d.t_initial)
    p.add_argument("--alpha", type=float, default=d.alpha, help="cooling rate")
    p.add_argument("--t-min", type=float, default=d.t_min)
    p.add_argument("--moves-per-temp", type=int, default=d.moves_per_temperature)
    p.add_argument("--compat-pseudocode", action="store_true",
                   help="one move per step, cool only on rejected worsening moves")
    p.add_argument("--max-moves", type=int, default=d.max_moves,
                   help="move cap per chain in --compat-pseudocode mode")


def _add_greedy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-stall", type=int, default=GreedyConfig().max_stall,
                   help="maximum sweeps per restart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sabicluster", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="filter and normalize raw session data")
    _add_shared(p, seed=False)
    p.add_argument("--format", choices=FORMATS, default=RAW_CLICKSTREAM)
    p.add_argument("--catalog", help="code,label CSV (required for raw-clickstream)")
    p.add_argument("--min-len", type=int, default=5, help="shortest session kept, in hits")
    p.add_argument("--max-len", type=float, default=10, help="longest session kept, in hits")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("sa", help="simulated-annealing biclustering")
    _add_shared(p)
    _add_search(p)
    _add_sa(p)
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in report.json")
    p.set_defaults(func=cmd_run, method="sa")

    p = sub.add_parser("greedy", help="hill-climbing baseline")
    _add_shared(p)
    _add_search(p)
    _add_greedy(p)
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in report.json")
    p.set_defaults(func=cmd_run, method="greedy")

    p = sub.add_parser("compare", help="SA vs greedy over several seeds")
    _add_shared(p)
    _add_search(p)
    _add_sa(p)
    _add_greedy(p)
    p.add_argument("--seeds", type=int, default=10, help="number of consecutive seeds from --seed")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="write a planted-block benchmark matrix")
    p.add_argument("--output-dir", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=100)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--block-rows", type=int, default=30)
    p.add_argument("--block-cols", type=int, default=6)
    p.add_argument("--noise", type=float, default=0.01, help="std-dev of jitter on the block")
    p.add_argument("--kind", choices=("scaling", "translation"), default="scaling")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("profile", help="profiles from a biclusters.json")
    _add_shared(p, seed=False)
    p.add_argument("--biclusters", help="biclusters.json from an sa/greedy run")
    p.set_defaults(func=cmd_profile)
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_preprocess(args) -> int:
    path = _require_file(args.input, "--input")
    catalog = None
    if args.format == RAW_CLICKSTREAM:
        catalog = load_catalog(_require_file(args.catalog, "--catalog"))
    raw = load_sessions(path, args.format, catalog)
    kept = filter_by_session_length(raw, args.min_len, args.max_len)
    m = normalize(kept)
    out = _outdir(args.output_dir)
    write_matrix_csv(m, out / "matrix.csv")
    summary = {
        "input": str(path),
        "sessions_read": raw.n_sessions,
        "sessions_kept": kept.n_sessions,
        "sessions_dropped": raw.n_sessions - kept.n_sessions,
        "pages": m.n_pages,
        "min_len": args.min_len,
        "max_len": args.max_len if math.isfinite(args.max_len) else None,
    }
    _write_json(out / "preprocess_summary.json", summary)
    print(
        f"kept {kept.n_sessions} of {raw.n_sessions} sessions "
        f"(length {args.min_len}..{args.max_len:g}), {m.n_pages} pages -> {out / 'matrix.csv'}"
    )
    return 0


def _configs(args) -> tuple[AnnealingConfig, GreedyConfig]:
    common = dict(population=args.population, delta=args.delta, seed=args.seed,
                  min_rows=args.min_rows, min_cols=args.min_cols)
    sa = None
    if hasattr(args, "t_initial"):
        sa = AnnealingConfig(
            t_initial=args.t_initial,
            alpha=args.alpha,
            t_min=args.t_min,
            moves_per_temperature=args.moves_per_temp,
            compat_pseudocode=args.compat_pseudocode,
            max_moves=args.max_moves,
            **common,
        )
    greedy = None
    if hasattr(args, "max_stall"):
        greedy = GreedyConfig(max_stall=args.max_stall, **common)
    return sa, greedy


def _search(method: str, matrix, sa: AnnealingConfig | None, greedy: GreedyConfig | None):
    if method == "sa":
        return run_sa(matrix, sa)
    return run_greedy(matrix, greedy)


def _summary_table(report: RunReport, profiles) -> str:
    def f(x, nd=4):
        return "-" if x is None else f"{x:.{nd}f}"

    lines = [
        f"method={report.method}  biclusters={report.n_biclusters}  "
        f"mean_volume={report.mean_volume:.1f}  mean_acv={f(report.mean_acv)}  "
        f"overlap={report.overlapping_degree:.4f}  best_acv={f(report.best_acv)}  "
        f"worst_acv={f(report.worst_acv)}  elapsed={report.elapsed:.2f}s",
        "",
        f"{'profile':>7}  {'pages':<24} {'weights':<40} {'acv':>7} {'users':>8}",
    ]
    for i, p in enumerate(profiles, start=1):
        pages = ",".join(str(pg.code) for pg in p.pages)
        weights = ", ".join(f"{pg.weight:.4f}" for pg in p.pages)
        lines.append(
            f"{i:>7}  {pages:<24} {weights:<40} {f(p.acv):>7} {100 * p.user_fraction:>7.2f}%"
        )
    if not profiles:
        lines.append("  (no profile cleared the weight threshold)")
    return "\n".join(lines)


def cmd_run(args) -> int:
    matrix = _load_matrix(args)
    sa, greedy = _configs(args)
    cfg = sa if args.method == "sa" else greedy
    optimal, report = _search(args.method, matrix, sa, greedy)
    profiles = build_profiles(optimal, args.min_weight)
    out = _outdir(args.output_dir)
    _write_json(out / "biclusters.json",
                [bicluster_record(b, cfg.delta, cfg.min_rows, cfg.min_cols) for b in optimal])
    _write_json(out / "profiles.json", [p.to_record() for p in profiles])
    atomic_write(out / "profiles.csv", profiles_csv(profiles))
    _write_json(out / "report.json", report.to_record(include_elapsed=args.timing))
    print(_summary_table(report, profiles))
    return 0


def _compare_row(method: str, reports: list[RunReport]) -> dict:
    def mean(xs):
        xs = [x for x in xs if x is not None]
        return math.fsum(xs) / len(xs) if xs else None

    best = [r.best_acv for r in reports if r.best_acv is not None]
    worst = [r.worst_acv for r in reports if r.worst_acv is not None]
    return {
        "method": method,
        "mean_volume": mean([r.mean_volume for r in reports]),
        "mean_acv": mean([r.mean_acv for r in reports]),
        "overlapping_degree": mean([r.overlapping_degree for r in reports]),
        "best_acv": max(best) if best else None,
        "worst_acv": min(worst) if worst else None,
    }


def compare(matrix, sa: AnnealingConfig, greedy: GreedyConfig, seeds: list[int]):
    """Run both methods on every seed. Returns (table rows, per-seed rows)."""
    per_seed = []
    by_method: dict[str, list[RunReport]] = {"sa": [], "greedy": []}
    for seed in seeds:
        for method in ("sa", "greedy"):
            if method == "sa":
                _, rep = run_sa(matrix, replace(sa, seed=seed))
            else:
                _, rep = run_greedy(matrix, replace(greedy, seed=seed))
            by_method[method].append(rep)
            per_seed.append({
                "seed": seed,
                "method": method,
                "best_fitness": rep.best_fitness,
                "best_acv": rep.best_acv,
                "worst_acv": rep.worst_acv,
                "mean_acv": rep.mean_acv,
                "mean_volume": rep.mean_volume,
                "overlapping_degree": rep.overlapping_degree,
                "n_biclusters": rep.n_biclusters,
            })
    table = [_compare_row(m, by_method[m]) for m in ("sa", "greedy")]
    return table, per_seed


def _csv_text(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else (repr(r[k]) if isinstance(r[k], float) else r[k]))
                    for k in columns})
    return buf.getvalue()


def cmd_compare(args) -> int:
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    matrix = _load_matrix(args)
    sa, greedy = _configs(args)
    seeds = list(range(args.seed, args.seed + args.seeds))
    table, per_seed = compare(matrix, sa, greedy, seeds)
    out = _outdir(args.output_dir)
    _write_json(out / "compare.json", {
        "seeds": seeds,
        "table": table,
        "config": {"sa": sa.echo(), "greedy": greedy.echo()},
    })
    atomic_write(out / "compare.csv", _csv_text(table, COMPARE_COLUMNS))
    atomic_write(out / "per_seed.csv", _csv_text(per_seed, PER_SEED_COLUMNS))

    def f(x):
        return "-" if x is None else f"{x:.4f}"

    print(f"{'method':<8} {'mean_volume':>12} {'mean_acv':>9} {'overlap':>8} {'best_acv':>9} {'worst_acv':>9}")
    for r in table:
        print(f"{r['method']:<8} {r['mean_volume']:>12.1f} {f(r['mean_acv']):>9} "
              f"{r['overlapping_degree']:>8.4f} {f(r['best_acv']):>9} {f(r['worst_acv']):>9}")
    return 0


def cmd_synth(args) -> int:
    pm = planted_matrix(args.rows, args.cols, args.block_rows, args.block_cols,
                        args.noise, args.seed, args.kind)
    out = _outdir(args.output_dir)
    write_matrix_csv(pm.matrix, out / "matrix.csv")
    side = pm.sidecar()
    side.update(noise=args.noise, seed=args.seed, kind=args.kind)
    _write_json(out / "planted.json", side)
    print(f"wrote {args.rows}x{args.cols} matrix with a {args.block_rows}x{args.block_cols} "
          f"{args.kind} block to {out / 'matrix.csv'}")
    return 0


def load_biclusters(path, matrix) -> list[Bicluster]:
    try:
        records = json.loads(Path(path).read_text(encoding="utf-8"))
        bs = [Bicluster.from_indices(r["rows"], r["cols"], matrix) for r in records]
    except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"not a biclusters file: {exc}", path=str(path)) from None
    if not bs:
        raise EmptyInputError(f"{path}: no biclusters")
    return bs


def cmd_profile(args) -> int:
    matrix = _load_matrix(args)
    bs = load_biclusters(_require_file(args.biclusters, "--biclusters"), matrix)
    profiles = build_profiles(bs, args.min_weight)
    out = _outdir(args.output_dir)
    _write_json(out / "profiles.json", [p.to_record() for p in profiles])
    atomic_write(out / "profiles.csv", profiles_csv(profiles))
    print(f"{len(profiles)} profile(s) from {len(bs)} bicluster(s)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (UsageError, ParseError, EmptyInputError) as exc:
        print(f"sabicluster {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ContractError, ValueError) as exc:
        print(f"sabicluster {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (BiclusterError, OSError) as exc:
        print(f"sabicluster {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
