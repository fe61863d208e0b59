"""Command line entry point: ``grassecant {scan,cell,verify,veronese}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from grassecant import tables
from grassecant.golden import load_golden, verify
from grassecant.rank import DEFAULT_PRIME, RankBackendConfig
from grassecant.scan import (
    RegistryContradiction,
    ScanCache,
    default_cache_path,
    iter_scan,
    classify_cell_evidence,
)
from grassecant.terracini import DegeneratePointError
from grassecant.veronese import veronese_scan

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BACKEND = 0, 1, 2, 3

log = logging.getLogger("grassecant")


def _backend_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("backend")
    g.add_argument("--backend", choices=["exact", "float"], default="exact")
    g.add_argument("--prime", type=int, default=DEFAULT_PRIME,
                   help="prime in [2^30, 2^31) for the exact backend")
    g.add_argument("--tol", type=float, default=1e-8,
                   help="relative singular value threshold (float backend)")
    g.add_argument("--bound", type=float, default=100.0,
                   help="float entries are drawn from [-L, L]")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trials", type=int, default=None,
                   help="independent point sets per cell (default 2 exact, 3 float)")
    g.add_argument("--vary-prime", action="store_true",
                   help="use a different prime for every trial")


def _output_args(p: argparse.ArgumentParser, default_format: str = "markdown") -> None:
    p.add_argument("--format", choices=["csv", "json", "markdown"], default=default_format)
    p.add_argument("--out", type=Path, default=None, help="write here instead of stdout")
    p.add_argument("--paper-style", action="store_true",
                   help="mark defective entries with '*' instead of printing the defect")


def _cache_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", type=Path, default=None,
                   help="cache file (default: $GRASSECANT_CACHE_DIR/scan-cache.txt if set)")
    p.add_argument("--force", action="store_true", help="recompute cached cells")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassecant",
        description="Dimensions of secant varieties of Grassmannians via Terracini's lemma.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="sweep n, k, s and emit the dimension table")
    scan.add_argument("--n-min", type=int, default=3)
    scan.add_argument("--n-max", type=int, default=14)
    scan.add_argument("--k-max", type=int, default=None)
    scan.add_argument("--k-only", type=int, default=None)
    scan.add_argument("--s-max", type=int, default=None,
                      help="fixed last s (disables continuation past S)")
    scan.add_argument("--continue-past-S", choices=["auto", "off"], default="auto",
                      dest="continue_past_s")
    scan.add_argument("--lift-k-cap", action="store_true",
                      help="scan every 1 <= k < n instead of k <= (n-1)/2")
    scan.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _backend_args(scan)
    _output_args(scan)
    _cache_args(scan)

    cell = sub.add_parser("cell", help="classify a single G(k,n)^s")
    cell.add_argument("-k", type=int, required=True)
    cell.add_argument("-n", type=int, required=True)
    cell.add_argument("-s", type=int, required=True)
    _backend_args(cell)
    cell.add_argument("--format", choices=["text", "csv", "json"], default="text")
    cell.add_argument("--out", type=Path, default=None)
    cell.add_argument("--dump-matrix", type=Path, default=None,
                      help="also write the first trial's Terracini matrix as text")

    ver = sub.add_parser("verify", help="recompute the published tables and diff")
    ver.add_argument("--n-min", type=int, default=3)
    ver.add_argument("--n-max", type=int, default=9)
    ver.add_argument("--k-max", type=int, default=None)
    ver.add_argument("--golden", type=Path, default=None, help="alternative golden asset")
    _backend_args(ver)
    _cache_args(ver)

    vero = sub.add_parser("veronese", help="secant dimensions of Veronese varieties")
    vero.add_argument("--k-min", type=int, default=1)
    vero.add_argument("--k-max", type=int, default=5)
    vero.add_argument("--n-min", type=int, default=1)
    vero.add_argument("--n-max", type=int, default=4)
    vero.add_argument("--s-max", type=int, default=None)
    vero.add_argument("--continue-past-S", choices=["auto", "off"], default="auto",
                      dest="continue_past_s")
    _backend_args(vero)
    _output_args(vero)
    return parser


def _config(args, parser) -> RankBackendConfig:
    try:
        return RankBackendConfig(
            mode=args.backend,
            prime=args.prime,
            tolerance=args.tol,
            trials=args.trials,
            seed=args.seed,
            vary_prime=args.vary_prime,
            bound=args.bound,
        )
    except ValueError as exc:
        parser.error(str(exc))


def _cache(args) -> ScanCache | None:
    path = args.cache or default_cache_path()
    return ScanCache(path) if path else None


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_scan(args, parser) -> int:
    if args.n_min < 3 or args.n_max < args.n_min:
        parser.error(f"need 3 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
    cfg = _config(args, parser)
    records = []
    try:
        for recs in iter_scan(
            args.n_min,
            args.n_max,
            cfg,
            k_max=args.k_max,
            k_only=args.k_only,
            lift_k_cap=args.lift_k_cap,
            s_max=args.s_max,
            continue_past_S=args.continue_past_s == "auto",
            cache=_cache(args),
            force=args.force,
            jobs=max(1, args.jobs),
        ):
            records.extend(recs)
    except (DegeneratePointError, RegistryContradiction, RuntimeError, MemoryError) as exc:
        log.error("backend failure: %s", exc)
        return EXIT_BACKEND
    records.sort(key=lambda r: (r.n, r.k, r.s))
    _emit(tables.render(records, args.format, paper_style=args.paper_style), args.out)
    return EXIT_OK


def cmd_cell(args, parser) -> int:
    if not 0 <= args.k < args.n or args.s < 1:
        parser.error(f"invalid cell k={args.k}, n={args.n}, s={args.s}")
    cfg = _config(args, parser)
    try:
        rec, res = classify_cell_evidence(args.k, args.n, args.s, cfg)
    except (DegeneratePointError, RegistryContradiction, RuntimeError, MemoryError) as exc:
        log.error("backend failure: %s", exc)
        return EXIT_BACKEND
    if args.dump_matrix is not None:
        from grassecant.scan import stream_seed
        from grassecant.terracini import terracini_matrix

        fld = cfg.field(0)
        tm = terracini_matrix(args.k, args.n, args.s, fld, stream_seed(cfg, args.k, args.n, 0))
        tm.dump(args.dump_matrix, fld)
    if args.format == "text":
        lines = [f"{name}: {value}" for name, value in rec.as_dict().items()]
        lines.append(f"per_trial_ranks: {' '.join(map(str, res.per_trial_ranks))}")
        lines.append(f"certified_lower_bound: {res.certified_lower_bound}")
        text = "\n".join(lines) + "\n"
    else:
        text = tables.render([rec], args.format)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    cfg = _config(args, parser)
    golden = load_golden(args.golden)
    if not golden.checksum_ok:
        print(f"warning: golden asset checksum mismatch ({golden.actual_checksum})",
              file=sys.stderr)
    try:
        report = verify(
            golden,
            cfg,
            n_min=args.n_min,
            n_max=args.n_max,
            k_max=args.k_max,
            cache=_cache(args),
            force=args.force,
            progress=lambda row: log.info("verifying G(%d,%d)", row.k, row.n),
        )
    except (DegeneratePointError, RuntimeError, MemoryError) as exc:
        log.error("backend failure: %s", exc)
        return EXIT_BACKEND
    for m in report.mismatches:
        print(f"MISMATCH {m.describe()}")
    print(f"checked {report.checked} cells, {len(report.mismatches)} mismatches")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_veronese(args, parser) -> int:
    cfg = _config(args, parser)
    try:
        records = veronese_scan(
            cfg,
            k_min=args.k_min,
            k_max=args.k_max,
            n_min=args.n_min,
            n_max=args.n_max,
            s_max=args.s_max,
            continue_past_S=args.continue_past_s == "auto",
        )
    except (RuntimeError, MemoryError) as exc:
        log.error("backend failure: %s", exc)
        return EXIT_BACKEND
    _emit(tables.render(records, args.format, paper_style=args.paper_style, variety="V"),
          args.out)
    return EXIT_OK


COMMANDS = {"scan": cmd_scan, "cell": cmd_cell, "verify": cmd_verify, "veronese": cmd_veronese}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
