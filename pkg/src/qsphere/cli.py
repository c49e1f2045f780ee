"""Command line entry point: ``qsphere-check``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import SUITES, ConfigError, RunConfig, export_decay, export_spectrum, render_rows, run_suite

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


def _tol_pair(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"tolerance {value!r} is not a number") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsphere-check",
                                description="Verify the truncated spectral triples on SU_q(2) and the Podleś spheres.")
    p.add_argument("--q", type=float, default=0.5, help="deformation parameter in (0, 1)")
    p.add_argument("--c", default="inf", help="Podleś parameter: a number >= 0 or 'inf'")
    p.add_argument("--level", default="4", help="truncation level L, half-integers as '7/2'")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE",
                   help="override a tolerance by check name or suite name (repeatable)")
    p.add_argument("--format", dest="fmt", default="json", choices=("json", "csv"))
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled identity checks")
    p.add_argument("--timings", action="store_true", help="record wall time per check (breaks byte-identical reports)")
    p.add_argument("--export", choices=("D", "Dtilde", "decay"), help="emit a table instead of running checks")
    p.add_argument("--pair", default="A,B", help="x,y for --export decay (from A, B, B*, 1)")
    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        suite = args.suite if args.export is None else "spectral"
        config = RunConfig(q=args.q, c=args.c, level=args.level, suite=suite, tol=dict(args.tol),
                           fmt=args.fmt, out=args.out, seed=args.seed, timings=args.timings)
        if args.export in ("D", "Dtilde"):
            _emit(render_rows(export_spectrum(args.export, config), args.fmt), args.out)
            return EXIT_OK
        if args.export == "decay":
            x, _, y = args.pair.partition(",")
            table = export_decay(x.strip(), y.strip(), config)
            _emit(render_rows(table["rows"], args.fmt, table["meta"]), args.out)
            return EXIT_OK
        report = run_suite(config)
    except ConfigError as exc:
        print(f"qsphere-check: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qsphere-check: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report.to_json() if args.fmt == "json" else report.to_csv(), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
