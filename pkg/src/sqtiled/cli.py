"""Command-line front end: census tables, density series, verification, brute force.

Exit codes: 0 on success, 1 when a verification check fails, 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import IO, Iterator, Sequence

from . import arith, formulas, origami, verify

logger = logging.getLogger("sqtiled")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

DEFAULT_TABLE_MAX = 5000
DEFAULT_DENSITIES_MAX = 101

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

# Per-suite default n ranges when --n-min/--n-max are not given.
_SUITE_RANGES = {
    "arith-identities": (1, 2000),
    "intermediate-sums": (4, 300),
    "shear-lemma": (None, None),
    "quadruple-lemma": (4, 60),
    "param-oracle": (4, 300),
    "builder-contract": (4, 12),
    "absper": (4, 12),
    "bruteforce": (4, 6),
}


class UsageError(Exception):
    """Bad flags or configuration; mapped to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    n_min: int | None = None
    n_max: int | None = None
    n: int | None = None
    format: str = "csv"
    suite: str = "all"
    out: str | None = None
    workers: int = 1
    allow_n8: bool = False
    sweep: str = "full"


def configure_logging() -> None:
    name = os.environ.get("LOG_LEVEL", "warn").strip().lower()
    level = _LOG_LEVELS.get(name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _census_range(cfg: RunConfig, default_max: int) -> tuple[int, int]:
    n_min = 4 if cfg.n_min is None else cfg.n_min
    n_max = default_max if cfg.n_max is None else cfg.n_max
    if n_min < formulas.H11_MIN_N:
        raise UsageError(f"--n-min must be at least {formulas.H11_MIN_N}")
    if n_max < n_min:
        raise UsageError(f"empty range: --n-min {n_min} > --n-max {n_max}")
    if n_max > arith.ADDITIVE_CAP:
        raise UsageError(f"--n-max is capped at {arith.ADDITIVE_CAP}")
    return n_min, n_max


def cmd_table(cfg: RunConfig) -> int:
    n_min, n_max = _census_range(cfg, DEFAULT_TABLE_MAX)
    rows = formulas.census_rows(n_min, n_max)
    with _output(cfg.out) as fh:
        if cfg.format == "csv":
            fh.write("n,A,B,C,D,E\n")
            for r in rows:
                fh.write(f"{r.n},{r.a},{r.b},{r.c},{r.d},{r.e}\n")
        else:
            for r in rows:
                fh.write(json.dumps(r.as_dict()) + "\n")
    return EXIT_OK


def format_ratio(value) -> str:
    """Shortest decimal that reads back as the float nearest to ``value``."""
    return repr(float(value))


def cmd_densities(cfg: RunConfig) -> int:
    n_min, n_max = _census_range(cfg, DEFAULT_DENSITIES_MAX)
    rows = formulas.census_rows(n_min, n_max)
    with _output(cfg.out) as fh:
        if cfg.format == "csv":
            fh.write("n,rA,rB,rC,rD\n")
            for r in rows:
                fh.write(",".join([str(r.n), *(format_ratio(x) for x in r.ratios())]) + "\n")
        else:
            for r in rows:
                ra, rb, rc, rd = (float(x) for x in r.ratios())
                fh.write(json.dumps({"n": r.n, "rA": ra, "rB": rb, "rC": rc, "rD": rd}) + "\n")
    return EXIT_OK


def _suite_kwargs(name: str, cfg: RunConfig) -> dict:
    lo, hi = _SUITE_RANGES[name]
    n_min = cfg.n_min if cfg.n_min is not None else lo
    n_max = cfg.n_max if cfg.n_max is not None else hi
    if name == "shear-lemma":
        return {}
    if n_max is not None and n_min is not None and n_max < n_min:
        raise UsageError(f"empty range: --n-min {n_min} > --n-max {n_max}")
    if name == "arith-identities":
        return {"n_max": n_max}
    if name == "quadruple-lemma":
        return {"n_max": n_max}
    if name == "bruteforce":
        if n_min < origami.BRUTE_MIN_N or n_max > origami.BRUTE_MAX_N:
            raise UsageError(
                f"bruteforce suite needs {origami.BRUTE_MIN_N} <= n <= {origami.BRUTE_MAX_N}"
            )
        if n_max == origami.BRUTE_MAX_N and not cfg.allow_n8:
            raise UsageError("n = 8 needs --allow-n8")
        return {
            "n_min": n_min,
            "n_max": n_max,
            "workers": cfg.workers,
            "allow_n8": cfg.allow_n8,
            "sweep": cfg.sweep,
        }
    return {"n_min": n_min, "n_max": n_max}


def cmd_verify(cfg: RunConfig) -> int:
    names = list(verify.SUITES) if cfg.suite == "all" else [cfg.suite]
    kwargs = {name: _suite_kwargs(name, cfg) for name in names}
    ok = True
    with _output(cfg.out) as fh:
        for name in names:
            logger.info("running suite %s", name)
            result = verify.SUITES[name](**kwargs[name])
            fh.write(result.summary() + "\n")
            for note in result.notes:
                fh.write(f"  note: {note}\n")
            for msg in result.failures:
                fh.write(f"  failure: {msg}\n")
            ok = ok and result.passed
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_bruteforce(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("bruteforce needs --n")
    if not origami.BRUTE_MIN_N <= cfg.n <= origami.BRUTE_MAX_N:
        raise UsageError(f"--n must lie in {origami.BRUTE_MIN_N}..{origami.BRUTE_MAX_N}")
    if cfg.n == origami.BRUTE_MAX_N and not cfg.allow_n8:
        raise UsageError("n = 8 needs --allow-n8")
    census = origami.brute_force_census(
        cfg.n, sweep=cfg.sweep, workers=cfg.workers, allow_n8=cfg.allow_n8
    )
    report = {
        "n": census.n,
        "H11": census.h11,
        "H2": census.h2,
        "elapsed_seconds": round(census.elapsed_seconds, 3),
    }
    with _output(cfg.out) as fh:
        fh.write(json.dumps(report) + "\n")
    return EXIT_OK


COMMANDS = {
    "table": cmd_table,
    "densities": cmd_densities,
    "verify": cmd_verify,
    "bruteforce": cmd_bruteforce,
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqtiled",
        description="Census of primitive genus-two square-tiled surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write to this file instead of standard output")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    for name, help_text in (
        ("table", "counts A..E per n"),
        ("densities", "ratios A/E..D/E per n"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n-min", type=int)
        p.add_argument("--n-max", type=int)
        common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("all", *verify.SUITES), default="all")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--workers", type=_positive, default=origami.default_workers())
    p.add_argument("--allow-n8", action="store_true")
    p.add_argument("--sweep", choices=("full", "classes"), default="full")
    p.add_argument("--out")

    p = sub.add_parser("bruteforce", help="exhaustive census for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=_positive, default=origami.default_workers())
    p.add_argument("--allow-n8", action="store_true")
    p.add_argument("--sweep", choices=("full", "classes"), default="full")
    p.add_argument("--out")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        n_min=getattr(args, "n_min", None),
        n_max=getattr(args, "n_max", None),
        n=getattr(args, "n", None),
        format=getattr(args, "format", "csv"),
        suite=getattr(args, "suite", "all"),
        out=args.out,
        workers=getattr(args, "workers", 1),
        allow_n8=getattr(args, "allow_n8", False),
        sweep=getattr(args, "sweep", "full"),
    )


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit status 2
        return int(exc.code or 0)
    try:
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"sqtiled {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
