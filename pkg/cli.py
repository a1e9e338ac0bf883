#!/usr/bin/env python3
"""
Command-line front end for the Gandhi prime formula toolkit

    python cli.py next 2
    python cli.py sequence 20 --strategy interval
    python cli.py verify bounds --n 1..8
    python cli.py bench --n 1..12 --format csv
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.config import get_config
from app.models.results import ThetaStrategy
from app.models.schemas import BenchRecord, CheckRecord, NextRecord, RunConfig
from app.services.bench import run_bench
from app.services.gandhi import compute_next_prime, iter_gandhi_sequence
from app.services.identitylab import SUITE_ALIASES, SUITES, run_suite
from app.services.numtheory import first_primes
from app.utils.error_handlers import (EXIT_OK, EXIT_USAGE, DomainError, GandhiError, VerificationFailure,
                                      handle_cli_error)
from app.utils.file_utils import append_ndjson
from app.utils.formatters import RecordWriter

logger = logging.getLogger(__name__)

NEXT_FIELDS = ["n", "p_next", "strategy", "theta_num", "theta_den", "theta_lo", "theta_hi",
               "precision_bits", "elapsed_ms"]
PLAIN_NEXT_FIELDS = ["n", "p_next", "strategy", "theta", "precision_bits", "elapsed_ms"]
SEQUENCE_FIELDS = ["index", "prime", "strategy", "precision_bits", "inconclusive_attempts", "elapsed_ms"]
CHECK_FIELDS = ["suite", "identity", "instance", "lhs", "rhs", "residual", "expected_residual", "passed"]
BENCH_FIELDS = ["n", "strategy", "status", "term_count", "peak_bits", "precision_bits", "p_next", "wall_ms"]

_FALSE = {"0", "false", "no", "off"}


def parse_range(text: str) -> Tuple[int, int]:
    """'3' -> (3, 3); '1..8' -> (1, 8)"""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            bounds = int(lo), int(hi)
        else:
            bounds = int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}")
    if bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return bounds


def _from_env(environ: Mapping[str, str], key: str, cast):
    raw = environ.get(key)
    if raw is None or raw == "":
        return None
    try:
        return cast(raw)
    except ValueError:
        raise DomainError(f"invalid {key}={raw!r}")


def _flag_or_env(flag, environ, key, cast, default):
    if flag is not None:
        return flag
    value = _from_env(environ, key, cast)
    return default if value is None else value


def load_run_config(args: argparse.Namespace, environ: Mapping[str, str] = None) -> RunConfig:
    """Flags > GANDHI_* environment variables > configuration defaults."""
    environ = os.environ if environ is None else environ
    defaults = get_config(environ)
    if args.no_cross_check:
        cross_check = False
    else:
        cross_check = _flag_or_env(None, environ, "GANDHI_CROSS_CHECK",
                                   lambda raw: raw.strip().lower() not in _FALSE, defaults.CROSS_CHECK)
    try:
        return RunConfig(
            strategy=_flag_or_env(args.strategy, environ, "GANDHI_STRATEGY", str, defaults.STRATEGY),
            initial_precision_bits=_flag_or_env(args.precision, environ, "GANDHI_PRECISION", int,
                                                defaults.INITIAL_PRECISION_BITS),
            max_precision_bits=_flag_or_env(args.max_precision, environ, "GANDHI_MAX_PRECISION", int,
                                            defaults.MAX_PRECISION_BITS),
            exact_bit_budget=_flag_or_env(args.budget, environ, "GANDHI_BUDGET", int, defaults.EXACT_BIT_BUDGET),
            output_format=_flag_or_env(args.format, environ, "GANDHI_FORMAT", str, defaults.OUTPUT_FORMAT),
            cross_check=cross_check,
            log_path=args.log,
            workers=args.workers or defaults.WORKERS,
        )
    except ValidationError as exc:
        raise DomainError(f"invalid configuration: {exc.errors()[0]['msg']}")


def configure_logging(level: Optional[str], environ: Mapping[str, str] = None) -> None:
    environ = os.environ if environ is None else environ
    defaults = get_config(environ)
    level = (level or environ.get("GANDHI_LOG_LEVEL") or defaults.LOG_LEVEL).upper()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = environ.get("GANDHI_LOG_FILE") or defaults.LOG_FILE
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=defaults.LOG_FORMAT,
                        handlers=handlers, force=True)


def _settings(config: RunConfig) -> Dict[str, object]:
    return {
        "initial_precision": config.initial_precision_bits,
        "max_precision": config.max_precision_bits,
        "bit_budget": config.exact_bit_budget,
        "cross_check": config.cross_check,
    }


def _persist(config: RunConfig, records: List[Dict]) -> None:
    if config.log_path and records:
        append_ndjson(config.log_path, records)


def _theta_display(record: Dict) -> str:
    if record.get("theta_num") is not None:
        return f"{record['theta_num']}/{record['theta_den']}"
    lo, hi = record["theta_lo"], record["theta_hi"]
    return f"[{lo[0]}*2^{lo[1]}, {hi[0]}*2^{hi[1]}]"


def cmd_next(n: int, config: RunConfig, out=None) -> int:
    """p_{n+1} from p_1..p_n with one record describing the evaluation."""
    out = out or sys.stdout
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    fields = PLAIN_NEXT_FIELDS if config.output_format.value == "plain" else NEXT_FIELDS
    writer = RecordWriter(out, config.output_format, fields)
    result = compute_next_prime(n, first_primes(n), config.strategy, **_settings(config))
    record = NextRecord(**result.to_dict()).model_dump()
    writer.write(record, display={"theta": _theta_display(record)})
    _persist(config, writer.written)
    return EXIT_OK


def cmd_sequence(count: int, config: RunConfig, out=None) -> int:
    """One row per prime; rows already emitted survive a budget stop."""
    out = out or sys.stdout
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    writer = RecordWriter(out, config.output_format, SEQUENCE_FIELDS)
    writer.write({"index": 1, "prime": 2, "strategy": "seed", "precision_bits": None,
                  "inconclusive_attempts": 0, "elapsed_ms": 0.0})
    try:
        for result in iter_gandhi_sequence(count, config.strategy, **_settings(config)):
            writer.write({
                "index": result.n + 1,
                "prime": result.prime,
                "strategy": result.strategy.value,
                "precision_bits": result.precision_used,
                "inconclusive_attempts": len(result.inconclusive_precisions),
                "elapsed_ms": round(result.elapsed_ms, 3),
            })
    finally:
        _persist(config, writer.written)
    return EXIT_OK


def cmd_verify(suite: str, ranges: Dict[str, Tuple[int, int]], config: RunConfig, out=None) -> int:
    """Write every check row, then raise VerificationFailure if any check failed."""
    out = out or sys.stdout
    writer = RecordWriter(out, config.output_format, CHECK_FIELDS)
    results = run_suite(suite, ranges, workers=config.workers, config=get_config(),
                        bit_budget=config.exact_bit_budget)
    for result in results:
        row = result.to_dict()
        writer.write(CheckRecord(
            suite=suite,
            identity=row["identity"],
            instance=";".join(f"{k}={v}" for k, v in result.instance),
            lhs=row["lhs"],
            rhs=row["rhs"],
            residual=row["residual"],
            expected_residual=row["expected_residual"],
            passed=row["passed"],
        ).model_dump())
    _persist(config, writer.written)
    failed = sum(1 for r in results if not r.passed)
    writer.summary(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        raise VerificationFailure(f"{failed} of {len(results)} {suite} checks failed")
    return EXIT_OK


def cmd_bench(config: RunConfig, n_range: Tuple[int, int] = None,
              strategies: Sequence[str] = None, out=None) -> int:
    """Timing table over (n, strategy); infeasible cells are reported as skipped."""
    out = out or sys.stdout
    defaults = get_config()
    lo, hi = n_range or defaults.BENCH_N_RANGE
    writer = RecordWriter(out, config.output_format, BENCH_FIELDS)
    rows = run_bench(range(lo, hi + 1), strategies or defaults.BENCH_STRATEGIES,
                     workers=config.workers, **_settings(config))
    for row in rows:
        writer.write(BenchRecord(**row.to_dict()).model_dump())
    _persist(config, writer.written)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strategy", choices=[s.value for s in ThetaStrategy], default=None)
    common.add_argument("--precision", type=int, default=None, help="initial fractional bits (interval)")
    common.add_argument("--max-precision", type=int, default=None, help="precision ceiling in bits")
    common.add_argument("--budget", type=int, default=None, help="exact strategies: primorial bit budget")
    common.add_argument("--format", choices=["json", "csv", "plain"], default=None)
    common.add_argument("--no-cross-check", action="store_true", help="skip the sieve oracle assertion")
    common.add_argument("--log", default=None, metavar="PATH", help="append records as JSON lines")
    common.add_argument("--log-level", default=None)
    common.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(prog="gandhi", description="Successive primes from Gandhi's formula")
    sub = parser.add_subparsers(dest="command", required=True)

    p_next = sub.add_parser("next", parents=[common], help="compute p_{n+1} from p_1..p_n")
    p_next.add_argument("n", type=int)

    p_seq = sub.add_parser("sequence", parents=[common], help="bootstrap the first COUNT primes")
    p_seq.add_argument("count", type=int)

    p_verify = sub.add_parser("verify", parents=[common], help="run an identity or bound suite")
    p_verify.add_argument("suite", choices=list(SUITES) + list(SUITE_ALIASES) + ["all"])
    p_verify.add_argument("--n", type=parse_range, default=None)
    p_verify.add_argument("--max", type=int, default=None, help="largest m (mobius)")
    p_verify.add_argument("--max-a", type=int, default=None)
    p_verify.add_argument("--max-k", type=int, default=None)
    p_verify.add_argument("--t", type=int, default=None, help="largest t (coefficients)")
    p_verify.add_argument("--limit", type=int, default=None, help="index-set limit")
    p_verify.add_argument("--prime-index", type=parse_range, default=None)

    p_bench = sub.add_parser("bench", parents=[common], help="time every strategy across n")
    p_bench.add_argument("--n", type=parse_range, default=None)
    p_bench.add_argument("--strategies", nargs="+", choices=[s.value for s in ThetaStrategy], default=None)
    return parser


def _verify_ranges(args: argparse.Namespace) -> Dict[str, Tuple[int, int]]:
    ranges: Dict[str, Tuple[int, int]] = {}
    if args.n is not None:
        ranges["n"] = args.n
    if args.max is not None:
        ranges["m"] = (1, args.max)
    if args.max_a is not None:
        ranges["a"] = (1, args.max_a)
    if args.max_k is not None:
        ranges["k"] = (1, args.max_k)
    if args.t is not None:
        ranges["t"] = (1, args.t)
    if args.limit is not None:
        ranges["limit"] = (1, args.limit)
    if args.prime_index is not None:
        ranges["prime_index"] = args.prime_index
    return ranges


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; --help exits 0
        return EXIT_USAGE if exc.code else EXIT_OK
    configure_logging(args.log_level)
    try:
        config = load_run_config(args)
        if args.command == "next":
            return cmd_next(args.n, config)
        if args.command == "sequence":
            return cmd_sequence(args.count, config)
        if args.command == "verify":
            return cmd_verify(args.suite, _verify_ranges(args), config)
        return cmd_bench(config, args.n, args.strategies)
    except GandhiError as exc:
        return handle_cli_error(exc)


if __name__ == "__main__":
    sys.exit(main())
