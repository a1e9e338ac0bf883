#!/usr/bin/env python3
"""
Cost of each theta strategy across n: wall time, largest big integer held,
divisor-term count and precision used.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Sequence, Tuple

from app.config import Config
from app.models.results import BenchRow, ThetaStrategy
from app.services.gandhi import compute_next_prime
from app.services.numtheory import first_primes
from app.utils.error_handlers import PrecisionError, ResourceBudgetError

logger = logging.getLogger(__name__)

SKIPPED_BUDGET = "skipped: budget"
SKIPPED_PRECISION = "skipped: precision"


def bench_cell(n: int, strategy: str, initial_precision: int = Config.INITIAL_PRECISION_BITS,
               max_precision: int = Config.MAX_PRECISION_BITS,
               bit_budget: int = Config.EXACT_BIT_BUDGET,
               cross_check: bool = Config.CROSS_CHECK) -> BenchRow:
    """Time one formula application; infeasible cells are marked, not raised."""
    strategy = ThetaStrategy(strategy)
    row = BenchRow(n=n, strategy=strategy.value, status="ok", term_count=1 << n)
    start = time.perf_counter()
    try:
        result = compute_next_prime(
            n, first_primes(n + 1), strategy,
            initial_precision=initial_precision,
            max_precision=max_precision,
            bit_budget=bit_budget,
            cross_check=cross_check,
        )
    except ResourceBudgetError as exc:
        logger.info(f"bench n={n} {strategy.value}: {exc}")
        row.status = SKIPPED_BUDGET
        row.peak_bits = exc.required_bits
        return row
    except PrecisionError as exc:
        logger.info(f"bench n={n} {strategy.value}: {exc}")
        row.status = SKIPPED_PRECISION
        return row
    row.wall_ms = (time.perf_counter() - start) * 1000.0
    row.peak_bits = result.evaluation.peak_bits
    row.precision_bits = result.precision_used
    row.p_next = result.prime
    return row


def _cell(args: Tuple) -> BenchRow:
    return bench_cell(*args)


def run_bench(n_values: Iterable[int], strategies: Sequence[str] = Config.BENCH_STRATEGIES,
              workers: int = 1, **settings) -> List[BenchRow]:
    """One row per (n, strategy), ordered by n then by strategy as given."""
    cells = [(n, s, settings.get('initial_precision', Config.INITIAL_PRECISION_BITS),
              settings.get('max_precision', Config.MAX_PRECISION_BITS),
              settings.get('bit_budget', Config.EXACT_BIT_BUDGET),
              settings.get('cross_check', Config.CROSS_CHECK))
             for n in n_values for s in strategies]
    logger.info(f"Benchmarking {len(cells)} cells on {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(cell) for cell in cells]
