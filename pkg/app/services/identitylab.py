#!/usr/bin/env python3
"""
Executable checks of the identities and inequalities behind Gandhi's formula.

Every check is exact: truncated series are compared against their closed-form
tails, never against a tolerance.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from gmpy2 import mpq, mpz

from app.config import Config
from app.models.results import BigRational, BoundReport, IdentityCheckResult
from app.services.gandhi import (bounds_report, coprime_series, first_one_bit,
                                 theta_bits)
from app.services.numtheory import (PrimeTable, first_primes, mobius, mobius_divisor_sum,
                                    primorial, squarefree_divisors, verify_gap_facts)
from app.utils.error_handlers import DomainError

logger = logging.getLogger(__name__)

ZERO = mpq(0)


def _pow2(exponent: int) -> BigRational:
    """2^exponent as an exact rational, for any integer exponent."""
    if exponent >= 0:
        return mpq(mpz(1) << exponent)
    return mpq(1, mpz(1) << -exponent)


def _result(name: str, instance: Dict[str, int], lhs, rhs, expected_residual,
            passed: bool = None, details: str = None) -> IdentityCheckResult:
    lhs, rhs, expected_residual = mpq(lhs), mpq(rhs), mpq(expected_residual)
    residual = rhs - lhs
    if passed is None:
        passed = residual == expected_residual
    return IdentityCheckResult(
        identity_name=name,
        instance=tuple(sorted(instance.items())),
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        expected_residual=expected_residual,
        passed=bool(passed),
        details=details,
    )


def verify_geometric_identity(a: int, k_terms: int) -> IdentityCheckResult:
    """sum_{k=1}^{K} 2^-ka against 1/(2^a - 1); the residual is the tail 2^-Ka / (2^a - 1)."""
    if a < 1 or k_terms < 1:
        raise DomainError(f"need a >= 1 and K >= 1, got a={a}, K={k_terms}")
    lhs = sum((_pow2(-k * a) for k in range(1, k_terms + 1)), ZERO)
    mersenne = (mpz(1) << a) - 1
    rhs = mpq(1, mersenne)
    tail = mpq(1, (mpz(1) << (k_terms * a)) * mersenne)
    return _result("geometric", {"a": a, "K": k_terms}, lhs, rhs, tail)


def _divisor_form(n: int, table: PrimeTable) -> BigRational:
    # plain rational summation, independent of the common-denominator evaluator
    return sum((mpq(term.mu, (mpz(1) << term.d) - 1) for term in squarefree_divisors(n, table)), ZERO)


def verify_divisor_coprime_identity(n: int, table: PrimeTable = None,
                                    bit_budget: int = Config.EXACT_BIT_BUDGET) -> IdentityCheckResult:
    """
    sum_{d | p_n#} mu(d) / (2^d - 1) equals sum of 2^-t over t >= 1 coprime
    to p_n#; the residual must be exactly zero.
    """
    table = table or first_primes(n)
    rhs = coprime_series(n, table, bit_budget)
    lhs = _divisor_form(n, table)
    return _result("divisor_coprime", {"n": n}, lhs, rhs, ZERO)


def verify_geometric_tail(n: int) -> IdentityCheckResult:
    """
    sum_{t>n} 2^-t = 2^-n, via the partial sum sum_{k=0}^{n} 2^-k = 2 - 2^-n
    accumulated term by term.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    partial = sum((_pow2(-k) for k in range(n + 1)), ZERO)
    tail = 2 - partial
    closed = _pow2(-n)
    return _result("geometric_tail", {"n": n}, tail, closed, ZERO,
                   passed=partial == 2 - closed and tail == closed)


def verify_mobius_sum(m_max: int) -> List[IdentityCheckResult]:
    """sum_{d | m} mu(d) = [m == 1] for every m in 1..m_max."""
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    results = [
        _result("mobius_sum", {"m": m}, mobius_divisor_sum(m), int(m == 1), ZERO)
        for m in range(1, m_max + 1)
    ]
    logger.info(f"Mobius divisor sums: {sum(r.passed for r in results)}/{m_max} pass")
    return results


def verify_coprime_tail_bound(n: int, prime_index: int,
                              bit_budget: int = Config.EXACT_BIT_BUDGET) -> IdentityCheckResult:
    """
    sum_{t>n, gcd(t, p#)=1} 2^-t < 2^-n with p = p_{prime_index}.

    The residual 2^-n - lhs must equal the complementary sum over t > n with
    gcd(t, p#) > 1, computed independently, and be positive.
    """
    if n < 1:
        raise DomainError(f"cutoff must be >= 1, got {n}")
    table = first_primes(prime_index)
    p_sharp = primorial(prime_index, table).value
    coprime_total = coprime_series(prime_index, table, bit_budget)
    head = [t for t in range(1, n + 1) if gcd(t, p_sharp) == 1]
    lhs = coprime_total - sum((_pow2(-t) for t in head), ZERO)
    shared_head = [t for t in range(1, n + 1) if gcd(t, p_sharp) > 1]
    # all t >= 1 sum to 1
    complement = (1 - coprime_total) - sum((_pow2(-t) for t in shared_head), ZERO)
    witness = next(t for t in range(n + 1, n + 3) if gcd(t, p_sharp) > 1)
    return _result(
        "coprime_tail_bound", {"n": n, "prime_index": prime_index},
        lhs, _pow2(-n), complement,
        passed=(_pow2(-n) - lhs == complement) and complement > 0 and lhs < _pow2(-n),
        details=f"t={witness} shares a factor with p#",
    )


def verify_coefficient_law(n: int, t_max: int, table: PrimeTable = None) -> List[IdentityCheckResult]:
    """
    Expanding sum_d mu(d) sum_k 2^-kd, the coefficient of 2^-t collects mu(d)
    over d | gcd(t, p_n#); it must be 1 when gcd is 1 and 0 otherwise.
    """
    table = table or first_primes(n)
    terms = squarefree_divisors(n, table)
    p_sharp = primorial(n, table).value
    results = []
    for t in range(1, t_max + 1):
        coefficient = sum(term.mu for term in terms if t % term.d == 0)
        through_gcd = sum(mobius(d) for d in range(1, t + 1) if gcd(t, p_sharp) % d == 0)
        expected = int(gcd(t, p_sharp) == 1)
        results.append(_result(
            "coefficient", {"n": n, "t": t}, coefficient, expected, ZERO,
            passed=coefficient == through_gcd == expected,
        ))
    return results


def verify_index_set(n: int, limit: int, table: PrimeTable = None) -> IdentityCheckResult:
    """
    The summation indices {t >= p_{n+1} : gcd(t, p_n#) = 1} up to ``limit``
    are what survives sieving out p_1..p_n and their multiples; the least
    survivor is p_{n+1} and the set is the support of theta_bits.
    """
    table = (table or first_primes(n + 1)).extended(n + 1)
    p_next = table.prime(n + 1)
    survivors = bytearray(b'\x01') * (limit + 1)
    survivors[0] = survivors[1] = 0
    for p in table.head(n):
        survivors[0::p] = bytes(len(range(0, limit + 1, p)))
    sieved = [t for t in range(limit + 1) if survivors[t]]
    p_sharp = primorial(n, table).value
    index_set = [t for t in range(p_next, limit + 1) if gcd(t, p_sharp) == 1]
    bits = theta_bits(n, table, limit)
    support = [position for position, bit in enumerate(bits, start=1) if bit]
    lhs = sum((_pow2(-t) for t in index_set), ZERO)
    rhs = sum((_pow2(-t) for t in sieved), ZERO)
    least = sieved[0] if sieved else None
    return _result(
        "index_set", {"n": n, "limit": limit}, lhs, rhs, ZERO,
        passed=index_set == sieved == support and least == p_next == first_one_bit(bits),
        details=f"least index {least}",
    )


def verify_gaps(n_max: int) -> List[IdentityCheckResult]:
    """Both prime-gap facts for n = 1..n_max, as pass/fail rows."""
    table = first_primes(n_max + 2)
    results = []
    for n in range(1, n_max + 1):
        below_double, spaced = verify_gap_facts(n, table)
        results.append(_result(
            "gap_facts", {"n": n}, table.prime(n + 2), 2 * table.prime(n + 1),
            2 * table.prime(n + 1) - table.prime(n + 2),
            passed=below_double and spaced,
        ))
    return results


def _bounds_rows(n: int, bit_budget: int) -> List[IdentityCheckResult]:
    report: BoundReport = bounds_report(n, first_primes(n + 2), bit_budget)
    return [
        _result(f"bound:{check.name}", {"n": n}, check.left, check.right, check.margin,
                passed=check.passed)
        for check in report.checks
    ]


SUITES = ('geometric', 'coprime-identity', 'geometric-tail', 'mobius', 'tailbound',
          'bounds', 'gaps', 'coefficients', 'index-set')

# numbered names accepted on the command line
SUITE_ALIASES = {'theorem53': 'coprime-identity', 'theorem54': 'geometric-tail'}


def plan_suite(suite: str, ranges: Dict[str, Tuple[int, int]], config=Config,
               bit_budget: int = None) -> List[Tuple[str, tuple]]:
    """Instances of ``suite`` as (job name, args) pairs, with ranges defaulting to ``config``."""
    def span(key, default):
        lo, hi = ranges.get(key, default)
        return range(lo, hi + 1)

    suite = SUITE_ALIASES.get(suite, suite)
    budget = bit_budget or config.EXACT_BIT_BUDGET
    if suite == 'geometric':
        return [('geometric', (a, k))
                for a in span('a', (1, config.GEOMETRIC_MAX_A))
                for k in span('k', (1, config.GEOMETRIC_MAX_K))]
    if suite == 'coprime-identity':
        return [('coprime-identity', (n, budget)) for n in span('n', (1, config.COPRIME_IDENTITY_MAX_N))]
    if suite == 'geometric-tail':
        return [('geometric-tail', (n,)) for n in span('n', (0, config.GEOMETRIC_TAIL_MAX_N))]
    if suite == 'mobius':
        return [('mobius', (span('m', (1, config.MOBIUS_MAX_M)).stop - 1,))]
    if suite == 'tailbound':
        return [('tailbound', (n, i, budget))
                for i in span('prime_index', (1, config.TAIL_BOUND_MAX_PRIME_INDEX))
                for n in span('n', (1, config.TAIL_BOUND_MAX_CUTOFF))]
    if suite == 'bounds':
        return [('bounds', (n, budget)) for n in span('n', config.BOUNDS_N_RANGE)]
    if suite == 'gaps':
        return [('gaps', (span('n', (1, config.GAPS_MAX_N)).stop - 1,))]
    if suite == 'coefficients':
        t_max = ranges.get('t', (1, config.COEFFICIENT_MAX_T))[1]
        return [('coefficients', (n, t_max)) for n in span('n', (1, config.COEFFICIENT_MAX_N))]
    if suite == 'index-set':
        limit = ranges.get('limit', (1, config.INDEX_SET_LIMIT))[1]
        return [('index-set', (n, limit)) for n in span('n', (1, config.INDEX_SET_MAX_N))]
    raise DomainError(f"unknown suite {suite!r}")


def _divisor_coprime_job(n: int, bit_budget: int) -> IdentityCheckResult:
    return verify_divisor_coprime_identity(n, bit_budget=bit_budget)


_JOBS: Dict[str, Callable[..., object]] = {
    'geometric': verify_geometric_identity,
    'coprime-identity': _divisor_coprime_job,
    'geometric-tail': verify_geometric_tail,
    'mobius': verify_mobius_sum,
    'tailbound': verify_coprime_tail_bound,
    'bounds': _bounds_rows,
    'gaps': verify_gaps,
    'coefficients': verify_coefficient_law,
    'index-set': verify_index_set,
}


def run_job(job: Tuple[str, tuple]) -> List[IdentityCheckResult]:
    name, args = job
    outcome = _JOBS[name](*args)
    return list(outcome) if isinstance(outcome, list) else [outcome]


def run_suite(suite: str, ranges: Dict[str, Tuple[int, int]] = None, workers: int = 1,
              config=Config, bit_budget: int = None) -> List[IdentityCheckResult]:
    """
    Run every instance of ``suite`` ('all' runs each suite in turn). With
    workers > 1 instances fan out to a process pool; results are merged in
    instance order either way.
    """
    ranges = ranges or {}
    suites: Sequence[str] = SUITES if suite == 'all' else (suite,)
    jobs = [job for name in suites for job in plan_suite(name, ranges if suite != 'all' else {}, config, bit_budget)]
    logger.info(f"Running {len(jobs)} verification jobs for suite {suite!r} on {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches: Iterable[List[IdentityCheckResult]] = pool.map(run_job, jobs)
            results = [r for batch in batches for r in batch]
    else:
        results = [r for job in jobs for r in run_job(job)]
    failed = [r for r in results if not r.passed]
    for r in failed:
        logger.error(f"Check failed: {r.identity_name} {dict(r.instance)} residual={r.residual}")
    logger.info(f"Suite {suite!r}: {len(results) - len(failed)}/{len(results)} checks pass")
    return results
