#!/usr/bin/env python3
"""
Gandhi's formula for the prime following p_n.

    theta(n) = -1/2 + sum_{d | p_n#} mu(d) / (2^d - 1)
    p_{n+1}  = floor(log2(2 / theta(n)))

theta(n) is evaluated three ways: exactly over the divisors of the primorial,
exactly as the periodic bit pattern of the integers coprime to it, and as a
dyadic interval at a chosen binary precision. The floor is always recovered
by exact comparisons against powers of two, never by a logarithm.
"""

import logging
import time
from math import gcd
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from gmpy2 import divexact, mpq, mpz

from app.config import Config
from app.models.results import (BigRational, BoundCheck, BoundReport, NextPrimeResult,
                                 ThetaEvaluation, ThetaStrategy)
from app.services.dyadic import (INCONCLUSIVE, DyadicFixed, DyadicInterval, add,
                                 extract_next_prime, extract_refined_prime, negate,
                                 reciprocal_mersenne)
from app.services.numtheory import (PrimeTable, least_coprime, nth_prime, primorial,
                                    squarefree_divisors, squarefree_divisors_upto)
from app.utils.error_handlers import (DomainError, OracleMismatchError, PrecisionError,
                                      ResourceBudgetError, SequenceExhaustedError)

logger = logging.getLogger(__name__)

_BIT_DIGITS = bytes.maketrans(b'\x00\x01', b'01')


def _as_strategy(strategy: Union[ThetaStrategy, str]) -> ThetaStrategy:
    return strategy if isinstance(strategy, ThetaStrategy) else ThetaStrategy(strategy)


def _budgeted_primorial(n: int, table: PrimeTable, bit_budget: int) -> int:
    """P = p_n#, refused when 2^P - 1 would exceed the bit budget."""
    p_sharp = primorial(n, table).value
    if p_sharp > bit_budget:
        raise ResourceBudgetError(
            f"exact theta({n}) needs a {p_sharp}-bit denominator 2^P - 1; budget is {bit_budget} bits",
            required_bits=p_sharp,
            budget_bits=bit_budget,
        )
    return p_sharp


def coprime_residue_pattern(p_sharp: int, primes) -> mpz:
    """
    sum of 2^(P - r) over residues r in [1, P] coprime to P: one period of
    the coprime bitstream read as a P-bit integer, r = 1 most significant.
    """
    flags = bytearray(b'\x01') * (p_sharp + 1)
    for p in primes:
        flags[0::p] = bytes(len(range(0, p_sharp + 1, p)))
    return mpz(flags[1:].translate(_BIT_DIGITS).decode('ascii'), 2)


def coprime_series(n: int, table: PrimeTable, bit_budget: int = Config.EXACT_BIT_BUDGET) -> BigRational:
    """sum of 2^-t over all t >= 1 with gcd(t, p_n#) = 1, in closed form."""
    p_sharp = _budgeted_primorial(n, table, bit_budget)
    pattern = coprime_residue_pattern(p_sharp, table.head(n))
    return mpq(pattern, (mpz(1) << p_sharp) - 1)


def theta_exact_divisor(n: int, table: PrimeTable, bit_budget: int = Config.EXACT_BIT_BUDGET) -> ThetaEvaluation:
    """
    theta(n) over the single denominator 2^P - 1.

    d | P implies (2^d - 1) | (2^P - 1), so each summand becomes the integer
    cofactor (2^P - 1) / (2^d - 1) and no pairwise LCM is ever formed.
    """
    p_sharp = _budgeted_primorial(n, table, bit_budget)
    logger.info(f"Computing theta({n}) via exact-divisor over a {p_sharp}-bit denominator")
    mersenne = (mpz(1) << p_sharp) - 1
    numerator = mpz(0)
    for term in squarefree_divisors(n, table):
        cofactor = divexact(mersenne, (mpz(1) << term.d) - 1)
        numerator += cofactor if term.mu > 0 else -cofactor
    # -1/2 folded in by doubling the denominator
    theta = mpq(2 * numerator - mersenne, 2 * mersenne)
    return ThetaEvaluation(n=n, strategy=ThetaStrategy.EXACT_DIVISOR, exact=theta, peak_bits=p_sharp)


def theta_exact_coprime(n: int, table: PrimeTable, bit_budget: int = Config.EXACT_BIT_BUDGET) -> ThetaEvaluation:
    """theta(n) as the coprime bitstream summed in closed form, minus its t = 1 term."""
    p_sharp = _budgeted_primorial(n, table, bit_budget)
    logger.info(f"Computing theta({n}) via exact-coprime over {p_sharp} residues")
    mersenne = (mpz(1) << p_sharp) - 1
    pattern = coprime_residue_pattern(p_sharp, table.head(n))
    theta = mpq(2 * pattern - mersenne, 2 * mersenne)
    return ThetaEvaluation(n=n, strategy=ThetaStrategy.EXACT_COPRIME, exact=theta, peak_bits=p_sharp)


def theta_interval(n: int, table: PrimeTable, frac_bits: int) -> ThetaEvaluation:
    """
    Enclosure of theta(n) at B fractional bits, every one of the 2^n divisor
    terms contributing exactly one ulp of width.

    Divisors d <= B go through reciprocal_mersenne; the remaining ones all
    lie in [0, 2^-B] and are charged to the endpoints in bulk.
    """
    largest = table.head(n)[-1]
    if frac_bits < largest:
        raise PrecisionError(f"theta({n}) needs at least {largest} fractional bits, got {frac_bits}")
    enclosure = negate(DyadicInterval.point(DyadicFixed.power_of_two(-1, frac_bits)))
    near = squarefree_divisors_upto(n, table, frac_bits)
    for term in near:
        part = reciprocal_mersenne(term.d, frac_bits)
        enclosure = add(enclosure, part if term.mu > 0 else negate(part))
    # 2^(n-1) subsets of each parity
    half = 1 << (n - 1)
    far_plus = half - sum(1 for term in near if term.mu > 0)
    far_minus = half - sum(1 for term in near if term.mu < 0)
    enclosure = add(enclosure, DyadicInterval.from_mantissas(-far_minus, far_plus, frac_bits))
    peak = max(abs(enclosure.lo.mantissa), abs(enclosure.hi.mantissa)).bit_length()
    return ThetaEvaluation(
        n=n,
        strategy=ThetaStrategy.INTERVAL,
        enclosure=enclosure,
        frac_bits_used=frac_bits,
        peak_bits=peak,
    )


EVALUATORS: Dict[ThetaStrategy, Callable] = {
    ThetaStrategy.EXACT_DIVISOR: theta_exact_divisor,
    ThetaStrategy.EXACT_COPRIME: theta_exact_coprime,
}


def theta_bits(n: int, table: PrimeTable, frac_bits: int) -> Tuple[int, ...]:
    """
    The first B fractional bits of theta(n); entry i is the bit at position
    i + 1, set iff i + 1 >= 2 and gcd(i + 1, p_n#) = 1.
    """
    if frac_bits < 2:
        raise DomainError(f"theta_bits needs B >= 2, got {frac_bits}")
    p_sharp = primorial(n, table).value
    return tuple(int(t >= 2 and gcd(t, p_sharp) == 1) for t in range(1, frac_bits + 1))


def first_one_bit(bits: Tuple[int, ...]) -> Optional[int]:
    """1-based position of the leading 1-bit, or None."""
    for position, bit in enumerate(bits, start=1):
        if bit:
            return position
    return None


def theta_bits_match_expansion(n: int, table: PrimeTable, frac_bits: int,
                               bit_budget: int = Config.EXACT_BIT_BUDGET) -> bool:
    """The coprime bitstream equals floor(theta(n) * 2^B) written in binary."""
    theta = theta_exact_divisor(n, table, bit_budget).exact
    truncated = (theta.numerator << frac_bits) // theta.denominator
    expansion = tuple(int(ch) for ch in format(int(truncated), 'b').zfill(frac_bits))
    return expansion == theta_bits(n, table, frac_bits)


def _strict_floor_log2(num: int, den: int) -> int:
    """k with 2^k < num/den < 2^(k+1); the lower bound must be strict."""
    k = int(num.bit_length()) - int(den.bit_length())
    a, b = (num, den << k) if k >= 0 else (num << -k, den)
    if a == b:
        raise DomainError(f"{num}/{den} is a power of two; the bracket is not strict")
    return k if a > b else k - 1


def _exact_gandhi(theta: BigRational) -> int:
    return _strict_floor_log2(2 * theta.denominator, theta.numerator)


def _exact_refined(theta: BigRational) -> int:
    return _strict_floor_log2(3 * theta.denominator, 2 * theta.numerator)


def _exact_original(theta: BigRational) -> int:
    return 1 + _strict_floor_log2(theta.denominator, theta.numerator)


_FORMULAS = {
    'gandhi': (_exact_gandhi, extract_next_prime),
    'refined': (_exact_refined, extract_refined_prime),
    # floor(1 - log2 theta) brackets theta exactly like floor(log2(2/theta))
    'original': (_exact_original, extract_next_prime),
}


def _escalate(n: int, table: PrimeTable, extractor, initial_precision: int,
              max_precision: int) -> Tuple[int, ThetaEvaluation, List[int]]:
    frac_bits = max(initial_precision, 1)
    largest = table.head(n)[-1]
    while frac_bits < largest:
        frac_bits *= 2
    inconclusive = []
    while frac_bits <= max_precision:
        evaluation = theta_interval(n, table, frac_bits)
        prime = extractor(evaluation.enclosure)
        if prime is not INCONCLUSIVE:
            return prime, evaluation, inconclusive
        logger.debug(f"theta({n}) enclosure inconclusive at {frac_bits} bits, doubling")
        inconclusive.append(frac_bits)
        frac_bits *= 2
    raise PrecisionError(f"theta({n}) still inconclusive at the {max_precision}-bit ceiling")


def _cross_check(n: int, prime: int) -> None:
    expected = nth_prime(n + 1)
    if prime != expected:
        raise OracleMismatchError(f"formula gives {prime} after p_{n}, sieve gives p_{n + 1} = {expected}")


def compute_next_prime(n: int, table: PrimeTable,
                       strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL, *,
                       formula: str = 'gandhi',
                       initial_precision: int = Config.INITIAL_PRECISION_BITS,
                       max_precision: int = Config.MAX_PRECISION_BITS,
                       bit_budget: int = Config.EXACT_BIT_BUDGET,
                       cross_check: bool = Config.CROSS_CHECK) -> NextPrimeResult:
    """p_{n+1} from p_1..p_n of ``table`` with the full evaluation record."""
    strategy = _as_strategy(strategy)
    exact_extractor, interval_extractor = _FORMULAS[formula]
    start = time.perf_counter()
    inconclusive: List[int] = []
    if strategy.is_exact:
        evaluation = EVALUATORS[strategy](n, table, bit_budget)
        prime = exact_extractor(evaluation.exact)
    else:
        prime, evaluation, inconclusive = _escalate(
            n, table, interval_extractor, initial_precision, max_precision)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if cross_check:
        _cross_check(n, prime)
    logger.info(f"p_{n + 1} = {prime} via {strategy.value} ({formula}) in {elapsed_ms:.1f} ms")
    return NextPrimeResult(
        n=n,
        prime=prime,
        strategy=strategy,
        evaluation=evaluation,
        inconclusive_precisions=inconclusive,
        elapsed_ms=elapsed_ms,
    )


def next_prime_gandhi(n: int, table: PrimeTable,
                      strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL, **settings) -> int:
    """floor(log2(2 / theta(n)))"""
    return compute_next_prime(n, table, strategy, formula='gandhi', **settings).prime


def next_prime_refined(n: int, table: PrimeTable,
                       strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL, **settings) -> int:
    """floor(log2(3 / (2 theta(n)))), the tighter form of the same floor."""
    return compute_next_prime(n, table, strategy, formula='refined', **settings).prime


def next_prime_original(n: int, table: PrimeTable,
                        strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL, **settings) -> int:
    """floor(1 - log2 theta(n)), the formula as first stated."""
    return compute_next_prime(n, table, strategy, formula='original', **settings).prime


def _exact_theta(n: int, table: PrimeTable, bit_budget: int,
                 strategy: ThetaStrategy = ThetaStrategy.EXACT_DIVISOR) -> BigRational:
    return EVALUATORS[strategy](n, table, bit_budget).exact


def residual(n: int, table: PrimeTable, bit_budget: int = Config.EXACT_BIT_BUDGET) -> BigRational:
    """r_n = theta(n) - 2^-p_{n+1}"""
    p_next = least_coprime(n, table)
    return _exact_theta(n, table, bit_budget) - mpq(1, mpz(1) << p_next)


def bounds_report(n: int, table: PrimeTable, bit_budget: int = Config.EXACT_BIT_BUDGET) -> BoundReport:
    """Every inequality that pins p_{n+1} down, checked with exact rationals."""
    theta = _exact_theta(n, table, bit_budget)
    p_next = least_coprime(n, table)
    p_after = table.prime(n + 2) if len(table) >= n + 2 else nth_prime(n + 2)
    lead = mpq(1, mpz(1) << p_next)
    lead_after = mpq(1, mpz(1) << p_after)
    r = theta - lead
    checks = [
        BoundCheck.evaluate("lead_below_theta", lead, "<", theta),
        BoundCheck.evaluate("theta_below_twice_lead", theta, "<", 2 * lead),
        BoundCheck.evaluate("residual_below_lead", r, "<", lead),
        BoundCheck.evaluate("residual_below_half_lead", r, "<", lead / 2),
        BoundCheck.evaluate("theta_below_three_halves_lead", theta, "<", mpq(3, 2) * lead),
        BoundCheck.evaluate("residual_exceeds_its_lead", lead_after, "<", r),
        BoundCheck.evaluate("residual_below_twice_its_lead", r, "<", 2 * lead_after),
    ]
    report = BoundReport(n=n, p_next=p_next, theta=theta, residual=r, checks=checks)
    logger.info(f"Bound report n={n}: {sum(c.passed for c in checks)}/{len(checks)} checks pass")
    return report


def iter_gandhi_sequence(count: int, strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL,
                         **settings) -> Iterator[NextPrimeResult]:
    """
    Bootstrap from p_1 = 2 and apply the formula count - 1 times, each step
    seeing only the primes the formula itself produced.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    table = PrimeTable((2,))
    for n in range(1, count):
        try:
            result = compute_next_prime(n, table, strategy, **settings)
        except ResourceBudgetError as exc:
            raise SequenceExhaustedError(
                f"stopped after {len(table)} primes: {exc}",
                partial=table,
                required_bits=exc.required_bits,
                budget_bits=exc.budget_bits,
            ) from exc
        table = table.appended(result.prime)
        yield result


def gandhi_sequence(count: int, strategy: Union[ThetaStrategy, str] = ThetaStrategy.INTERVAL,
                    **settings) -> PrimeTable:
    """The first ``count`` primes, every one after the seed produced by the formula."""
    table = PrimeTable((2,))
    for result in iter_gandhi_sequence(count, strategy, **settings):
        table = table.appended(result.prime)
    return table
