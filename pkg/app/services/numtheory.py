#!/usr/bin/env python3
"""
Integer number theory used by the Gandhi formula: the Eratosthenes prime
oracle, the Moebius function, primorials, squarefree divisor enumeration and
the prime-gap facts relied on by the refined bound.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod
from typing import List, Sequence, Tuple

from app.config import Config
from app.utils.error_handlers import DomainError, OracleMismatchError

logger = logging.getLogger(__name__)


def is_prime(m: int) -> bool:
    """Deterministic trial division up to isqrt(m)."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0 or m % 3 == 0:
        return False
    f = 5
    root = isqrt(m)
    while f <= root:
        if m % f == 0 or m % (f + 2) == 0:
            return False
        f += 6
    return True


@dataclass(frozen=True)
class PrimeTable:
    """
    Ordered run of consecutive primes p_1, p_2, ..., p_k starting at 2.

    Construction only checks the leading 2 and strict increase, so a table
    with a composite or a skipped prime still builds. ``verify()`` is the
    opt-in primality and completeness check; the formula path instead
    compares every produced prime against the sieve oracle when
    cross-checking is on.
    """
    primes: Tuple[int, ...]

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, 'primes', primes)
        if not primes or primes[0] != 2:
            raise DomainError("a prime table must start at 2")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise DomainError("a prime table must be strictly increasing")

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def prime(self, i: int) -> int:
        """The i-th prime, 1-based."""
        if i < 1 or i > len(self.primes):
            raise DomainError(f"table holds {len(self.primes)} primes, p_{i} requested")
        return self.primes[i - 1]

    def head(self, n: int) -> Tuple[int, ...]:
        """p_1..p_n; the table must hold at least n primes."""
        if n < 1:
            raise DomainError(f"index must be >= 1, got {n}")
        if n > len(self.primes):
            raise DomainError(f"table holds {len(self.primes)} primes, {n} required")
        return self.primes[:n]

    def appended(self, p: int) -> "PrimeTable":
        return PrimeTable(self.primes + (p,))

    def extended(self, count: int) -> "PrimeTable":
        """A table holding at least ``count`` primes, sieving further segments as needed."""
        if count <= len(self.primes):
            return self
        primes = list(self.primes)
        while len(primes) < count:
            lo = primes[-1] + 1
            # Bertrand: (p, 2p) always contains a prime
            hi = max(2 * primes[-1], lo + Config.SIEVE_SEGMENT)
            primes.extend(segmented_sieve(lo, hi, primes))
        logger.debug(f"Extended prime table to {len(primes)} primes (largest {primes[-1]})")
        return PrimeTable(tuple(primes))

    def verify(self) -> bool:
        """Every entry is prime and no prime is skipped."""
        if not all(is_prime(p) for p in self.primes):
            return False
        return all(
            not any(is_prime(c) for c in range(a + 1, b))
            for a, b in zip(self.primes, self.primes[1:])
        )


@dataclass(frozen=True)
class DivisorTerm:
    """A squarefree divisor d of a primorial with its Moebius value."""
    d: int
    mu: int

    def __post_init__(self):
        if self.mu not in (-1, 1):
            raise DomainError(f"divisors of a primorial are squarefree, got mu={self.mu}")


@dataclass(frozen=True)
class Primorial:
    """p_n# = p_1 * p_2 * ... * p_n."""
    n: int
    value: int

    @property
    def bits(self) -> int:
        return self.value.bit_length()


def sieve_primes(limit: int) -> PrimeTable:
    """All primes <= limit by the sieve of Eratosthenes."""
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    flags = bytearray(b'\x01') * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(range(p * p, limit + 1, p)))
    return PrimeTable(tuple(i for i, flag in enumerate(flags) if flag))


def segmented_sieve(lo: int, hi: int, base: Sequence[int]) -> List[int]:
    """
    Primes in [lo, hi] by sieving with ``base``, which must hold every prime
    up to isqrt(hi) that is smaller than lo.
    """
    if hi < lo:
        return []
    root = isqrt(hi)
    small = [p for p in base if p <= root]
    if not base or base[-1] < root:
        small = list(sieve_primes(root).primes) if root >= 2 else []
    flags = bytearray(b'\x01') * (hi - lo + 1)
    for p in small:
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        flags[start - lo::p] = bytes(len(range(start, hi + 1, p)))
    return [lo + i for i, flag in enumerate(flags) if flag and lo + i >= 2]


# Shared sieve oracle; first_primes hands out exact-length slices of it
_oracle = PrimeTable((2,))


def _grown(count: int) -> PrimeTable:
    global _oracle
    if len(_oracle) < count:
        _oracle = _oracle.extended(count)
    return _oracle


def first_primes(count: int) -> PrimeTable:
    """Oracle table of exactly the first ``count`` primes."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    oracle = _grown(count)
    return oracle if len(oracle) == count else PrimeTable(oracle.primes[:count])


def nth_prime(k: int) -> int:
    """The k-th prime from the sieve oracle, 1-based."""
    if k < 1:
        raise DomainError(f"index must be >= 1, got {k}")
    return _grown(k).prime(k)


def _factor(m: int) -> List[Tuple[int, int]]:
    factors = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            factors.append((f, e))
        f += 1 if f == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return factors


@lru_cache(maxsize=1 << 16)
def mobius(m: int) -> int:
    """mu(m): 1 at 1, (-1)^r for r distinct prime factors, 0 if not squarefree."""
    if m < 1:
        raise DomainError(f"mobius is defined for m >= 1, got {m}")
    factors = _factor(m)
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def divisors(m: int) -> List[int]:
    """All positive divisors of m in increasing order."""
    if m < 1:
        raise DomainError(f"divisors are defined for m >= 1, got {m}")
    low, high = [], []
    for d in range(1, isqrt(m) + 1):
        if m % d == 0:
            low.append(d)
            if d != m // d:
                high.append(m // d)
    return low + high[::-1]


def primorial(n: int, table: PrimeTable) -> Primorial:
    """p_n#, the product of the first n primes of ``table``."""
    return Primorial(n=n, value=prod(table.head(n)))


def squarefree_divisors(n: int, table: PrimeTable) -> List[DivisorTerm]:
    """
    The 2^n divisors of p_n#, built by subset doubling over p_1..p_n.

    mu is the parity of the subset, so no factoring is ever needed.
    """
    terms = [DivisorTerm(1, 1)]
    for p in table.head(n):
        terms += [DivisorTerm(t.d * p, -t.mu) for t in terms]
    return terms


def squarefree_divisors_upto(n: int, table: PrimeTable, bound: int) -> List[DivisorTerm]:
    """The divisor terms of p_n# with d <= bound; subsets past the bound are pruned."""
    terms = [DivisorTerm(1, 1)]
    for p in table.head(n):
        terms += [DivisorTerm(t.d * p, -t.mu) for t in terms if t.d * p <= bound]
    return terms


def mobius_divisor_sum(m: int) -> int:
    """Sum of mu(d) over all divisors d of m."""
    if m < 1:
        raise DomainError(f"mobius_divisor_sum is defined for m >= 1, got {m}")
    return sum(mobius(d) for d in divisors(m))


def least_coprime(n: int, table: PrimeTable) -> int:
    """The least t >= 2 with gcd(t, p_n#) = 1; asserted equal to p_{n+1}."""
    p_sharp = primorial(n, table).value
    t = 2
    while gcd(t, p_sharp) != 1:
        t += 1
    expected = table.prime(n + 1) if len(table) > n else nth_prime(n + 1)
    if t != expected:
        raise OracleMismatchError(f"least coprime to p_{n}# is {t}, sieve gives p_{n + 1} = {expected}")
    return t


def verify_gap_facts(n: int, table: PrimeTable) -> Tuple[bool, bool]:
    """(p_{n+2} < 2 p_{n+1}, p_{n+2} >= p_{n+1} + 2)."""
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    if len(table) < n + 2:
        raise DomainError(f"gap facts for n={n} need {n + 2} primes, table holds {len(table)}")
    p1, p2 = table.prime(n + 1), table.prime(n + 2)
    return p2 < 2 * p1, p2 >= p1 + 2
