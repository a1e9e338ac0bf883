#!/usr/bin/env python3
"""
Binary fixed-point numbers and intervals with exact endpoints.

A DyadicFixed is mantissa * 2^-frac_bits. Sums of such values are exact, so
the only rounding anywhere is the directed truncation of geometric series in
reciprocal_mersenne, which charges the dropped tail to the upper endpoint.
No floating point type is used in this module.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Union

from gmpy2 import mpq

from app.utils.error_handlers import DomainError, PrecisionError

logger = logging.getLogger(__name__)


class Conclusion(enum.Enum):
    INCONCLUSIVE = 'inconclusive'


INCONCLUSIVE = Conclusion.INCONCLUSIVE


@dataclass(frozen=True)
class DyadicFixed:
    """mantissa * 2^-frac_bits"""
    mantissa: int
    frac_bits: int

    def __post_init__(self):
        if self.frac_bits < 0:
            raise DomainError(f"frac_bits must be non-negative, got {self.frac_bits}")

    @classmethod
    def zero(cls, frac_bits: int) -> "DyadicFixed":
        return cls(0, frac_bits)

    @classmethod
    def power_of_two(cls, exponent: int, frac_bits: int) -> "DyadicFixed":
        """2^exponent, which must be representable at ``frac_bits``."""
        if exponent + frac_bits < 0:
            raise PrecisionError(f"2^{exponent} is not representable with {frac_bits} fractional bits")
        return cls(1 << (exponent + frac_bits), frac_bits)

    def rescaled(self, frac_bits: int) -> "DyadicFixed":
        if frac_bits < self.frac_bits:
            raise PrecisionError(f"cannot rescale {self.frac_bits} fractional bits down to {frac_bits}")
        return DyadicFixed(self.mantissa << (frac_bits - self.frac_bits), frac_bits)

    def to_rational(self) -> mpq:
        return mpq(self.mantissa, 1 << self.frac_bits)

    def _aligned(self, other: "DyadicFixed"):
        bits = max(self.frac_bits, other.frac_bits)
        return self.rescaled(bits).mantissa, other.rescaled(bits).mantissa, bits

    def __add__(self, other: "DyadicFixed") -> "DyadicFixed":
        a, b, bits = self._aligned(other)
        return DyadicFixed(a + b, bits)

    def __neg__(self) -> "DyadicFixed":
        return DyadicFixed(-self.mantissa, self.frac_bits)

    def __sub__(self, other: "DyadicFixed") -> "DyadicFixed":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicFixed):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self) -> int:
        return hash(self.to_rational())

    def __lt__(self, other: "DyadicFixed") -> bool:
        a, b, _ = self._aligned(other)
        return a < b

    def __le__(self, other: "DyadicFixed") -> bool:
        a, b, _ = self._aligned(other)
        return a <= b

    def __gt__(self, other: "DyadicFixed") -> bool:
        return other < self

    def __ge__(self, other: "DyadicFixed") -> bool:
        return other <= self

    def pair(self):
        """(mantissa, -frac_bits) as emitted in records."""
        return str(self.mantissa), -self.frac_bits


@dataclass(frozen=True)
class DyadicInterval:
    """[lo, hi] with endpoints at a common precision."""
    lo: DyadicFixed
    hi: DyadicFixed

    def __post_init__(self):
        if self.lo.frac_bits != self.hi.frac_bits:
            bits = max(self.lo.frac_bits, self.hi.frac_bits)
            object.__setattr__(self, 'lo', self.lo.rescaled(bits))
            object.__setattr__(self, 'hi', self.hi.rescaled(bits))
        if self.hi.mantissa < self.lo.mantissa:
            raise DomainError("interval lower endpoint exceeds upper endpoint")

    @classmethod
    def point(cls, value: DyadicFixed) -> "DyadicInterval":
        return cls(value, value)

    @classmethod
    def from_mantissas(cls, lo: int, hi: int, frac_bits: int) -> "DyadicInterval":
        return cls(DyadicFixed(lo, frac_bits), DyadicFixed(hi, frac_bits))

    @property
    def frac_bits(self) -> int:
        return self.lo.frac_bits

    @property
    def width(self) -> DyadicFixed:
        return self.hi - self.lo

    def rescaled(self, frac_bits: int) -> "DyadicInterval":
        return DyadicInterval(self.lo.rescaled(frac_bits), self.hi.rescaled(frac_bits))

    def contains(self, value: Union[mpq, int, DyadicFixed]) -> bool:
        if isinstance(value, DyadicFixed):
            value = value.to_rational()
        return self.lo.to_rational() <= value <= self.hi.to_rational()

    def within(self, other: "DyadicInterval") -> bool:
        """True when self is a subset of other."""
        return other.lo <= self.lo and self.hi <= other.hi

    def __add__(self, other: "DyadicInterval") -> "DyadicInterval":
        return add(self, other)

    def __neg__(self) -> "DyadicInterval":
        return negate(self)


def add(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return DyadicInterval(a.lo + b.lo, a.hi + b.hi)


def negate(a: DyadicInterval) -> DyadicInterval:
    return DyadicInterval(-a.hi, -a.lo)


def mersenne_truncation(d: int, frac_bits: int) -> int:
    """
    Mantissa of sum_{k: kd <= B} 2^-kd at B = frac_bits, i.e. the 1-bits at
    fractional positions d, 2d, ... <= B.
    """
    whole = frac_bits // d
    return ((1 << (whole * d)) - 1) // ((1 << d) - 1) << (frac_bits - whole * d)


def reciprocal_mersenne(d: int, frac_bits: int) -> DyadicInterval:
    """
    Enclosure of 1/(2^d - 1) = sum_{k>=1} 2^-kd at B fractional bits.

    lo keeps the terms with kd <= B; the dropped tail is positive and at most
    2^-B, so hi = lo + 2^-B.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if frac_bits < d:
        raise PrecisionError(f"1/(2^{d}-1) has no 1-bit within {frac_bits} fractional bits")
    lo = mersenne_truncation(d, frac_bits)
    return DyadicInterval.from_mantissas(lo, lo + 1, frac_bits)


def tail_enclosure(frac_bits: int) -> DyadicInterval:
    """[0, 2^-B]; encloses 1/(2^d - 1) for every d > B."""
    return DyadicInterval.from_mantissas(0, 1, frac_bits)


def _checked_positive(theta: DyadicInterval):
    if theta.hi.mantissa <= 0:
        raise DomainError("theta enclosure is not positive")
    return theta.lo.mantissa, theta.hi.mantissa, theta.frac_bits


def extract_next_prime(theta: DyadicInterval) -> Union[int, Conclusion]:
    """
    The integer p with 2^-p < lo and hi < 2^(1-p), found from the bit length
    of the lower mantissa. INCONCLUSIVE when the enclosure straddles or
    touches a power of two.
    """
    lo, hi, bits = _checked_positive(theta)
    if lo <= 0:
        return INCONCLUSIVE
    e = lo.bit_length() - 1
    if lo == 1 << e or hi >= 1 << (e + 1):
        return INCONCLUSIVE
    p = bits - e
    if p < 1:
        raise DomainError("theta enclosure lies at or above 1")
    return p


def extract_refined_prime(theta: DyadicInterval) -> Union[int, Conclusion]:
    """The integer p with 3/4 * 2^-p < lo and hi < 3/2 * 2^-p, else INCONCLUSIVE."""
    lo, hi, bits = _checked_positive(theta)
    if lo <= 0:
        return INCONCLUSIVE
    # largest q with 3 * 2^q < lo
    m = (lo - 1) // 3
    if m < 1:
        return INCONCLUSIVE
    q = m.bit_length() - 1
    if hi >= 3 << (q + 1):
        return INCONCLUSIVE
    p = bits - q - 2
    if p < 1:
        raise DomainError("theta enclosure lies too close to 1")
    return p
