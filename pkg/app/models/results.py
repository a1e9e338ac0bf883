#!/usr/bin/env python3
"""
Result models for theta evaluations, bound reports and identity checks
"""

import operator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from gmpy2 import mpq

from app.services.dyadic import DyadicInterval
from app.utils.error_handlers import DomainError

# Exact reduced fraction; gmpy2 keeps mpq values in lowest terms
BigRational = mpq


class ThetaStrategy(Enum):
    """Ways of evaluating theta(n)"""
    EXACT_DIVISOR = "exact-divisor"
    EXACT_COPRIME = "exact-coprime"
    INTERVAL = "interval"

    @property
    def is_exact(self) -> bool:
        return self is not ThetaStrategy.INTERVAL


def fraction_fields(value: Optional[BigRational]) -> Dict[str, Optional[str]]:
    """num/den as decimal strings, never floats."""
    if value is None:
        return {"num": None, "den": None}
    return {"num": str(value.numerator), "den": str(value.denominator)}


@dataclass
class ThetaEvaluation:
    """theta(n) from one strategy: an exact fraction or a dyadic enclosure"""
    n: int
    strategy: ThetaStrategy
    exact: Optional[BigRational] = None
    enclosure: Optional[DyadicInterval] = None
    frac_bits_used: Optional[int] = None
    peak_bits: int = 0

    def __post_init__(self):
        if (self.exact is None) == (self.enclosure is None):
            raise DomainError("exactly one of exact/enclosure must be present")
        if self.strategy.is_exact != (self.exact is not None):
            raise DomainError(f"{self.strategy.value} does not match the carried value")
        if self.exact is not None and not 0 < self.exact < 1:
            raise DomainError(f"theta({self.n}) = {self.exact} is outside (0, 1)")

    def contains(self, value: BigRational) -> bool:
        if self.exact is not None:
            return self.exact == value
        return self.enclosure.contains(value)

    def to_dict(self) -> Dict[str, Any]:
        frac = fraction_fields(self.exact)
        return {
            "n": self.n,
            "strategy": self.strategy.value,
            "theta_num": frac["num"],
            "theta_den": frac["den"],
            "theta_lo": list(self.enclosure.lo.pair()) if self.enclosure else None,
            "theta_hi": list(self.enclosure.hi.pair()) if self.enclosure else None,
            "precision_bits": self.frac_bits_used,
        }


_RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass
class BoundCheck:
    """One inequality of the proof chain, evaluated exactly"""
    name: str
    left: BigRational
    relation: str
    right: BigRational
    passed: bool

    @classmethod
    def evaluate(cls, name: str, left, relation: str, right) -> "BoundCheck":
        left, right = mpq(left), mpq(right)
        return cls(name, left, relation, right, bool(_RELATIONS[relation](left, right)))

    @property
    def margin(self) -> BigRational:
        return self.right - self.left

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "left": str(self.left),
            "relation": self.relation,
            "right": str(self.right),
            "margin": str(self.margin),
            "passed": self.passed,
        }


@dataclass
class BoundReport:
    """Every inequality of the bracketing argument for one n"""
    n: int
    p_next: int
    theta: BigRational
    residual: BigRational
    checks: List[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "p_next": self.p_next,
            "theta": str(self.theta),
            "residual": str(self.residual),
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass
class IdentityCheckResult:
    """lhs, rhs and residual = rhs - lhs for one instance of an identity"""
    identity_name: str
    instance: Tuple[Tuple[str, int], ...]
    lhs: BigRational
    rhs: BigRational
    residual: BigRational
    expected_residual: BigRational
    passed: bool
    details: Optional[str] = None

    @property
    def key(self) -> Tuple[str, Tuple[Tuple[str, int], ...]]:
        return self.identity_name, self.instance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity_name,
            "instance": dict(self.instance),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "residual": str(self.residual),
            "expected_residual": str(self.expected_residual),
            "passed": self.passed,
            "details": self.details,
        }


@dataclass
class NextPrimeResult:
    """One application of the formula: p_{n+1} from p_1..p_n"""
    n: int
    prime: int
    strategy: ThetaStrategy
    evaluation: ThetaEvaluation
    inconclusive_precisions: List[int] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def precision_used(self) -> Optional[int]:
        return self.evaluation.frac_bits_used

    def to_dict(self) -> Dict[str, Any]:
        record = self.evaluation.to_dict()
        record.update({
            "n": self.n,
            "p_next": self.prime,
            "strategy": self.strategy.value,
            "elapsed_ms": round(self.elapsed_ms, 3),
        })
        return record


@dataclass
class BenchRow:
    """Cost of one (n, strategy) cell"""
    n: int
    strategy: str
    status: str
    term_count: int
    wall_ms: Optional[float] = None
    peak_bits: Optional[int] = None
    precision_bits: Optional[int] = None
    p_next: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "strategy": self.strategy,
            "status": self.status,
            "term_count": self.term_count,
            "peak_bits": self.peak_bits,
            "precision_bits": self.precision_bits,
            "p_next": self.p_next,
            "wall_ms": None if self.wall_ms is None else round(self.wall_ms, 3),
        }
