#!/usr/bin/env python3
"""
Pydantic schemas for run configuration and emitted records
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.results import ThetaStrategy


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    PLAIN = "plain"


class RunConfig(BaseModel):
    """Resolved settings for one CLI invocation"""
    model_config = ConfigDict(frozen=True)

    strategy: ThetaStrategy = Field(ThetaStrategy.INTERVAL, description="theta evaluation strategy")
    initial_precision_bits: int = Field(64, gt=0, description="Starting fractional bits for the interval strategy")
    max_precision_bits: int = Field(65536, gt=0, description="Precision ceiling for escalation")
    exact_bit_budget: int = Field(2 ** 24, gt=0, description="Largest primorial bit-size the exact strategies accept")
    output_format: OutputFormat = Field(OutputFormat.PLAIN, description="Record format on stdout")
    cross_check: bool = Field(True, description="Assert every prime against the sieve oracle")
    log_path: Optional[str] = Field(None, description="NDJSON file that records are appended to")
    workers: int = Field(1, ge=1, description="Worker processes for verify and bench")

    @model_validator(mode="after")
    def _precision_order(self) -> "RunConfig":
        if self.initial_precision_bits > self.max_precision_bits:
            raise ValueError("initial_precision_bits must not exceed max_precision_bits")
        return self


class NextRecord(BaseModel):
    """Record emitted by `next` and by each row of `sequence`"""
    n: int = Field(..., description="Index of the last known prime")
    p_next: int = Field(..., description="p_{n+1} produced by the formula")
    strategy: str = Field(..., description="Strategy used")
    theta_num: Optional[str] = Field(None, description="Exact numerator of theta(n)")
    theta_den: Optional[str] = Field(None, description="Exact denominator of theta(n)")
    theta_lo: Optional[List[str | int]] = Field(None, description="Lower endpoint as [mantissa, exponent]")
    theta_hi: Optional[List[str | int]] = Field(None, description="Upper endpoint as [mantissa, exponent]")
    precision_bits: Optional[int] = Field(None, description="Fractional bits of the conclusive enclosure")
    elapsed_ms: float = Field(..., description="Wall time in milliseconds")


class CheckRecord(BaseModel):
    """Record emitted by `verify` for identity checks"""
    suite: str = Field(..., description="Verification suite")
    identity: str = Field(..., description="Identity checked")
    instance: str = Field(..., description="Instance parameters, key=value;...")
    lhs: str = Field(..., description="Left side as num/den")
    rhs: str = Field(..., description="Right side as num/den")
    residual: str = Field(..., description="rhs - lhs")
    expected_residual: str = Field(..., description="Closed-form residual")
    passed: bool = Field(..., description="Whether the check passed")


class BenchRecord(BaseModel):
    """Record emitted by `bench`"""
    n: int
    strategy: str
    status: str = Field(..., description="'ok' or 'skipped: budget'")
    term_count: int = Field(..., description="2^n divisor terms")
    peak_bits: Optional[int] = Field(None, description="Largest big-integer bit-size held")
    precision_bits: Optional[int] = None
    p_next: Optional[int] = None
    wall_ms: Optional[float] = None


# Fields that vary between identical runs
TIMING_FIELDS = frozenset({"elapsed_ms", "wall_ms"})
