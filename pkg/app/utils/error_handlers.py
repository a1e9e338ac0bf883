#!/usr/bin/env python3
"""
Error types and their mapping onto CLI exit codes
"""

import logging
import sys

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_RESOURCE = 2
EXIT_ORACLE_MISMATCH = 3
EXIT_USAGE = 64


class GandhiError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(GandhiError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionError(GandhiError):
    """The requested binary precision cannot represent the quantity."""


class ResourceBudgetError(GandhiError):
    """An exact strategy refused because the primorial exceeds the bit budget."""

    def __init__(self, message: str, required_bits: int = None, budget_bits: int = None):
        super().__init__(message)
        self.required_bits = required_bits
        self.budget_bits = budget_bits


class SequenceExhaustedError(ResourceBudgetError):
    """A sequence run stopped before reaching the requested length."""

    def __init__(self, message: str, partial=None, required_bits: int = None, budget_bits: int = None):
        super().__init__(message, required_bits=required_bits, budget_bits=budget_bits)
        self.partial = partial


class OracleMismatchError(GandhiError):
    """The formula disagreed with the sieve oracle. Signals a bug."""


class VerificationFailure(GandhiError):
    """One or more identity or bound checks failed."""


# Most specific first; the first isinstance match wins
_EXIT_CODES = (
    (OracleMismatchError, EXIT_ORACLE_MISMATCH),
    (ResourceBudgetError, EXIT_RESOURCE),
    (PrecisionError, EXIT_RESOURCE),
    (VerificationFailure, EXIT_VERIFICATION_FAILED),
    (DomainError, EXIT_USAGE),
)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the CLI exit code contract."""
    for exc_type, code in _EXIT_CODES:
        if isinstance(exc, exc_type):
            return code
    raise exc


def handle_cli_error(exc: GandhiError, stream=None) -> int:
    """Log the error, print a one-line message and return the exit code."""
    stream = stream or sys.stderr
    code = exit_code_for(exc)
    if code == EXIT_ORACLE_MISMATCH:
        logger.error(f"Oracle mismatch: {exc}")
    elif code == EXIT_RESOURCE:
        logger.warning(f"Resource refusal: {exc}")
    else:
        logger.error(f"{type(exc).__name__}: {exc}")
    print(f"error: {exc}", file=stream)
    return code
