# Models package
from .results import (BenchRow, BigRational, BoundCheck, BoundReport, IdentityCheckResult,
                      NextPrimeResult, ThetaEvaluation, ThetaStrategy)
from .schemas import BenchRecord, CheckRecord, NextRecord, OutputFormat, RunConfig

__all__ = [
    'BenchRow', 'BigRational', 'BoundCheck', 'BoundReport', 'IdentityCheckResult',
    'NextPrimeResult', 'ThetaEvaluation', 'ThetaStrategy',
    'BenchRecord', 'CheckRecord', 'NextRecord', 'OutputFormat', 'RunConfig'
]
