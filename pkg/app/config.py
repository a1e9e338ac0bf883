#!/usr/bin/env python3
"""
Configuration management for the Gandhi prime formula toolkit
"""

import os


class Config:
    """Base configuration class"""
    APP_ENV = os.environ.get('GANDHI_ENV', 'default')

    # Evaluation defaults
    STRATEGY = 'interval'
    INITIAL_PRECISION_BITS = 64
    MAX_PRECISION_BITS = 65536
    EXACT_BIT_BUDGET = 2 ** 24  # bits of the primorial P = p_n#
    OUTPUT_FORMAT = 'plain'
    CROSS_CHECK = True

    # Logging
    LOG_LEVEL = 'WARNING'
    LOG_FILE = None
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Verification ranges
    GEOMETRIC_MAX_A = 64
    GEOMETRIC_MAX_K = 64
    COPRIME_IDENTITY_MAX_N = 5
    GEOMETRIC_TAIL_MAX_N = 64
    MOBIUS_MAX_M = 10 ** 4
    TAIL_BOUND_MAX_CUTOFF = 20
    TAIL_BOUND_MAX_PRIME_INDEX = 4
    BOUNDS_N_RANGE = (1, 8)
    GAPS_MAX_N = 1000
    COEFFICIENT_MAX_N = 5
    COEFFICIENT_MAX_T = 512
    INDEX_SET_MAX_N = 8
    INDEX_SET_LIMIT = 1024

    # Benchmark grid
    BENCH_N_RANGE = (1, 12)
    BENCH_STRATEGIES = ('exact-divisor', 'exact-coprime', 'interval')

    # Sieve segment length used when the prime oracle grows lazily
    SIEVE_SEGMENT = 1 << 15

    WORKERS = 1


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    APP_ENV = 'testing'

    # Smaller ranges keep the suite quick
    GEOMETRIC_MAX_A = 16
    GEOMETRIC_MAX_K = 16
    GEOMETRIC_TAIL_MAX_N = 16
    MOBIUS_MAX_M = 500
    TAIL_BOUND_MAX_CUTOFF = 8
    TAIL_BOUND_MAX_PRIME_INDEX = 3
    BOUNDS_N_RANGE = (1, 5)
    GAPS_MAX_N = 100
    COEFFICIENT_MAX_N = 3
    COEFFICIENT_MAX_T = 64
    INDEX_SET_MAX_N = 4
    INDEX_SET_LIMIT = 128
    BENCH_N_RANGE = (1, 6)


# Configuration mapping
config = {
    'default': Config,
    'testing': TestingConfig,
}


def get_config(environ=None):
    """Select the configuration class named by GANDHI_ENV."""
    environ = os.environ if environ is None else environ
    return config.get(environ.get('GANDHI_ENV', 'default'), Config)
