import os
import random

import pytest

from app.config import TestingConfig
from app.services.numtheory import first_primes


@pytest.fixture
def testing_config():
    return TestingConfig


@pytest.fixture(scope="session")
def oracle():
    """First 30 primes from the sieve."""
    return first_primes(30)


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def clean_env(monkeypatch):
    """No GANDHI_* variable leaks in from the calling shell."""
    for key in list(os.environ):
        if key.startswith("GANDHI_"):
            monkeypatch.delenv(key, raising=False)
    return monkeypatch
