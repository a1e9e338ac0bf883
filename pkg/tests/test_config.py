import pytest

from app.config import Config, TestingConfig, get_config
from app.models.results import ThetaStrategy
from app.models.schemas import OutputFormat, RunConfig
from app.utils.error_handlers import DomainError
from cli import build_parser, load_run_config


def _args(*extra):
    return build_parser().parse_args(["next", "2", *extra])


def test_get_config_selects_by_environment():
    assert get_config({}) is Config
    assert get_config({"GANDHI_ENV": "testing"}) is TestingConfig
    assert get_config({"GANDHI_ENV": "unknown"}) is Config


def test_testing_config_shrinks_ranges():
    assert TestingConfig.MOBIUS_MAX_M < Config.MOBIUS_MAX_M
    assert TestingConfig.INITIAL_PRECISION_BITS == Config.INITIAL_PRECISION_BITS


def test_defaults():
    run = load_run_config(_args(), {})
    assert run.strategy is ThetaStrategy.INTERVAL
    assert run.initial_precision_bits == Config.INITIAL_PRECISION_BITS
    assert run.exact_bit_budget == 2 ** 24
    assert run.output_format is OutputFormat.PLAIN
    assert run.cross_check is True
    assert run.workers == 1


def test_environment_overrides_defaults():
    environ = {
        "GANDHI_STRATEGY": "exact-coprime",
        "GANDHI_PRECISION": "128",
        "GANDHI_FORMAT": "csv",
        "GANDHI_CROSS_CHECK": "off",
    }
    run = load_run_config(_args(), environ)
    assert run.strategy is ThetaStrategy.EXACT_COPRIME
    assert run.initial_precision_bits == 128
    assert run.output_format is OutputFormat.CSV
    assert run.cross_check is False


def test_flags_override_environment():
    environ = {"GANDHI_STRATEGY": "exact-coprime", "GANDHI_BUDGET": "10"}
    run = load_run_config(_args("--strategy", "interval", "--budget", "4096", "--no-cross-check"), environ)
    assert run.strategy is ThetaStrategy.INTERVAL
    assert run.exact_bit_budget == 4096
    assert run.cross_check is False


def test_malformed_environment_is_a_domain_error():
    with pytest.raises(DomainError):
        load_run_config(_args(), {"GANDHI_PRECISION": "lots"})
    with pytest.raises(DomainError):
        load_run_config(_args(), {"GANDHI_STRATEGY": "guess"})


def test_precision_order_is_validated():
    with pytest.raises(DomainError):
        load_run_config(_args("--precision", "512", "--max-precision", "64"), {})


def test_run_config_is_frozen():
    run = RunConfig()
    with pytest.raises(Exception):
        run.workers = 4
