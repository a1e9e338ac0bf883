import pytest
from gmpy2 import mpq

from app.services.identitylab import (SUITE_ALIASES, SUITES, plan_suite, run_suite, verify_coefficient_law,
                                      verify_coprime_tail_bound, verify_divisor_coprime_identity,
                                      verify_gaps, verify_geometric_identity, verify_geometric_tail,
                                      verify_index_set, verify_mobius_sum)
from app.utils.error_handlers import DomainError


def test_geometric_identity_residual_is_the_tail():
    result = verify_geometric_identity(2, 4)
    assert result.lhs == mpq(85, 256)
    assert result.rhs == mpq(1, 3)
    assert result.residual == mpq(1, 768)
    assert result.passed

    result = verify_geometric_identity(3, 1)
    assert result.residual == mpq(1, 56)
    assert result.passed


def test_geometric_identity_domain():
    with pytest.raises(DomainError):
        verify_geometric_identity(0, 3)
    with pytest.raises(DomainError):
        verify_geometric_identity(2, 0)


@pytest.mark.parametrize("n, value", [(1, mpq(2, 3)), (2, mpq(34, 63))])
def test_divisor_coprime_identity_small(n, value):
    result = verify_divisor_coprime_identity(n)
    assert result.lhs == result.rhs == value
    assert result.residual == 0
    assert result.passed


def test_divisor_coprime_identity_through_five():
    assert all(verify_divisor_coprime_identity(n).passed for n in range(1, 6))


def test_geometric_tail():
    for n in range(0, 40):
        result = verify_geometric_tail(n)
        assert result.passed
        assert result.rhs == mpq(1, 2 ** n)
    with pytest.raises(DomainError):
        verify_geometric_tail(-1)


def test_mobius_sums():
    results = verify_mobius_sum(300)
    assert len(results) == 300
    assert all(r.passed for r in results)
    assert results[0].lhs == 1


def test_coprime_tail_bound():
    for prime_index in range(1, 4):
        for n in range(1, 9):
            result = verify_coprime_tail_bound(n, prime_index)
            assert result.passed, result.to_dict()
            assert result.residual > 0
    assert "shares a factor" in verify_coprime_tail_bound(4, 2).details


def test_coefficient_law():
    results = verify_coefficient_law(3, 64)
    assert len(results) == 64
    assert all(r.passed for r in results)
    assert [int(r.lhs) for r in results[:8]] == [1, 0, 0, 0, 0, 0, 1, 0]


def test_index_set():
    for n in range(1, 5):
        result = verify_index_set(n, 128)
        assert result.passed, result.details
    assert verify_index_set(2, 64).details == "least index 5"


def test_gaps():
    results = verify_gaps(60)
    assert len(results) == 60
    assert all(r.passed for r in results)


def test_numbered_names_plan_the_same_jobs(testing_config):
    for alias, suite in SUITE_ALIASES.items():
        assert plan_suite(alias, {}, testing_config) == plan_suite(suite, {}, testing_config)
    numbered = run_suite("theorem54", {"n": (0, 5)}, config=testing_config)
    named = run_suite("geometric-tail", {"n": (0, 5)}, config=testing_config)
    assert [r.key for r in numbered] == [r.key for r in named]
    assert len(numbered) == 6


def test_plan_suite_uses_ranges_and_config(testing_config):
    jobs = plan_suite("geometric", {"a": (1, 2), "k": (1, 3)}, testing_config)
    assert len(jobs) == 6
    jobs = plan_suite("bounds", {}, testing_config)
    assert [args[0] for _, args in jobs] == [1, 2, 3, 4, 5]
    with pytest.raises(DomainError):
        plan_suite("nope", {}, testing_config)


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_passes_on_testing_ranges(testing_config, suite):
    results = run_suite(suite, config=testing_config)
    assert results
    assert all(r.passed for r in results), [r.to_dict() for r in results if not r.passed]


def test_bounds_suite_emits_every_check(testing_config):
    results = run_suite("bounds", {"n": (1, 2)}, config=testing_config)
    assert len(results) == 14
    assert {r.identity_name for r in results} >= {"bound:lead_below_theta", "bound:residual_below_half_lead"}


def test_worker_pool_matches_serial(testing_config):
    serial = run_suite("geometric", {"a": (1, 4), "k": (1, 4)}, workers=1, config=testing_config)
    pooled = run_suite("geometric", {"a": (1, 4), "k": (1, 4)}, workers=2, config=testing_config)
    assert [r.key for r in serial] == [r.key for r in pooled]
    assert [r.residual for r in serial] == [r.residual for r in pooled]


def test_tight_budget_refuses_exact_checks(testing_config):
    from app.utils.error_handlers import ResourceBudgetError
    with pytest.raises(ResourceBudgetError):
        run_suite("coprime-identity", {"n": (4, 4)}, config=testing_config, bit_budget=100)


@pytest.mark.slow
def test_full_default_ranges():
    geometric = run_suite("geometric")
    assert len(geometric) == 64 * 64
    assert all(r.passed for r in geometric)
    assert all(r.passed for r in verify_mobius_sum(10 ** 4))
    assert all(r.passed for r in verify_gaps(1000))
    assert all(verify_geometric_tail(n).passed for n in range(65))
