import pytest

from app.services import numtheory
from app.services.numtheory import (DivisorTerm, PrimeTable, divisors, first_primes, is_prime,
                                    least_coprime, mobius, mobius_divisor_sum, nth_prime, primorial,
                                    segmented_sieve, sieve_primes, squarefree_divisors,
                                    squarefree_divisors_upto, verify_gap_facts)
from app.utils.error_handlers import DomainError, OracleMismatchError


def test_sieve_primes_small():
    assert sieve_primes(30).primes == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert sieve_primes(2).primes == (2,)


def test_sieve_rejects_tiny_limit():
    with pytest.raises(DomainError):
        sieve_primes(1)


def test_segmented_sieve_matches_plain_sieve():
    plain = [p for p in sieve_primes(2000).primes if p >= 1000]
    assert segmented_sieve(1000, 2000, sieve_primes(50).primes) == plain
    # base too short: falls back to sieving the root itself
    assert segmented_sieve(1000, 2000, (2, 3)) == plain
    assert segmented_sieve(10, 5, (2,)) == []


@pytest.mark.parametrize("k, expected", [(1, 2), (5, 11), (9, 23), (13, 41), (20, 71), (100, 541)])
def test_nth_prime(k, expected):
    assert nth_prime(k) == expected


def test_first_primes_slices_one_shared_table():
    small = first_primes(7)
    assert small.primes == (2, 3, 5, 7, 11, 13, 17)
    assert first_primes(40).primes[:7] == small.primes
    assert len(first_primes(40)) == 40
    assert nth_prime(40) == 173
    assert len(numtheory._oracle) >= 40
    grown = numtheory._oracle
    for k in range(1, 41):
        nth_prime(k)
    assert numtheory._oracle is grown
    with pytest.raises(DomainError):
        nth_prime(0)


def test_first_primes_extends_past_one_segment():
    table = first_primes(5000)
    assert len(table) == 5000
    assert table.prime(5000) == 48611
    assert table.primes[:4] == (2, 3, 5, 7)


def test_is_prime_agrees_with_sieve():
    sieved = set(sieve_primes(500).primes)
    assert [m for m in range(501) if is_prime(m)] == sorted(sieved)


class TestPrimeTable:
    def test_must_start_at_two(self):
        with pytest.raises(DomainError):
            PrimeTable((3, 5))

    def test_must_increase(self):
        with pytest.raises(DomainError):
            PrimeTable((2, 5, 5))

    def test_head_and_prime_are_one_based(self):
        table = PrimeTable((2, 3, 5))
        assert table.prime(1) == 2
        assert table.head(2) == (2, 3)
        with pytest.raises(DomainError):
            table.head(4)
        with pytest.raises(DomainError):
            table.prime(0)

    def test_appended_and_verify(self):
        table = PrimeTable((2, 3)).appended(5)
        assert table.primes == (2, 3, 5)
        assert table.verify()
        assert not PrimeTable((2, 3, 7)).verify()
        assert not PrimeTable((2, 9)).verify()

    def test_construction_checks_order_not_primality(self):
        skipped = PrimeTable((2, 3, 7))
        composite = PrimeTable((2, 3, 9))
        assert len(skipped) == len(composite) == 3
        assert not skipped.verify()
        assert not composite.verify()
        assert first_primes(3).verify()

    def test_extended_keeps_prefix(self):
        table = PrimeTable((2, 3, 5)).extended(10)
        assert table.primes == first_primes(10).primes


@pytest.mark.parametrize("m, expected", [(1, 1), (2, -1), (4, 0), (6, 1), (12, 0), (30, -1), (210, 1)])
def test_mobius(m, expected):
    assert mobius(m) == expected


def test_mobius_domain():
    with pytest.raises(DomainError):
        mobius(0)


def test_divisors_sorted():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]
    assert divisors(49) == [1, 7, 49]


def test_mobius_divisor_sum_is_indicator():
    assert [mobius_divisor_sum(m) for m in range(1, 200)] == [1] + [0] * 198


def test_primorial(oracle):
    assert primorial(3, oracle).value == 30
    assert primorial(8, oracle).value == 9699690
    assert primorial(8, oracle).bits == 24


def test_squarefree_divisors_order_and_signs(oracle):
    assert squarefree_divisors(2, oracle) == [DivisorTerm(1, 1), DivisorTerm(2, -1),
                                             DivisorTerm(3, -1), DivisorTerm(6, 1)]


def test_squarefree_divisors_agree_with_mobius(oracle):
    for n in range(1, 7):
        terms = squarefree_divisors(n, oracle)
        assert len(terms) == 1 << n
        p_sharp = primorial(n, oracle).value
        assert sorted(t.d for t in terms) == divisors(p_sharp)
        assert all(t.mu == mobius(t.d) for t in terms)


def test_squarefree_divisors_upto_prunes(oracle):
    full = squarefree_divisors(5, oracle)
    assert squarefree_divisors_upto(5, oracle, 20) == [t for t in full if t.d <= 20]


def test_divisor_term_rejects_zero_mu():
    with pytest.raises(DomainError):
        DivisorTerm(4, 0)


@pytest.mark.parametrize("n, expected", [(1, 3), (2, 5), (3, 7), (4, 11), (8, 23)])
def test_least_coprime(oracle, n, expected):
    assert least_coprime(n, oracle) == expected


def test_least_coprime_detects_a_bad_table():
    # 7 is missing, so the table claims p_4 = 11
    with pytest.raises(OracleMismatchError):
        least_coprime(3, PrimeTable((2, 3, 5, 11)))


def test_gap_facts_hold(oracle):
    for n in range(1, 28):
        assert verify_gap_facts(n, oracle) == (True, True)


def test_gap_facts_need_enough_primes():
    with pytest.raises(DomainError):
        verify_gap_facts(2, PrimeTable((2, 3, 5)))
