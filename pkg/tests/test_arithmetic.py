"""Tests for the shared number-theory helpers."""

import pytest

from exceptional_primes.services.arithmetic import (
    INFINITE_VALUATION,
    euler_phi,
    fundamental_discriminants,
    fundamental_part,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    next_prime_not_in,
    primes_in_range,
    simple_sieve,
    valuation,
)


def test_simple_sieve_small_range():
    assert simple_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_sieve(1).tolist() == []


def test_primes_in_range_is_inclusive():
    assert primes_in_range(5, 13) == [5, 7, 11, 13]


def test_kronecker_at_two_and_odd_primes():
    assert kronecker(-4, 2) == 0
    assert kronecker(5, 2) == -1
    assert kronecker(-7, 2) == 1
    assert kronecker(8, 3) == -1
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        assert kronecker(-4, p) == (1 if p % 4 == 1 else -1)


def test_kronecker_is_multiplicative_in_the_top_argument(rng):
    primes = primes_in_range(2, 10**4)

    for _ in range(1000):
        a, b = (int(v) for v in rng.integers(-(10**4), 10**4, size=2))
        p = primes[int(rng.integers(len(primes)))]
        assert kronecker(a, p) * kronecker(b, p) == kronecker(a * b, p), (a, b, p)


def test_kronecker_is_periodic_mod_the_discriminant(rng):
    discs = fundamental_discriminants(1000)
    primes = primes_in_range(3, 10**4)

    for _ in range(1000):
        D = discs[int(rng.integers(len(discs)))]
        p = primes[int(rng.integers(len(primes)))]
        if D % p == 0:
            continue
        q = p + abs(D)
        while not is_prime(q):
            q += abs(D)
        assert kronecker(D, p) == kronecker(D, q), (D, p, q)


def test_fundamental_discriminants_order():
    assert fundamental_discriminants(12) == [-3, -4, 5, -7, -8, 8, -11, 12]


def test_fundamental_discriminants_match_brute_force():
    brute = [d for d in range(-300, 301) if d != 1 and is_fundamental_discriminant(d)]

    assert sorted(fundamental_discriminants(300)) == sorted(brute)


@pytest.mark.parametrize(
    ("n", "expected"),
    [(12, 12), (-1, -4), (9, 1), (-12, -3), (2, 8), (18, 8), (-75, -3)],
)
def test_fundamental_part(n, expected):
    assert fundamental_part(n) == expected


def test_valuation():
    assert valuation(-161051, 11) == 5
    assert valuation(37, 2) == 0
    assert valuation(0, 5) == INFINITE_VALUATION


def test_euler_phi_and_next_prime():
    assert euler_phi(12) == 4
    assert euler_phi(13) == 12
    assert next_prime_not_in(53, {53, 59}) == 61
