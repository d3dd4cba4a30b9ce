"""Elementary number theory shared by the engines.

Prime sieves run on numpy boolean masks; factorisation, primality and the
Jacobi symbol come from sympy. Everything returns exact Python integers.
"""

from __future__ import annotations

import math
import sys
from functools import lru_cache
from typing import Iterable

import numpy as np
from sympy import factorint, isprime, jacobi_symbol, primitive_root

# Stands in for val_p(0).
INFINITE_VALUATION = sys.maxsize


def simple_sieve(limit: int) -> np.ndarray:
    """Return all primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p : limit + 1 : p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@lru_cache(maxsize=16)
def primes_up_to(limit: int) -> np.ndarray:
    """Cached, read-only variant of :func:`simple_sieve`."""
    primes = simple_sieve(limit)
    primes.flags.writeable = False
    return primes


def primes_in_range(low: int, high: int) -> list[int]:
    """Primes p with low <= p <= high."""
    primes = primes_up_to(max(high, 2))
    return [int(p) for p in primes[(primes >= low) & (primes <= high)]]


def next_prime_not_in(start: int, excluded: Iterable[int]) -> int:
    """Smallest prime >= start outside ``excluded``."""
    skip = set(excluded)
    candidate = max(start, 2)
    while not isprime(candidate) or candidate in skip:
        candidate += 1
    return candidate


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of an integer; :data:`INFINITE_VALUATION` for 0."""
    if n == 0:
        return INFINITE_VALUATION
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_divisors(n: int) -> list[int]:
    """Sorted distinct primes dividing a nonzero integer."""
    if n == 0:
        raise ValueError("prime_divisors(0) is undefined")
    return sorted(int(p) for p in factorint(abs(n)))


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, 0 when p | a."""
    a %= p
    if a == 0:
        return 0
    return int(jacobi_symbol(a, p))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a and n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0

    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result

    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result

    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental_discriminant(d: int) -> bool:
    """True for fundamental discriminants, including the trivial one D = 1."""
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def squarefree_kernel(n: int) -> int:
    """Signed product of the primes dividing n to an odd power."""
    if n == 0:
        raise ValueError("squarefree_kernel(0) is undefined")
    kernel = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            kernel *= int(p)
    return kernel


def fundamental_part(n: int) -> int:
    """Fundamental discriminant of Q(sqrt(n)), or 1 when n is a square."""
    m = squarefree_kernel(n)
    if m == 1:
        return 1
    return m if m % 4 == 1 else 4 * m


def _squarefree_mask(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    for p in primes_up_to(math.isqrt(limit) + 1):
        p = int(p)
        mask[p * p : limit + 1 : p * p] = False
    return mask


def fundamental_discriminants(limit: int) -> list[int]:
    """Nontrivial fundamental discriminants with |D| <= limit.

    Ordered by absolute value, negative before positive.
    """
    if limit < 3:
        return []
    sf = _squarefree_mask(limit)
    found: list[int] = []
    for n in range(3, limit + 1):
        # D = n or D = -n, odd case: D squarefree with D = 1 mod 4.
        if sf[n]:
            if n % 4 == 3:
                found.append(-n)
            elif n % 4 == 1:
                found.append(n)
        if n % 4 == 0:
            m = n // 4
            if sf[m]:
                if m % 4 in (1, 2):
                    found.append(-n)
                if m % 4 in (2, 3):
                    found.append(n)
    return sorted(found, key=lambda d: (abs(d), d))


def quadratic_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue modulo an odd prime."""
    for eps in range(2, p):
        if legendre(eps, p) == -1:
            return eps
    raise ValueError(f"no quadratic nonresidue modulo {p}")


def generator_mod(p: int) -> int:
    """Smallest generator of (Z/p)^*."""
    if p == 2:
        return 1
    return int(primitive_root(p))


def euler_phi(m: int) -> int:
    phi = m
    for p in factorint(m):
        phi = phi // p * (p - 1)
    return phi


def squares_table(p: int) -> np.ndarray:
    """Boolean table t[x] = (x is a nonzero square mod p)."""
    table = np.zeros(p, dtype=bool)
    xs = np.arange(1, p, dtype=np.int64)
    table[(xs * xs) % p] = True
    return table
