"""Exact integer and multiplicative-function primitives.

Everything here works on Python ints (arbitrary precision) and
``fractions.Fraction``; the numpy sieves are only used to build lookup
tables for the hot loops elsewhere in the package.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Union

import numpy as np

MAX_FACTOR = 2**127 - 1
TRIAL_LIMIT = 10**6

# Bases making Miller-Rabin deterministic below 3.3e24 (> 2**64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981


@dataclass(frozen=True)
class Factored:
    """A positive integer together with its prime factorization."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Factored requires n >= 1")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"bad factor list {self.factors}")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __int__(self) -> int:
        return self.n


FactoredLike = Union[Factored, int]


def _as_factored(f: FactoredLike) -> Factored:
    return f if isinstance(f, Factored) else factor(f)


def primes_up_to(limit: int) -> np.ndarray:
    """All primes ``p <= limit`` as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime dividing n, for 2 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(isqrt(limit)):
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


_SMALL_PRIMES = [int(p) for p in primes_up_to(TRIAL_LIMIT)]


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, strong-probable-prime above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= _MR_DETERMINISTIC_BOUND:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(24)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, seed: int) -> int:
    """A nontrivial factor of the odd composite n (may return n on failure)."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    seed = 1
    while True:
        d = _brent_rho(n, seed)
        if 1 < d < n:
            break
        seed += 1
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=1 << 16)
def factor(n: int) -> Factored:
    """Full factorization of 1 <= n < 2**127."""
    n = int(n)
    if n < 1:
        raise ValueError(f"factor requires n >= 1, got {n}")
    if n > MAX_FACTOR:
        raise ValueError(f"factor requires n < 2**127, got {n}")
    found: dict[int, int] = {}
    rem = n
    checked_prime = False
    for p in _SMALL_PRIMES:
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            found[p] = e
        elif p > 1000 and not checked_prime:
            # skip the long trial-division tail when the cofactor is prime
            checked_prime = True
            if is_prime(rem):
                break
    if rem > 1:
        _split(rem, found)
    return Factored(n, tuple(sorted(found.items())))


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; (a/1) = 1."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"jacobi needs odd positive n, got {n}")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def bracket2(n: int, j: int) -> int:
    """Number of square roots of the odd number n modulo 2**j.

    For j = 0 the modulus is 1 and the count is 1 whatever n is.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    if j == 0:
        return 1
    if n % 2 == 0:
        raise ValueError(f"bracket2 needs odd n for j >= 1, got {n}")
    if j == 1:
        return 1
    if j == 2:
        return 2 if n % 4 == 1 else 0
    return 4 if n % 8 == 1 else 0


def two_adic(n: int) -> tuple[int, int]:
    """(v, m) with n = 2**v * m and m odd."""
    if n == 0:
        raise ValueError("two_adic of 0")
    v = (n & -n).bit_length() - 1
    return v, n >> v


def mobius(f: FactoredLike) -> int:
    f = _as_factored(f)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def phi_star(f: FactoredLike) -> Fraction:
    """prod_{p | n} (1 - 1/p), exact."""
    f = _as_factored(f)
    num = den = 1
    for p, _ in f.factors:
        num *= p - 1
        den *= p
    return Fraction(num, den)


def omega(f: FactoredLike) -> int:
    return len(_as_factored(f).factors)


def radical(f: FactoredLike) -> int:
    r = 1
    for p, _ in _as_factored(f).factors:
        r *= p
    return r


def euler_phi(f: FactoredLike) -> int:
    f = _as_factored(f)
    r = 1
    for p, e in f.factors:
        r *= (p - 1) * p ** (e - 1)
    return r


def gcd_many(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def squarefree_divisors(f: FactoredLike) -> list[int]:
    divs = [1]
    for p in _as_factored(f).primes:
        divs += [d * p for d in divs]
    return sorted(divs)


def divisors(f: FactoredLike) -> list[int]:
    divs = [1]
    for p, e in _as_factored(f).factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)
