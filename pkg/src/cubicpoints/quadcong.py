"""Square roots of units: the count N(a, q) and the roots themselves.

N(a, q) = #{1 <= rho <= q : gcd(rho, q) = 1, rho^2 = a (mod q)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from .arith import Factored, bracket2, factor, jacobi, squarefree_divisors, two_adic


@dataclass(frozen=True)
class CongruenceInstance:
    a: int
    q: int
    q_factored: Factored = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"modulus must be positive, got {self.q}")
        if self.q_factored is None:
            object.__setattr__(self, "q_factored", factor(self.q))
        elif self.q_factored.n != self.q:
            raise ValueError("q_factored does not factor q")


def _instance(a, q=None) -> CongruenceInstance:
    if isinstance(a, CongruenceInstance):
        return a
    return CongruenceInstance(int(a), int(q))


@lru_cache(maxsize=4096)
def unit_square_histogram(q: int) -> np.ndarray:
    """hist[r] = number of units rho mod q with rho^2 = r (mod q), by enumeration."""
    rho = np.arange(1, q + 1, dtype=np.int64)
    units = rho[np.gcd(rho, q) == 1]
    hist = np.bincount((units * units) % q, minlength=q)
    hist.setflags(write=False)
    return hist


def count_brute(a, q=None) -> int:
    """N(a, q) by exhaustive enumeration of rho in [1, q]; total in a."""
    inst = _instance(a, q)
    if inst.q > 10**7:
        rho = 1
        total = 0
        while rho <= inst.q:
            if gcd(rho, inst.q) == 1 and (rho * rho - inst.a) % inst.q == 0:
                total += 1
            rho += 1
        return total
    return int(unit_square_histogram(inst.q)[inst.a % inst.q])


def _check_unit(a: int, q: int) -> None:
    if gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) > 1: the formula needs a unit residue")


def count_formula(a, q=None) -> int:
    """N(a, q) for gcd(a, q) = 1 from the 2-adic table and Jacobi symbols."""
    inst = _instance(a, q)
    _check_unit(inst.a, inst.q)
    v, _ = two_adic(inst.q)
    total = bracket2(inst.a, v)
    for p in inst.q_factored.primes:
        if p == 2:
            continue
        total *= 1 + jacobi(inst.a, p)
        if total == 0:
            break
    return total


def count_divisor_sum(a, q=None) -> int:
    """N(a, q) as 2-adic factor times sum_{d | h} mu^2(d) (a/d), h the odd part of q."""
    inst = _instance(a, q)
    _check_unit(inst.a, inst.q)
    v, h = two_adic(inst.q)
    s = sum(jacobi(inst.a, d) for d in squarefree_divisors(factor(h)))
    return bracket2(inst.a, v) * s


def _tonelli_shanks(a: int, p: int) -> int:
    """One square root of the quadratic residue a modulo the odd prime p."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _roots_odd_prime_power(a: int, p: int, e: int) -> list[int]:
    if jacobi(a, p) != 1:
        return []
    r = _tonelli_shanks(a, p)
    pk = p
    for _ in range(1, e):
        pk *= p
        # Newton step; 2r is a unit because a is
        r = (r - (r * r - a) * pow(2 * r, -1, pk)) % pk
    return sorted({r, (-r) % pk})


def _roots_power_of_two(a: int, e: int) -> list[int]:
    if e == 0:
        return [0]
    if e == 1:
        return [1]
    if e == 2:
        return [1, 3] if a % 4 == 1 else []
    if a % 8 != 1:
        return []
    mod = 1 << e
    r = 1
    # r^2 = a mod 2^i; fix bit i-1 so it holds mod 2^(i+1)
    for i in range(3, e):
        if (r * r - a) % (1 << (i + 1)):
            r += 1 << (i - 1)
    half = mod >> 1
    return sorted({r % mod, (-r) % mod, (r + half) % mod, (half - r) % mod})


def sqrt_mod(a: int, q_factored) -> list[int]:
    """All units rho in [1, q] with rho^2 = a (mod q), ascending."""
    qf = q_factored if isinstance(q_factored, Factored) else factor(int(q_factored))
    q = qf.n
    a = int(a)
    _check_unit(a, q)
    if q == 1:
        return [1]
    parts = []
    for p, e in qf.factors:
        pe = p**e
        roots = _roots_power_of_two(a % pe, e) if p == 2 else _roots_odd_prime_power(a % pe, p, e)
        if not roots:
            return []
        parts.append((pe, roots))
    # CRT recombination
    coeffs = []
    for pe, _ in parts:
        m = q // pe
        coeffs.append(m * pow(m, -1, pe))
    out = []
    for combo in product(*(roots for _, roots in parts)):
        x = sum(c * r for c, r in zip(coeffs, combo)) % q
        out.append(x if x else q)
    return sorted(out)


@lru_cache(maxsize=4096)
def n_table(q: int) -> np.ndarray:
    """Vector of N(r, q) for r = 0..q-1.

    Small moduli are read off the brute-force histogram; larger ones use the
    formula after a gcd check (non-units have no unit square roots).
    """
    if q <= 64:
        return unit_square_histogram(q)
    qf = factor(q)
    out = np.zeros(q, dtype=np.int64)
    for r in range(q):
        if gcd(r, q) == 1:
            out[r] = count_formula(CongruenceInstance(r, q, qf))
    out.setflags(write=False)
    return out


def count(a: int, q: int) -> int:
    """N(a, q) for any a, routed through ``n_table``."""
    return int(n_table(q)[a % q])


__all__ = [
    "CongruenceInstance",
    "count",
    "count_brute",
    "count_divisor_sum",
    "count_formula",
    "n_table",
    "sqrt_mod",
    "unit_square_histogram",
]
