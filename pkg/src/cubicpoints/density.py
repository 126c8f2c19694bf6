"""Arithmetic densities, real volumes and the leading constant.

theta1 weights the eta9-volume V1 by the number of square roots of
-e2 e4 e7 e8 modulo k e1; theta1' keeps only its 2-adic part, and theta2 is
the average of theta1' over e8.  The leading constant is
alpha * prod_p omega_p * omega_inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np

from .arith import bracket2, factor, mobius, phi_star, primes_up_to, squarefree_divisors, two_adic
from .archimedean import draw_region, omega_inf_mc, shell_table
from .polytope import ALPHA_POLYTOPE, SIMPLEX5_VOLUME, alpha_volume
from .quadcong import count as n_count
from .quadcong import n_table
from .torsor import GuardError, eta8_coprime, head_coprime, iter_heads

MAIN_TERM_MAX_B = 10**5


@dataclass(frozen=True)
class EtaPrime:
    eta: tuple[int, ...]
    coprime: bool = field(init=False)

    def __post_init__(self):
        eta = tuple(int(e) for e in self.eta)
        if len(eta) != 8 or min(eta[:7]) < 1 or eta[7] == 0:
            raise ValueError(f"need e1..e7 > 0 and e8 != 0, got {eta}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "coprime", head_coprime(*eta[:7]) and eta8_coprime(eta))


def _k_terms(e: Sequence[int]) -> list[tuple[int, Fraction]]:
    """(k, mu(k) phi*(e3 e4 e5 e6 e7) / (k phi*((e3, k e1)))) for squarefree k | e3, (k, e2 e4) = 1."""
    e1, e2, e3, e4, e5, e6, e7 = e[:7]
    base = phi_star(e3 * e4 * e5 * e6 * e7)
    out = []
    for k in squarefree_divisors(factor(e3)):
        if gcd(k, e2 * e4) != 1:
            continue
        out.append((k, mobius(k) * base / (k * phi_star(gcd(e3, k * e1)))))
    return out


def theta1_prime(e: EtaPrime | Sequence[int]) -> Fraction:
    if not isinstance(e, EtaPrime):
        e = EtaPrime(tuple(e))
    if not e.coprime:
        return Fraction(0)
    e1, e2, _, e4, _, _, e7, e8 = e.eta
    n = -e2 * e4 * e7 * e8
    total = Fraction(0)
    for k, c in _k_terms(e.eta):
        total += c * bracket2(n, two_adic(k * e1)[0])
    return total


def theta1(e: EtaPrime | Sequence[int]) -> Fraction:
    if not isinstance(e, EtaPrime):
        e = EtaPrime(tuple(e))
    if not e.coprime:
        return Fraction(0)
    e1, e2, _, e4, _, _, e7, e8 = e.eta
    n = -e2 * e4 * e7 * e8
    return sum((c * n_count(n, k * e1) for k, c in _k_terms(e.eta)), Fraction(0))


def theta2(eta: Sequence[int]) -> Fraction:
    eta = tuple(int(x) for x in eta[:7])
    if not head_coprime(*eta):
        return Fraction(0)
    e1, e2, e3, e4, e5, e6, e7 = eta
    outer = phi_star(e1 * e2 * e3 * e4 * e5 * e7)
    return outer * sum((c for _, c in _k_terms(eta)), Fraction(0))


_LOCAL_ONE = {frozenset({1}), frozenset({2}), frozenset({6})}
_LOCAL_TWO = {
    frozenset(s)
    for s in ({4}, {5}, {7}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 7}, {6, 7})
}


def theta2_local(p: int, I: Iterable[int]) -> Fraction:
    I = frozenset(I)
    q = Fraction(1, p)
    if not I:
        return Fraction(1)
    if I in _LOCAL_ONE:
        return 1 - q
    if I in _LOCAL_TWO:
        return (1 - q) ** 2
    if I == frozenset({3}):
        return (1 - q) * (1 - 2 * q)
    return Fraction(0)


def index_sets(eta: Sequence[int]) -> dict[int, frozenset]:
    """{p: I_p(eta)} over primes dividing some e_i, i = 1..7."""
    out: dict[int, set] = {}
    for i, x in enumerate(eta[:7], start=1):
        for p in factor(int(x)).primes:
            out.setdefault(p, set()).add(i)
    return {p: frozenset(s) for p, s in out.items()}


def theta2_product(eta: Sequence[int]) -> Fraction:
    r = Fraction(1)
    for p, I in sorted(index_sets(eta).items()):
        r *= theta2_local(p, I)
        if r == 0:
            break
    return r


# --- the real volume V1 ---------------------------------------------------


def _monomials(eta):
    e1, e2, e3, e4, e5, e6, e7 = eta[:7]
    A = e4 * e5**2 * e6**4 * e7**3
    p1 = e1 * e2 * e3**2 * e4**2 * e5**2 * e6**2 * e7**2
    x2 = e1**3 * e2**2 * e3**4 * e4**3 * e5**2 * e7
    y0 = e2 * e3 * e4 * e5 * e6 * e7
    return A, p1, x2, y0


def v1_array(head: Sequence[int], e8: np.ndarray, B: float) -> np.ndarray:
    """V1 for one (e1..e7) and an array of nonzero e8, real eta9, closed form."""
    e1, e2 = head[0], head[1]
    A, p1, x2, y0 = (float(v) for v in _monomials(head))
    e8 = np.asarray(e8, dtype=float)
    a8 = np.abs(e8)
    if x2 > B:
        return np.zeros_like(a8)
    cap = B / (y0 * a8)
    den = e2 * a8
    Be1 = B * e1
    Aa2 = A * a8 * a8
    pos = np.minimum(np.sqrt(np.maximum(Be1 - Aa2, 0.0) / den), cap)
    top = np.minimum(np.sqrt((Aa2 + Be1) / den), cap)
    bot = np.sqrt(np.maximum(Aa2 - Be1, 0.0) / den)
    half = np.where(e8 > 0, pos, np.maximum(top - bot, 0.0))
    half = np.where(p1 * a8 <= B, half, 0.0)
    return 2.0 * half / e1


def v1(e: EtaPrime | Sequence[int], B: float) -> float:
    eta = e.eta if isinstance(e, EtaPrime) else tuple(e)
    return float(v1_array(eta[:7], np.array([eta[7]]), B)[0])


def _e8_limits(head, B: int) -> tuple[int, int]:
    """Largest |e8| of each sign with V1 possibly nonzero (both capped by term 2)."""
    e1, e2 = head[0], head[1]
    A, p1, _, y0 = _monomials(head)
    top = B // p1
    plus = min(top, isqrt(B * e1 // A) + 1)
    minus = max(math.sqrt(2 * B * e1 / A), (2 * B * B * e2 / (A * y0 * y0)) ** (1 / 3))
    return plus, min(top, int(minus) + 2)


def _theta1_prime_mod8(head) -> np.ndarray:
    """theta1' as a function of e8 mod 8, ignoring the (e8, ...) coprimality."""
    e1, e2, _, e4, _, _, e7 = head
    terms = [(two_adic(k * e1)[0], float(c)) for k, c in _k_terms(head)]
    out = np.zeros(8)
    for r in range(8):
        n = -e2 * e4 * e7 * r
        out[r] = sum(c * bracket2(n, v) for v, c in terms if v == 0 or n % 2)
    return out


def _theta1_values(head, e8: np.ndarray) -> np.ndarray:
    """theta1 along an array of e8, ignoring the (e8, ...) coprimality."""
    e1, e2, _, e4, _, _, e7 = head
    out = np.zeros(e8.size)
    for k, c in _k_terms(head):
        out += float(c) * n_table(k * e1)[(-e2 * e4 * e7 * e8) % (k * e1)]
    return out


def main_term_sum(B: int, density: str = "theta1_prime") -> float:
    """Sum over eta' of theta1'(eta') V1(eta'; B).

    density="theta1" uses the full square-root count instead of its 2-adic
    part, which isolates the error of replacing one by the other.
    """
    if density not in ("theta1_prime", "theta1"):
        raise ValueError("density must be theta1_prime or theta1")
    if B > MAIN_TERM_MAX_B:
        raise GuardError(f"main_term_sum is capped at B = {MAIN_TERM_MAX_B}")
    if B < 1:
        return 0.0
    parts = []
    for head in iter_heads(B):
        plus, minus = _e8_limits(head, B)
        e1, e2, e3, e4, e5, _, e7 = head
        m8 = e1 * e2 * e3 * e4 * e5 * e7
        e8 = np.concatenate([np.arange(1, plus + 1), -np.arange(1, minus + 1)])
        if e8.size == 0:
            continue
        if density == "theta1":
            th = _theta1_values(head, e8)
        else:
            th = _theta1_prime_mod8(head)[e8 % 8]
        th = th * (np.gcd(e8, m8) == 1)
        parts.append(math.fsum(th * v1_array(head, e8, B)))
    return math.fsum(parts)


# --- Euler product and the assembled constant -----------------------------


def euler_factor(p: int) -> Fraction:
    q = Fraction(1, p)
    return (1 - q) ** 7 * (1 + 7 * q + q * q)


@dataclass(frozen=True)
class EulerProduct:
    value: float
    prime_limit: int
    tail_bound: float  # relative: |prod_{p > P} - 1| <= tail_bound
    p2_factor: Fraction


def euler_product(P: int) -> EulerProduct:
    """prod_{p <= P} (1 - 1/p)^7 (1 + 7/p + 1/p^2), the p = 2 factor exact.

    Each factor is 1 - 27/p^2 + O(p^-3), so the tail is at most
    28 * sum_{n > P} 1/n^2 < 28/P in relative terms.
    """
    if P < 2:
        raise ValueError("prime limit must be >= 2")
    ps = primes_up_to(P).astype(float)
    ps = ps[ps > 2]
    logs = 7.0 * np.log1p(-1.0 / ps) + np.log1p(7.0 / ps + 1.0 / (ps * ps))
    two = euler_factor(2)
    value = float(two) * math.exp(math.fsum(logs))
    return EulerProduct(value, int(P), 28.0 / P, two)


@dataclass(frozen=True)
class PeyreBreakdown:
    alpha: Fraction
    euler_product: float
    prime_limit: int
    euler_tail_bound: float
    omega_inf: float
    omega_inf_stderr: float
    samples: int
    seed: int
    c_SH: float


def peyre_constant(P: int = 10**6, samples: int = 4_000_000, seed: int = 0) -> PeyreBreakdown:
    alpha = alpha_volume()
    ep = euler_product(P)
    om = omega_inf_mc(samples, seed)
    return PeyreBreakdown(
        alpha, ep.value, ep.prime_limit, ep.tail_bound, om.estimate, om.stderr, om.samples, seed,
        float(alpha) * ep.value * om.estimate,
    )


# --- V0' by sampling ------------------------------------------------------


def _proposal_t(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform on the simplex 3t1+2t2+4t3+3t4+2t5 <= 1 times t6 in [0, 1/3]."""
    coef = np.array([3.0, 2.0, 4.0, 3.0, 2.0])
    e = rng.exponential(size=(n, 6))
    x = e[:, :5] / e.sum(axis=1, keepdims=True) / coef
    return np.column_stack([x, rng.random(n) / 3])


def v0_prime_estimate(B: float, samples: int = 2_000_000, seed: int = 0, inner: int = 64) -> tuple[float, float]:
    """Monte Carlo for the integral of 1/e1 over the enlarged region R'(B).

    e1..e6 = B^t with t uniform over a proposal containing the polytope; the
    inner (e7, e8, e9)-integral is sampled through x = (x1, x2, x3) from the
    omega_inf stratification and mapped back to eta, with the Jacobian of
    that map and the height condition checked on the eta side.
    """
    if B <= 1:
        return 0.0, 0.0
    logB = math.log(B)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 0x5630])))
    sts, probs = shell_table(seed)
    n_t = max(samples // inner, 1)
    t = _proposal_t(n_t, rng)
    inside = ALPHA_POLYTOPE.sample_hits(t)
    vals = np.zeros(n_t)
    idx = np.flatnonzero(inside)
    chunk = max(1, (1 << 20) // inner)
    for lo in range(0, idx.size, chunk):
        sel = idx[lo : lo + chunk]
        eta = B ** t[sel]  # (m, 6): e1..e6
        e1, e2, e3, e4, e5, e6 = (eta[:, i : i + 1] for i in range(6))
        x1, x2, x3, q = draw_region(sel.size * inner, rng, sts, probs)
        x1, x2, x3, q = (v.reshape(sel.size, inner) for v in (x1, x2, x3, q))
        m7 = e1**3 * e2**2 * e3**4 * e4**3 * e5**2
        e7 = B * x2 / m7
        m8 = e1 * e2 * e3**2 * e4**2 * e5**2 * e6**2
        e8 = B * x1 / (m8 * e7**2)
        m9 = e2 * e3 * e4 * e5 * e6
        e9 = B * x3 / (m9 * e7 * e8)
        jac = (B / m7) * (B / (m8 * e7**2)) * (B / (m9 * e7 * np.abs(e8)))
        A = e4 * e5**2 * e6**4 * e7**3
        h1 = np.abs(e2 * e8 * e9**2 + A * e8**2) / e1
        h2 = np.abs(m8 * e7**2 * e8)
        h3 = m7 * e7
        h4 = np.abs(m9 * e7 * e8 * e9)
        ok = (np.maximum(np.maximum(h1, h2), np.maximum(h3, h4)) <= B * (1 + 1e-12)) & (e7 >= 0)
        f = np.where(ok, jac / (e1 * q), 0.0)
        prod6 = np.prod(eta, axis=1)
        vals[sel] = prod6 * f.mean(axis=1)
    scale = logB**6 * float(SIMPLEX5_VOLUME) / 3
    est = scale * vals.mean()
    err = scale * vals.std(ddof=1) / math.sqrt(n_t)
    return float(est), float(err)
