"""Points of bounded height on U: direct search and the universal torsor.

The surface is x1^3 + x2*x3^2 + x0*x1*x2 = 0 and U is the open part x1 != 0.
A torsor point is eta = (e1, ..., e10) with

    e1*e10 + e2*e9^2 + e4*e5^2*e6^4*e7^3*e8 = 0,

e1..e7 > 0, e8 != 0, plus the coprimality conditions checked in
``torsor_coprime``.  ``psi`` maps such eta bijectively onto U(Q).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Sequence

import numpy as np

from .arith import divisors, factor, gcd_many
from .quadcong import sqrt_mod

DIRECT_MAX_B = 2000
LIST_MAX_B = 10**4
TORSOR_MAX_B = 10**9


class GuardError(RuntimeError):
    """A cost or overflow guard refused the request."""


@dataclass(frozen=True, order=True)
class SurfacePoint:
    x0: int
    x1: int
    x2: int
    x3: int

    def __post_init__(self):
        x0, x1, x2, x3 = self.x0, self.x1, self.x2, self.x3
        if x1**3 + x2 * x3 * x3 + x0 * x1 * x2 != 0:
            raise ValueError(f"{self.as_tuple()} is not on the surface")
        if x1 == 0:
            raise ValueError("x1 = 0 lies on the lines")
        if x2 <= 0 or gcd_many(self.as_tuple()) != 1:
            raise ValueError(f"{self.as_tuple()} is not in canonical form")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x0, self.x1, self.x2, self.x3)


def on_surface(x0: int, x1: int, x2: int, x3: int) -> bool:
    return x1**3 + x2 * x3 * x3 + x0 * x1 * x2 == 0


def height(p: SurfacePoint) -> int:
    return max(abs(c) for c in p.as_tuple())


def canonicalize(x0: int, x1: int, x2: int, x3: int) -> SurfacePoint:
    """Primitive representative with x2 > 0."""
    if not on_surface(x0, x1, x2, x3):
        raise ValueError(f"({x0}, {x1}, {x2}, {x3}) is not on the surface")
    if x1 == 0:
        raise ValueError("x1 = 0 lies on the lines, outside U")
    g = gcd_many((x0, x1, x2, x3))
    s = 1 if x2 > 0 else -1
    return SurfacePoint(s * x0 // g, s * x1 // g, s * x2 // g, s * x3 // g)


def monomial(eta: Sequence[int], exps: Sequence[int]) -> int:
    r = 1
    for e, k in zip(eta, exps):
        r *= e**k
    return r


X1_EXPS = (1, 1, 2, 2, 2, 2, 2, 1)
X2_EXPS = (3, 2, 4, 3, 2, 0, 1, 0)
X3_EXPS = (0, 1, 1, 1, 1, 1, 1, 1)


def head_coprime(e1, e2, e3, e4, e5, e6, e7) -> bool:
    """Coprimality among e1..e7 read off the Dynkin diagram."""
    return (
        gcd(e7, e1 * e2 * e3 * e4) == 1
        and gcd(e6, e1 * e2 * e3 * e4 * e5) == 1
        and gcd(e5, e1 * e2 * e3) == 1
        and gcd(e4, e1 * e2) == 1
        and gcd(e1, e2) == 1
    )


def eta8_coprime(eta_prime: Sequence[int]) -> bool:
    e1, e2, e3, e4, e5, e6, e7, e8 = eta_prime
    return gcd(e8, e1 * e2 * e3 * e4 * e5 * e7) == 1


def torsor_coprime(eta: Sequence[int]) -> bool:
    e1, e2, e3, e4, e5, e6, e7, e8, e9, e10 = eta
    return (
        gcd(e10, e2 * e3 * e4 * e5 * e6 * e7) == 1
        and gcd(e9, e1 * e3 * e4 * e5 * e6 * e7) == 1
        and eta8_coprime(eta[:8])
        and head_coprime(*eta[:7])
    )


@dataclass(frozen=True)
class TorsorPoint:
    eta: tuple[int, ...]

    def __post_init__(self):
        eta = tuple(int(e) for e in self.eta)
        object.__setattr__(self, "eta", eta)
        if len(eta) != 10:
            raise ValueError("a torsor point has ten coordinates")
        if min(eta[:7]) < 1 or eta[7] == 0:
            raise ValueError(f"sign conditions fail for {eta}")
        if torsor_value(eta) != 0:
            raise ValueError(f"{eta} is not on the torsor")
        if not torsor_coprime(eta):
            raise ValueError(f"coprimality fails for {eta}")


def torsor_value(eta: Sequence[int]) -> int:
    e1, e2, e3, e4, e5, e6, e7, e8, e9, e10 = eta
    return e1 * e10 + e2 * e9 * e9 + e4 * e5**2 * e6**4 * e7**3 * e8


def psi_coords(eta: Sequence[int]) -> tuple[int, int, int, int]:
    """The polynomial map eta -> (x0, x1, x2, x3), no checks."""
    ep = eta[:8]
    return (eta[7] * eta[9], monomial(ep, X1_EXPS), monomial(ep, X2_EXPS), monomial(ep, X3_EXPS) * eta[8])


def psi(t: TorsorPoint | Sequence[int]) -> SurfacePoint:
    if not isinstance(t, TorsorPoint):
        t = TorsorPoint(tuple(t))
    return SurfacePoint(*psi_coords(t.eta))


def height_terms(eta_prime: Sequence[int], eta9) -> tuple:
    """The four quantities bounded by B in the torsor height; the first is a Fraction."""
    e1, e2, e3, e4, e5, e6, e7, e8 = eta_prime
    a = e4 * e5**2 * e6**4 * e7**3
    t1 = Fraction(abs(e2 * e8 * eta9 * eta9 + a * e8 * e8), e1)
    return (
        t1,
        abs(monomial(eta_prime, X1_EXPS)),
        monomial(eta_prime, X2_EXPS),
        abs(monomial(eta_prime, X3_EXPS) * eta9),
    )


def height_condition(eta_prime: Sequence[int], eta9: int, B: int) -> bool:
    return max(height_terms(eta_prime, eta9)) <= B


# --- direct search -------------------------------------------------------


def direct_points(B: int) -> np.ndarray:
    """All canonical points of U with height <= B, as an (n, 4) int64 array.

    Scans x1 in [-B, B] minus 0, x2 in [1, B], x3 in [-B, B].  Only pairs with
    x2 | x1^3 are visited: x2 divides x1^3 + x2*x3^2 whenever x1*x2 does.
    """
    if B > DIRECT_MAX_B:
        raise GuardError(f"direct search is capped at B = {DIRECT_MAX_B}")
    if B < 1:
        return np.zeros((0, 4), dtype=np.int64)
    x3 = np.arange(-B, B + 1, dtype=np.int64)
    x3sq = x3 * x3
    found = []
    for a in range(1, B + 1):
        x2s = np.array([d for d in divisors(factor(a**3)) if d <= B], dtype=np.int64)
        for x1 in (a, -a):
            num = x1**3 + x2s[:, None] * x3sq[None, :]
            den = x1 * x2s[:, None]
            ok = num % den == 0
            x0 = np.where(ok, -(num // den), B + 1)
            ok &= np.abs(x0) <= B
            i, j = np.nonzero(ok)
            if i.size == 0:
                continue
            pts = np.stack([x0[i, j], np.full(i.size, x1), x2s[i], x3[j]], axis=1)
            g = np.gcd.reduce(pts, axis=1)
            found.append(pts[g == 1])
    if not found:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(found)


def count_direct(B: int) -> int:
    return int(direct_points(B).shape[0])


# --- torsor enumeration --------------------------------------------------


def iter_heads(B: int) -> Iterator[tuple[int, ...]]:
    """(e1, ..., e7) obeying the head coprimality with x1 <= B at |e8| = 1 and x2 <= B.

    Loop order e6, e7, e5, e4, e3, e2, e1.
    """
    e6 = 1
    while e6 * e6 <= B:
        e7 = 1
        while e6 * e6 * e7 * e7 <= B and e7 <= B:
            p1_67 = e6 * e6 * e7 * e7
            e5 = 1
            while p1_67 * e5 * e5 <= B and e5 * e5 * e7 <= B:
                if gcd(e5, e6) == 1:
                    p1_5 = p1_67 * e5 * e5
                    p2_5 = e5 * e5 * e7
                    e4 = 1
                    while p1_5 * e4 * e4 <= B and p2_5 * e4**3 <= B:
                        if gcd(e4, e6 * e7) == 1:
                            p1_4 = p1_5 * e4 * e4
                            p2_4 = p2_5 * e4**3
                            e3 = 1
                            while p1_4 * e3 * e3 <= B and p2_4 * e3**4 <= B:
                                if gcd(e3, e5 * e6 * e7) == 1:
                                    p1_3 = p1_4 * e3 * e3
                                    p2_3 = p2_4 * e3**4
                                    e2 = 1
                                    while p1_3 * e2 <= B and p2_3 * e2 * e2 <= B:
                                        if gcd(e2, e4 * e5 * e6 * e7) == 1:
                                            p1_2 = p1_3 * e2
                                            p2_2 = p2_3 * e2 * e2
                                            m1 = e2 * e4 * e5 * e6 * e7
                                            e1 = 1
                                            while p1_2 * e1 <= B and p2_2 * e1**3 <= B:
                                                if gcd(e1, m1) == 1:
                                                    yield (e1, e2, e3, e4, e5, e6, e7)
                                                e1 += 1
                                        e2 += 1
                                e3 += 1
                        e4 += 1
                e5 += 1
            e7 += 1
        e6 += 1


def head_array(B: int) -> np.ndarray:
    heads = list(iter_heads(B))
    return np.array(heads, dtype=np.int64).reshape(-1, 7)


@dataclass(frozen=True)
class HeadData:
    """Quantities attached to (e1, ..., e7) that the e8/e9 loops reuse."""

    eta: tuple[int, ...]
    A: int  # e4 e5^2 e6^4 e7^3
    p1: int  # x1 / e8
    y0: int  # x3 / (e8 e9)
    m8: int  # e8 must be prime to this
    m9: int
    m10: int

    @classmethod
    def from_head(cls, head: Sequence[int]) -> "HeadData":
        e1, e2, e3, e4, e5, e6, e7 = head
        return cls(
            tuple(head),
            e4 * e5**2 * e6**4 * e7**3,
            e1 * e2 * e3**2 * e4**2 * e5**2 * e6**2 * e7**2,
            e2 * e3 * e4 * e5 * e6 * e7,
            e1 * e2 * e3 * e4 * e5 * e7,
            e1 * e3 * e4 * e5 * e6 * e7,
            e2 * e3 * e4 * e5 * e6 * e7,
        )


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    r = isqrt(n)
    return r if r * r == n else r + 1


def eta9_range(h: HeadData, e8: int, B: int) -> tuple[int, int] | None:
    """(lo, hi) with lo <= |e9| <= hi exactly the integers meeting terms 1 and 4."""
    e1, e2 = h.eta[0], h.eta[1]
    a8 = abs(e8)
    cap = B // (h.y0 * a8)
    den = e2 * a8
    if e8 > 0:
        top = B * e1 - h.A * a8 * a8
        if top < 0:
            return None
        lo, hi = 0, isqrt(top // den)
    else:
        low = h.A * a8 * a8 - B * e1
        lo = _ceil_sqrt(-(-low // den)) if low > 0 else 0
        hi = isqrt((h.A * a8 * a8 + B * e1) // den)
    hi = min(hi, cap)
    return (lo, hi) if lo <= hi else None


def eta8_max(h: HeadData, B: int, sign: int) -> int:
    """Largest |e8| of the given sign for which the real e9-range can be nonempty."""
    e1, e2 = h.eta[0], h.eta[1]
    top = B // h.p1
    if sign > 0:
        return min(top, isqrt(B * e1 // h.A))
    # (A a^2 - B e1) a y0^2 <= B^2 e2, increasing once 3 A a^2 > B e1
    a = 1
    while a <= top:
        low = h.A * a * a - B * e1
        if low > 0 and low * a * h.y0 * h.y0 > B * B * e2 and 3 * h.A * a * a > B * e1:
            return a - 1
        a += 1
    return top


@lru_cache(maxsize=1 << 15)
def _roots(c: int, m: int) -> tuple[int, ...]:
    return tuple(r % m for r in sqrt_mod(c, factor(m)))


def iter_torsor_points(B: int) -> Iterator[tuple[int, ...]]:
    """Every torsor point (e1, ..., e10) whose image has height <= B."""
    if B > TORSOR_MAX_B:
        raise GuardError(f"torsor enumeration is capped at B = {TORSOR_MAX_B}")
    for head in iter_heads(B):
        h = HeadData.from_head(head)
        e1, e2 = head[0], head[1]
        inv2 = pow(e2, -1, e1) if e1 > 1 else 0
        for sign in (1, -1):
            for a8 in range(1, eta8_max(h, B, sign) + 1):
                if gcd(a8, h.m8) != 1:
                    continue
                e8 = sign * a8
                rng = eta9_range(h, e8, B)
                if rng is None:
                    continue
                lo, hi = rng
                c = (-h.A * e8 * inv2) % e1
                if gcd(c, e1) != 1:
                    continue
                spans = [(-hi, hi)] if lo == 0 else [(lo, hi), (-hi, -lo)]
                for rho in _roots(c, e1):
                    for left, right in spans:
                        e9 = left + (rho - left) % e1
                        while e9 <= right:
                            if gcd(e9, h.m9) == 1:
                                e10 = -(e2 * e9 * e9 + h.A * e8) // e1
                                if gcd(e10, h.m10) == 1:
                                    yield (*head, e8, e9, e10)
                            e9 += e1


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("CUBICPOINTS_THREADS", "0")) or None
    import numba

    limit = numba.config.NUMBA_NUM_THREADS
    return max(1, min(threads or limit, limit))


def root_table(max_modulus: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR layout of square roots: roots of c mod m live in
    roots[ptr[base[m] + c] : ptr[base[m] + c + 1]]."""
    base = np.zeros(max_modulus + 2, dtype=np.int64)
    ptr = [0]
    roots: list[int] = []
    for m in range(1, max_modulus + 1):
        base[m] = len(ptr) - 1
        for c in range(m):
            if gcd(c, m) == 1:
                roots.extend(_roots(c, m))
            ptr.append(len(roots))
    base[max_modulus + 1] = len(ptr) - 1
    return base, np.array(ptr, dtype=np.int64), np.array(roots, dtype=np.int64)


def count_torsor(B: int, threads: int | None = None, method: str = "kernel") -> int:
    """N_{U,H}(B) from the torsor: e1..e8 in the box, e9 through the roots of a
    quadratic congruence modulo e1, e10 solved from the torsor equation."""
    if B > TORSOR_MAX_B:
        raise GuardError(f"torsor count is capped at B = {TORSOR_MAX_B}")
    if B < 1:
        return 0
    if method == "python":
        return sum(1 for _ in iter_torsor_points(B))
    import warnings

    import numba

    warnings.filterwarnings("ignore", message=".*TBB.*")
    from ._kernels import count_heads

    heads = head_array(B)
    if heads.shape[0] == 0:
        return 0
    base, ptr, roots = root_table(int(heads[:, 0].max()))
    numba.set_num_threads(_threads(threads))
    return int(count_heads(heads, B, base, ptr, roots))


def list_points(B: int) -> list[SurfacePoint]:
    """Canonical points of height <= B in lexicographic order."""
    if B > LIST_MAX_B:
        raise GuardError(f"point listing is capped at B = {LIST_MAX_B}")
    pts = {psi_coords(eta) for eta in iter_torsor_points(B)} if B >= 1 else set()
    return [SurfacePoint(*p) for p in sorted(pts)]
