"""Averaged sums of N(-a_1...a_r b, kq) over dyadic boxes.

Sigma sums Phi * N over a_i ~ K_i (K_i < a_i <= 2 K_i) and q in an interval
with endpoints Q^-, Q^+.  M keeps only the 2-adic factor of N on terms with
(a_1...a_r b, kq) = 1, and E is the remaining odd-divisor part, so that
Sigma = M + E term by term.  The primed sums add (a_i, t_i) = 1,
pairwise coprime a_i and (q, u) = 1.

All weights here are rational, so every sum is an exact Fraction.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Callable, Optional, Sequence

import numpy as np

from .arith import bracket2, factor, jacobi, omega, radical, squarefree_divisors, two_adic
from .quadcong import n_table

INTERVAL_KINDS = ("left-open", "right-open", "open", "closed")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class WeightFn:
    """Phi(a, q) = [a in box] * g(q) with g one of the named forms.

    kind: "const" (g = value), "invq" (g = value / q), "table" (piecewise
    linear through (knots, values), constant outside), "box" (g = value,
    with the a-box restriction).
    """

    kind: str = "const"
    value: Fraction = Fraction(1)
    box: Optional[tuple[tuple[Fraction, Fraction], ...]] = None
    knots: tuple[Fraction, ...] = ()
    values: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind not in ("const", "invq", "table", "box"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        object.__setattr__(self, "value", _frac(self.value))
        if self.value < 0:
            raise ValueError("weights must be nonnegative")
        if self.kind == "table":
            ks = tuple(_frac(k) for k in self.knots)
            vs = tuple(_frac(v) for v in self.values)
            if len(ks) != len(vs) or len(ks) < 1 or list(ks) != sorted(set(ks)) or min(vs) < 0:
                raise ValueError("table weight needs increasing knots and nonnegative values")
            object.__setattr__(self, "knots", ks)
            object.__setattr__(self, "values", vs)
        if self.kind == "box" and self.box is None:
            raise ValueError("box weight needs per-variable ranges")

    @classmethod
    def const(cls, c=1):
        return cls("const", _frac(c))

    @classmethod
    def invq(cls, c=1):
        return cls("invq", _frac(c))

    @classmethod
    def indicator(cls, ranges: Sequence[tuple], c=1):
        return cls("box", _frac(c), tuple((_frac(lo), _frac(hi)) for lo, hi in ranges))

    @classmethod
    def table(cls, knots, values):
        return cls("table", Fraction(1), None, tuple(knots), tuple(values))

    def a_ok(self, a: Sequence[int]) -> bool:
        if self.box is None:
            return True
        return all(lo <= x <= hi for x, (lo, hi) in zip(a, self.box))

    def q_factor(self, q: int) -> Fraction:
        if self.kind == "invq":
            return self.value / q
        if self.kind == "table":
            ks, vs = self.knots, self.values
            if q <= ks[0]:
                return vs[0]
            if q >= ks[-1]:
                return vs[-1]
            for i in range(1, len(ks)):
                if q <= ks[i]:
                    s = (q - ks[i - 1]) / (ks[i] - ks[i - 1])
                    return vs[i - 1] + s * (vs[i] - vs[i - 1])
        return self.value

    def __call__(self, a: Sequence[int], q: int) -> Fraction:
        return self.q_factor(q) if self.a_ok(a) else Fraction(0)

    def sup(self, q_min: int = 1) -> Fraction:
        """V, the sup of Phi over q >= q_min."""
        if self.kind == "invq":
            return self.value / max(q_min, 1)
        if self.kind == "table":
            return max(self.values)
        return self.value


@dataclass(frozen=True)
class RangeFn:
    """Endpoints Q^-(a), Q^+(a); constant unless ``fn`` is given."""

    lower: Fraction
    upper: Fraction
    fn: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lower", _frac(self.lower))
        object.__setattr__(self, "upper", _frac(self.upper))
        if not 0 < self.lower <= self.upper:
            raise ValueError("need 0 < Q^- <= Q^+")

    def __call__(self, a: Sequence[int]) -> tuple[Fraction, Fraction]:
        if self.fn is None:
            return self.lower, self.upper
        lo, hi = self.fn(a)
        return _frac(lo), _frac(hi)


def dyadic_range(Q) -> RangeFn:
    """q ~ Q/2, i.e. the top dyadic block Q/2 < q <= Q."""
    Q = _frac(Q)
    return RangeFn(Q / 2, Q)


@dataclass(frozen=True)
class SumSpec:
    r: int
    K: tuple[Fraction, ...]
    Q: Fraction
    b: int = 1
    k: int = 1
    t: Optional[tuple[int, ...]] = None
    u: int = 1
    weight: WeightFn = field(default_factory=WeightFn.const)
    range: Optional[RangeFn] = None
    interval_kind: str = "left-open"

    def __post_init__(self):
        K = tuple(_frac(x) for x in self.K)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "Q", _frac(self.Q))
        if self.r < 2 or len(K) != self.r:
            raise ValueError("need r >= 2 and r box bounds")
        if min(K) <= 0 or self.Q <= 0:
            raise ValueError("K_i and Q must be positive")
        if self.b == 0 or self.k < 1 or gcd(self.k, self.b) != 1:
            raise ValueError("need b != 0, k >= 1, gcd(k, b) = 1")
        t = tuple(self.t) if self.t is not None else (1,) * self.r
        if len(t) != self.r or min(t) < 1 or self.u < 1:
            raise ValueError("t_i and u must be positive, one t_i per variable")
        object.__setattr__(self, "t", t)
        if self.range is None:
            object.__setattr__(self, "range", dyadic_range(self.Q))
        elif self.range.fn is None and self.range.upper > self.Q:
            raise ValueError("Q^+ must not exceed Q")
        if self.interval_kind not in INTERVAL_KINDS:
            raise ValueError(f"interval_kind must be one of {INTERVAL_KINDS}")

    @property
    def K_total(self) -> Fraction:
        return 2 ** (self.r + 1) * math.prod(self.K)

    def a_ranges(self) -> list[range]:
        return [range(math.floor(x) + 1, math.floor(2 * x) + 1) for x in self.K]

    def q_interval(self, lo: Fraction, hi: Fraction) -> tuple[int, int]:
        """Integer endpoints (first, last) of the q-interval, q >= 1."""
        kind = self.interval_kind
        first = math.floor(lo) + 1 if kind in ("left-open", "open") else math.ceil(lo)
        last = math.ceil(hi) - 1 if kind in ("right-open", "open") else math.floor(hi)
        return max(first, 1), last


@dataclass(frozen=True)
class SumReport:
    sigma: Fraction
    main: Fraction
    err: Fraction
    bound: float
    ratio: float
    cells: int
    error_sum: Optional[Fraction] = None


def _tuples(spec: SumSpec, primed: bool) -> dict[tuple[int, int], Counter]:
    """{(q_first, q_last): Counter(product a_1...a_r -> multiplicity)}."""
    out: dict[tuple[int, int], Counter] = {}
    for a in product(*spec.a_ranges()):
        if primed:
            if any(gcd(x, t) != 1 for x, t in zip(a, spec.t)):
                continue
            if any(gcd(a[i], a[j]) != 1 for i in range(spec.r) for j in range(i + 1, spec.r)):
                continue
        if not spec.weight.a_ok(a):
            continue
        key = spec.q_interval(*spec.range(a))
        if key[0] > key[1]:
            continue
        out.setdefault(key, Counter())[math.prod(a)] += 1
    return out


@lru_cache(maxsize=4096)
def _bracket_table(v: int) -> np.ndarray:
    """bracket2(n, v) as a function of n mod 8, with 0 on even n for v >= 1."""
    tab = np.zeros(8, dtype=np.int64)
    for n in range(8):
        tab[n] = bracket2(n, v) if (v == 0 or n % 2) else 0
    return tab


@lru_cache(maxsize=4096)
def _jacobi_table(d: int) -> np.ndarray:
    return np.array([jacobi(x, d) for x in range(d)], dtype=np.int64)


@dataclass
class _Totals:
    sigma: Fraction = Fraction(0)
    main: Fraction = Fraction(0)
    error: Fraction = Fraction(0)
    cells: int = 0


def _accumulate(spec: SumSpec, primed: bool, want_error: bool) -> _Totals:
    tot = _Totals()
    b, k = spec.b, spec.k
    for (q0, q1), counter in sorted(_tuples(spec, primed).items()):
        keys = sorted(counter)
        mult = np.array([counter[p] for p in keys], dtype=np.int64)
        pb = np.array(keys, dtype=np.int64) * b
        for q in range(q0, q1 + 1):
            if primed and gcd(q, spec.u) != 1:
                continue
            m = k * q
            res = (-pb) % m
            phi = spec.weight.q_factor(q)
            tot.cells += int(mult.sum())
            s_n = int((n_table(m)[res] * mult).sum())
            unit = np.gcd(res, m) == 1
            v, h = two_adic(m)
            br = _bracket_table(v)[res % 8] * unit
            s_m = int((br * mult).sum())
            tot.sigma += phi * s_n
            tot.main += phi * s_m
            if want_error:
                js = np.zeros_like(res)
                for d in squarefree_divisors(factor(h)):
                    if d > 1:
                        js += _jacobi_table(d)[res % d]
                tot.error += phi * int((br * js * mult).sum())
    return tot


def sigma(spec: SumSpec) -> Fraction:
    return _accumulate(spec, False, False).sigma


def main_term(spec: SumSpec) -> Fraction:
    return _accumulate(spec, False, False).main


def error_term(spec: SumSpec) -> Fraction:
    """E summed literally over odd squarefree d > 1 dividing kq."""
    return _accumulate(spec, False, True).error


def sigma_prime(spec: SumSpec) -> Fraction:
    return _accumulate(spec, True, False).sigma


def main_prime(spec: SumSpec) -> Fraction:
    return _accumulate(spec, True, False).main


def _q_min(spec: SumSpec) -> int:
    if spec.range.fn is not None:
        return 1
    return spec.q_interval(spec.range.lower, spec.range.upper)[0]


def error_bound(spec: SumSpec, eps: float, V=None) -> float:
    """E' with L = log(2 + Q) and K = 2^{r+1} K_1...K_r; no implied constant."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if V is None:
        V = spec.weight.sup(_q_min(spec))
    K = float(spec.K_total)
    Q = float(spec.Q)
    L = math.log(2 + Q)
    w = omega(spec.k)
    inner = (
        K ** (0.5 - 0.5 / spec.r) * radical(spec.k) ** 0.25
        + abs(spec.b) ** eps * 2 ** ((1 + eps) * w)
        + 2**w * L
    )
    return float(V) * K ** (0.5 + eps) * Q * L**eps * inner


def corollary_bound(spec: SumSpec, eps: float, V=None) -> float:
    """E' scaled by (1 + eps)^(omega(t_1) + ... + omega(t_r) + omega(u))."""
    w = sum(omega(t) for t in spec.t) + omega(spec.u)
    return (1 + eps) ** w * error_bound(spec, eps, V)


def report(spec: SumSpec, eps: float = 0.1, primed: bool = False, with_error_sum: bool = False) -> SumReport:
    tot = _accumulate(spec, primed, with_error_sum)
    bound = corollary_bound(spec, eps) if primed else error_bound(spec, eps)
    err = tot.sigma - tot.main
    return SumReport(
        tot.sigma,
        tot.main,
        err,
        bound,
        abs(float(err)) / bound,
        tot.cells,
        tot.error if with_error_sum else None,
    )


def simple_case_scan(K2, K4, K7, K8, Q) -> tuple[Fraction, Fraction, float]:
    """Sum of N(-e2 e4 e7 e8, e1) over e_i ~ K_i and e1 ~ Q.

    Returns (sigma, main, c_hat) with c_hat = main / (K2 K4 K7 K8 Q).
    """
    Q = _frac(Q)
    Ks = tuple(_frac(x) for x in (K2, K4, K7, K8))
    spec = SumSpec(4, Ks, 2 * Q, range=RangeFn(Q, 2 * Q))
    tot = _accumulate(spec, False, False)
    return tot.sigma, tot.main, float(tot.main / (math.prod(Ks) * Q))


GRID_K = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4), Fraction(8))
GRID_Q = (4, 16, 64)
GRID_B = (1, 3)
GRID_k = (1, 2, 3)
GRID_T = (1, 6)
GRID_U = (1, 30)


def theorem_grid() -> list[SumSpec]:
    """r = 4, all K_i equal, q ~ Q/2, constant and 1/q weights."""
    specs = []
    for K in GRID_K:
        for Q in GRID_Q:
            for b in GRID_B:
                for k in GRID_k:
                    if gcd(k, b) != 1:
                        continue
                    for w in (WeightFn.const(), WeightFn.invq()):
                        specs.append(SumSpec(4, (K,) * 4, Q, b, k, weight=w))
    return specs


def corollary_grid() -> list[SumSpec]:
    specs = []
    for s in theorem_grid():
        for t in GRID_T:
            for u in GRID_U:
                specs.append(SumSpec(s.r, s.K, s.Q, s.b, s.k, (t,) * s.r, u, s.weight))
    return specs


def run_grid(specs: Sequence[SumSpec], eps: float = 0.1, primed: bool = False) -> list[SumReport]:
    return [report(s, eps, primed) for s in specs]


def ratio_stability(reports: Sequence[SumReport]) -> tuple[float, float]:
    """(max ratio, median ratio) over the grid."""
    ratios = sorted(r.ratio for r in reports)
    return ratios[-1], float(np.median(ratios))
