from fractions import Fraction
from itertools import product
from math import gcd, prod

import pytest
from hypothesis import given, strategies as st

from cubicpoints import avgsum
from cubicpoints.arith import bracket2, two_adic
from cubicpoints.avgsum import RangeFn, SumSpec, WeightFn
from cubicpoints.quadcong import count_brute

R2 = SumSpec(2, (Fraction(1, 2), Fraction(1, 2)), 2, range=RangeFn(Fraction(1, 2), 2))


def brute(spec, primed=False):
    """Loop over every (a, q) and count roots by enumeration."""
    s = m = Fraction(0)
    for a in product(*spec.a_ranges()):
        if primed and (
            any(gcd(x, t) != 1 for x, t in zip(a, spec.t))
            or any(gcd(a[i], a[j]) != 1 for i in range(len(a)) for j in range(i))
        ):
            continue
        if not spec.weight.a_ok(a):
            continue
        lo, hi = spec.q_interval(*spec.range(a))
        for q in range(lo, hi + 1):
            if primed and gcd(q, spec.u) != 1:
                continue
            n = -prod(a) * spec.b
            phi = spec.weight.q_factor(q)
            s += phi * count_brute(n, spec.k * q)
            if gcd(n, spec.k * q) == 1:
                m += phi * bracket2(n, two_adic(spec.k * q)[0])
    return s, m


def test_r2_example():
    assert avgsum.sigma(R2) == 2
    assert avgsum.main_term(R2) == 2
    primed = SumSpec(2, R2.K, 2, u=2, range=R2.range)
    assert avgsum.sigma_prime(primed) == 1


specs = st.builds(
    lambda r, K, Q, b, k, w, t, u, kind: SumSpec(
        r, K[:r], Q, b, k if gcd(k, b) == 1 else 1, t[:r], u, w, None, kind
    ),
    st.integers(2, 4),
    st.lists(st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]), min_size=4, max_size=4),
    st.sampled_from([Fraction(3), Fraction(8), Fraction(25, 2)]),
    st.sampled_from([1, -1, 3, -5, 7]),
    st.integers(1, 6),
    st.sampled_from([WeightFn.const(), WeightFn.invq(), WeightFn.table((1, 10), (2, 0))]),
    st.lists(st.sampled_from([1, 2, 6]), min_size=4, max_size=4),
    st.sampled_from([1, 2, 15]),
    st.sampled_from(avgsum.INTERVAL_KINDS),
)


@given(specs)
def test_against_brute(spec):
    assert (avgsum.sigma(spec), avgsum.main_term(spec)) == brute(spec)
    assert (avgsum.sigma_prime(spec), avgsum.main_prime(spec)) == brute(spec, primed=True)


@given(specs)
def test_error_identity(spec):
    rep = avgsum.report(spec, with_error_sum=True)
    assert rep.sigma == rep.main + rep.error_sum
    assert rep.err == rep.sigma - rep.main
    assert rep.bound > 0


def test_interval_kinds():
    spec = lambda kind: SumSpec(2, (Fraction(1, 2),) * 2, 4, range=RangeFn(2, 4), interval_kind=kind)
    assert spec("left-open").q_interval(2, 4) == (3, 4)
    assert spec("right-open").q_interval(2, 4) == (2, 3)
    assert spec("open").q_interval(2, 4) == (3, 3)
    assert spec("closed").q_interval(2, 4) == (2, 4)


def test_spec_validation():
    with pytest.raises(ValueError):
        SumSpec(1, (1,), 4)
    with pytest.raises(ValueError):
        SumSpec(2, (1, 1), 4, b=3, k=3)
    with pytest.raises(ValueError):
        SumSpec(2, (1, 1), 4, range=RangeFn(1, 8))
    with pytest.raises(ValueError):
        RangeFn(3, 2)
    with pytest.raises(ValueError):
        WeightFn.const(-1)


def test_weight_sup():
    assert WeightFn.invq(3).sup(4) == Fraction(3, 4)
    assert WeightFn.table((1, 5), (1, 7)).sup() == 7
    w = WeightFn.indicator([(1, 2), (1, 1)])
    assert w((2, 1), 5) == 1 and w((3, 1), 5) == 0


def test_grid_sizes():
    assert len(avgsum.theorem_grid()) == 150
    assert len(avgsum.corollary_grid()) == 600


def test_simple_case():
    s, m, c = avgsum.simple_case_scan(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert s == 1 and m == 1
    s, m, c = avgsum.simple_case_scan(4, 4, 4, 4, 32)
    assert c > 0 and abs(s - m) < m
