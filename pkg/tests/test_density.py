from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubicpoints.torsor import iter_heads

from cubicpoints import density
from cubicpoints.torsor import GuardError, count_torsor

heads = st.tuples(*[st.integers(1, 60)] * 7)
# heads that actually occur, all of them coprime
coprime_heads = st.sampled_from(list(iter_heads(5000)))


def test_theta_examples():
    assert density.theta1_prime((1,) * 8) == 1
    assert density.theta1_prime((1, 2, 1, 1, 1, 1, 1, 1)) == 1
    assert density.theta1_prime((2, 1, 1, 1, 1, 1, 1, 1)) == 1
    assert density.theta1((5, 1, 1, 1, 1, 1, 1, 1)) == 2
    assert density.theta1((2, 2, 1, 1, 1, 1, 1, 1)) == 0
    assert density.theta2_local(3, {3}) == Fraction(2, 9)
    assert density.theta2_local(5, {1, 2}) == 0


@given(heads)
def test_theta2_product_form(h):
    assert density.theta2(h) == density.theta2_product(h)


@given(coprime_heads, st.integers(-200, 200).filter(bool))
def test_mod8_table(h, e8):
    tab = density._theta1_prime_mod8(h)
    m8 = h[0] * h[1] * h[2] * h[3] * h[4] * h[6]
    expect = float(density.theta1_prime(h + (e8,)))
    assert tab[e8 % 8] * (gcd(e8, m8) == 1) == pytest.approx(expect, abs=1e-12)


@given(coprime_heads, st.integers(-200, 200).filter(bool))
def test_theta1_values(h, e8):
    m8 = h[0] * h[1] * h[2] * h[3] * h[4] * h[6]
    got = density._theta1_values(h, np.array([e8]))[0] * (gcd(e8, m8) == 1)
    assert got == pytest.approx(float(density.theta1(h + (e8,))), abs=1e-12)


def test_v1_examples():
    assert density.v1((1,) * 8, 2) == pytest.approx(2)
    assert density.v1((1,) * 8, 1) == 0


def test_main_term_tracks_count():
    for B in (1000, 10_000):
        n = count_torsor(B)
        assert abs(density.main_term_sum(B, "theta1") / n - 1) < 1e-3
        assert abs(density.main_term_sum(B) / n - 1) < 0.25


def test_main_term_guard():
    with pytest.raises(GuardError):
        density.main_term_sum(density.MAIN_TERM_MAX_B + 1)
    with pytest.raises(ValueError):
        density.main_term_sum(10, "theta3")


def test_euler():
    assert density.euler_factor(2) == Fraction(19, 512)
    e = density.euler_product(10**5)
    assert e.p2_factor == Fraction(19, 512)
    assert abs(e.value - density.euler_product(10**6).value) < e.value * e.tail_bound
    assert float(density.euler_product(2).value) == 19 / 512


def test_euler_factor_expansion():
    # 1 - 27/p^2 + O(p^-3)
    p = 10**6
    assert float(1 - density.euler_factor(p)) * p * p == pytest.approx(27, rel=1e-3)


def test_peyre_constant():
    pb = density.peyre_constant(10**4, 200_000, seed=1)
    assert pb.alpha == Fraction(1, 172800)
    assert pb.c_SH == pytest.approx(float(pb.alpha) * pb.euler_product * pb.omega_inf)
    assert 2.6e-7 < pb.c_SH < 2.85e-7


def test_v0_prime():
    assert density.v0_prime_estimate(1) == (0.0, 0.0)
    est, se = density.v0_prime_estimate(10**4, samples=400_000, seed=2)
    assert est / 1.2591e6 == pytest.approx(1, abs=0.05)
    assert se > 0
