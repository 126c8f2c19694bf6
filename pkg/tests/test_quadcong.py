from math import gcd

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from cubicpoints import quadcong
from cubicpoints.arith import factor


def test_examples():
    assert quadcong.count_brute(1, 8) == 4
    assert quadcong.count_formula(1, 8) == 4
    assert quadcong.count_formula(-1, 5) == 2
    assert quadcong.count_formula(3, 4) == 0
    assert quadcong.count_formula(7, 1) == 1
    assert quadcong.sqrt_mod(7, factor(1)) == [1]


def test_formula_rejects_nonunit():
    with pytest.raises(ValueError):
        quadcong.count_formula(2, 4)
    with pytest.raises(ValueError):
        quadcong.count_divisor_sum(3, 9)


@given(st.integers(-10**4, 10**4), st.integers(1, 3000))
def test_three_counts_agree(a, q):
    assume(gcd(a, q) == 1)
    n = quadcong.count_brute(a, q)
    assert quadcong.count_formula(a, q) == n
    assert quadcong.count_divisor_sum(a, q) == n
    assert quadcong.count(a, q) == n


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_sqrt_mod_roots(a, q):
    assume(gcd(a, q) == 1)
    roots = quadcong.sqrt_mod(a, factor(q))
    assert roots == sorted(set(roots))
    assert all(1 <= r <= q and (r * r - a) % q == 0 and gcd(r, q) == 1 for r in roots)
    assert len(roots) == quadcong.count_formula(a, q)


@given(st.integers(-500, 500), st.integers(2, 500))
def test_sqrt_mod_matches_sympy(a, q):
    assume(gcd(a, q) == 1)
    ours = [r % q for r in quadcong.sqrt_mod(a, factor(q))]
    theirs = sorted(r for r in sympy.ntheory.residue_ntheory.sqrt_mod(a % q, q, all_roots=True) if gcd(r, q) == 1)
    assert sorted(ours) == theirs


@pytest.mark.parametrize("q", [1, 7, 60, 97, 128, 210])
def test_n_table(q):
    tab = quadcong.n_table(q)
    assert list(tab) == [quadcong.count_brute(r, q) for r in range(q)]
