from fractions import Fraction
from math import gcd, prod

import pytest
import sympy
from hypothesis import given, strategies as st

from cubicpoints import arith
from cubicpoints.arith import Factored


@given(st.integers(1, 10**12))
def test_factor_matches_sympy(n):
    f = arith.factor(n)
    assert dict(f.factors) == sympy.factorint(n)
    assert prod(p**e for p, e in f.factors) == n


def test_factor_large_semiprime():
    p, q = 1000000007, 998244353
    assert arith.factor(p * q).factors == ((q, 1), (p, 1))
    big = (2**61 - 1) * (2**31 - 1)
    assert arith.factor(big).primes == (2**31 - 1, 2**61 - 1)


def test_factor_examples_and_bounds():
    assert arith.factor(1).factors == ()
    assert arith.factor(360).factors == ((2, 3), (3, 2), (5, 1))
    with pytest.raises(ValueError):
        arith.factor(0)
    with pytest.raises(ValueError):
        arith.factor(2**127)


def test_factored_validates():
    with pytest.raises(ValueError):
        Factored(12, ((2, 2), (3, 2)))
    with pytest.raises(ValueError):
        Factored(6, ((3, 1), (2, 1)))


@given(st.integers(-10**6, 10**6), st.integers(0, 10**4).map(lambda k: 2 * k + 1))
def test_jacobi_matches_sympy(a, n):
    assert arith.jacobi(a, n) == sympy.jacobi_symbol(a % n, n)


def test_jacobi_rejects_even():
    with pytest.raises(ValueError):
        arith.jacobi(3, 10)


@given(st.integers(0, 10**4).map(lambda k: 2 * k + 1), st.integers(0, 12))
def test_bracket2_exhaustive(n, j):
    m = 1 << j
    brute = sum(1 for r in range(m) if (r * r - n) % m == 0 and (m == 1 or r % 2))
    assert arith.bracket2(n, j) == brute


def test_bracket2_j0_any_n():
    assert arith.bracket2(4, 0) == 1
    with pytest.raises(ValueError):
        arith.bracket2(4, 1)


@given(st.integers(1, 10**6))
def test_multiplicative_functions(n):
    f = arith.factor(n)
    assert arith.mobius(f) == sympy.mobius(n)
    assert arith.euler_phi(f) == sympy.totient(n)
    assert arith.omega(f) == len(sympy.primefactors(n))
    assert arith.radical(f) == prod(sympy.primefactors(n))
    assert arith.phi_star(f) == Fraction(int(sympy.totient(n)), n)
    assert arith.divisors(f) == sympy.divisors(n)
    assert arith.squarefree_divisors(f) == [d for d in sympy.divisors(n) if sympy.mobius(d) != 0]


@given(st.integers(1, 10**6))
def test_two_adic(n):
    v, m = arith.two_adic(n)
    assert m % 2 == 1 and m << v == n


def test_sieves():
    assert list(arith.primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    spf = arith.smallest_prime_factors(100)
    assert all(spf[n] == min(sympy.primefactors(n)) for n in range(2, 101))
    assert [n for n in range(200) if arith.is_prime(n)] == list(sympy.primerange(0, 200))
    assert arith.is_prime(2**89 - 1) and not arith.is_prime(3317044064679887385961981)


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=6))
def test_gcd_many(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    assert arith.gcd_many(xs) == g
