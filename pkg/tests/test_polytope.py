from fractions import Fraction

import pytest

from cubicpoints import polytope
from cubicpoints.polytope import Polytope


def test_alpha_exact():
    assert polytope.alpha_volume() == Fraction(1, 172800)
    assert len(polytope.ALPHA_POLYTOPE.vertices()) == 13


def test_simplex_volume():
    assert polytope.volume(polytope.SIMPLEX5) == polytope.SIMPLEX5_VOLUME


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_unit_cube(d):
    rows = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    assert polytope.volume(Polytope(rows, (1,) * d)) == 1


def test_square_minus_corner():
    # unit square with x + y <= 3/2: area 1 - 1/8
    P = Polytope(((1, 0), (0, 1), (1, 1)), (1, 1, Fraction(3, 2)))
    assert polytope.volume(P) == Fraction(7, 8)


def test_degenerate():
    with pytest.raises(ValueError):
        polytope.volume(Polytope(((1, 1), (-1, -1)), (0, 0)))


def test_hit_count_close():
    est, se = polytope.alpha_hit_count(10**6, seed=3)
    assert abs(est - 1 / 172800) <= 5 * se
