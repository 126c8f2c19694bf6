from math import gcd

import pytest
from hypothesis import given, strategies as st

from cubicpoints import torsor
from cubicpoints.torsor import GuardError, SurfacePoint, TorsorPoint

KNOWN = {1: 4, 2: 8, 5: 26, 10: 102, 50: 938, 100: 2548, 300: 11402}


def naive_count(B):
    """Triple loop over (x1, x2, x3) solving for x0; no pruning."""
    n = 0
    for x1 in range(-B, B + 1):
        if x1 == 0:
            continue
        for x2 in range(1, B + 1):
            for x3 in range(-B, B + 1):
                num = x1**3 + x2 * x3 * x3
                if num % (x1 * x2):
                    continue
                x0 = -num // (x1 * x2)
                if abs(x0) <= B and gcd(gcd(x0, x1), gcd(x2, x3)) == 1:
                    n += 1
    return n


@pytest.mark.parametrize("B", [1, 2, 5, 10, 20])
def test_direct_against_naive(B):
    assert torsor.count_direct(B) == naive_count(B)


@pytest.mark.parametrize("B", sorted(KNOWN))
def test_counts(B):
    assert torsor.count_direct(B) == KNOWN[B]
    assert torsor.count_torsor(B) == KNOWN[B]


@pytest.mark.parametrize("B", [0, 1, 7, 60])
def test_python_walk_matches_kernel(B):
    assert torsor.count_torsor(B, method="python") == torsor.count_torsor(B)


def test_points_are_torsor_images():
    B = 60
    etas = list(torsor.iter_torsor_points(B))
    assert len(etas) == len({torsor.psi_coords(e) for e in etas})
    for e in etas:
        t = TorsorPoint(e)
        p = torsor.psi(t)
        assert torsor.height(p) <= B
        assert torsor.height_condition(e[:8], e[8], B)


def test_list_points_sorted_and_equal_to_direct():
    pts = torsor.list_points(100)
    assert pts == sorted(pts)
    direct = sorted(tuple(int(x) for x in r) for r in torsor.direct_points(100))
    assert [p.as_tuple() for p in pts] == direct


def test_height_one_points():
    pts = {p.as_tuple() for p in torsor.list_points(1)}
    assert len(pts) == 4
    assert all(torsor.on_surface(*p) for p in pts)


def test_surface_point_validation():
    with pytest.raises(ValueError):
        SurfacePoint(1, 1, 1, 1)
    with pytest.raises(ValueError):
        SurfacePoint(0, 0, 1, 0)
    p = torsor.canonicalize(2, 2, -2, 0)
    assert p.x2 > 0 and torsor.on_surface(*p.as_tuple())


def test_torsor_point_validation():
    good = next(torsor.iter_torsor_points(5))
    TorsorPoint(good)
    bad = list(good)
    bad[9] += 1
    with pytest.raises(ValueError):
        TorsorPoint(tuple(bad))


def test_guards():
    with pytest.raises(GuardError):
        torsor.count_direct(torsor.DIRECT_MAX_B + 1)
    with pytest.raises(GuardError):
        torsor.list_points(torsor.LIST_MAX_B + 1)
    with pytest.raises(GuardError):
        torsor.count_torsor(torsor.TORSOR_MAX_B + 1)


@given(st.integers(1, 400))
def test_monotone_in_B(B):
    assert torsor.count_torsor(B) <= torsor.count_torsor(B + 1)


def test_threads_do_not_change_count():
    assert torsor.count_torsor(2000, threads=1) == torsor.count_torsor(2000, threads=4) == 145922
