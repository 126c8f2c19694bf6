import numpy as np
import pytest

from cubicpoints import archimedean as arc

# nested adaptive quadrature of the x3-length over (x1, x2), computed once offline
REFERENCE = 35.69729045872856


def test_x3_length_matches_sampling():
    rng = np.random.default_rng(0)
    for x1, x2 in [(0.3, 0.5), (-0.3, 0.5), (-0.05, 0.001), (0.01, 0.9)]:
        x3 = rng.uniform(-1, 1, 400_000)
        frac = arc.in_region(np.full_like(x3, x1), np.full_like(x3, x2), x3).mean()
        assert arc.x3_length(x1, x2) == pytest.approx(2 * frac, abs=0.01)


def test_grid_matches_reference():
    r = arc.omega_inf_grid()
    assert r.estimate == pytest.approx(REFERENCE, rel=1e-4)


def test_mc_within_error_bar():
    r = arc.omega_inf_mc(1_000_000, seed=5)
    assert abs(r.estimate - REFERENCE) < 5 * r.stderr


def test_mc_deterministic():
    a = arc.omega_inf_mc(200_000, seed=9)
    b = arc.omega_inf_mc(200_000, seed=9)
    assert a == b


def test_draw_region_density():
    # importance weights 1/(q |x1 x2|) average to omega_inf
    sts, probs = arc.shell_table(0)
    rng = np.random.default_rng(1)
    x1, x2, x3, q = arc.draw_region(1_000_000, rng, sts, probs)
    w = arc.in_region(x1, x2, x3) / (q * np.abs(x1 * x2))
    assert w.mean() == pytest.approx(REFERENCE, rel=0.02)
