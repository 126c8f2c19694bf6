"""The archimedean density omega_inf.

omega_inf = integral of 1/|x1 x2| over
    |x1^3 + x2 x3^2| <= |x1 x2|,  |x1| <= 1,  0 < x2 <= 1,  |x3| <= 1.

With z = -log|x1| and w = -log x2 the measure dx1 dx2 / |x1 x2| becomes
dz dw, which removes the singularity at x1 = 0.  The region forces
w <= 2z when x1 > 0 and w <= 3z + log 2 when x1 < 0, and |x3| <= sqrt|x1|
(resp. sqrt(|x1|^3/x2 + |x1|)), so each z-shell has finite measure and the
shells decay like z exp(-z/2).

Two estimators: stratified Monte Carlo testing the raw inequality, and an
adaptive midpoint rule on the closed-form x3-length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG2 = math.log(2.0)
Z_MAX = 60.0
SIGNS = (1, -1)


def in_region(x1, x2, x3):
    """Vectorised membership test for the height-one region (x2 > 0 side)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x3 = np.asarray(x3, dtype=float)
    return (
        (np.abs(x1 * x1 * x1 + x2 * x3 * x3) <= np.abs(x1 * x2))
        & (np.abs(x1) <= 1)
        & (x2 > 0)
        & (x2 <= 1)
        & (np.abs(x3) <= 1)
    )


def density(x1, x2, x3):
    """1/|x1 x2| on the region, 0 off it."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(in_region(x1, x2, x3), 1.0 / np.abs(x1 * x2), 0.0)


def w_max(z, sign):
    return 2.0 * z if sign > 0 else 3.0 * z + LOG2


def x3_outer(a, x2, sign):
    """Half-width of an interval in x3 that contains the region's slice."""
    if sign > 0:
        return np.sqrt(a)
    return np.minimum(1.0, np.sqrt(a**3 / x2 + a))


def x3_length(x1, x2):
    """Exact length of {x3 : (x1, x2, x3) in region}."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    a = np.abs(x1)
    s = a**3 / x2
    pos = 2.0 * np.sqrt(np.clip(a - s, 0.0, 1.0))
    top = np.sqrt(np.minimum(s + a, 1.0))
    bottom = np.sqrt(np.maximum(s - a, 0.0))
    neg = 2.0 * np.maximum(top - bottom, 0.0)
    return np.where(x1 > 0, pos, neg)


@dataclass(frozen=True)
class Stratum:
    sign: int
    z0: float
    z1: float


def strata(z_max: float = Z_MAX) -> list[Stratum]:
    """sign(x1) times unit shells in z = -log|x1|."""
    n = int(math.ceil(z_max))
    return [Stratum(s, float(j), float(min(j + 1, z_max))) for s in SIGNS for j in range(n)]


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))


def _draw(st: Stratum, n: int, rng: np.random.Generator):
    """n points of the stratum: (x1, x2, x3, weight) with E[weight * 1_region] = stratum integral."""
    u = rng.random((n, 3))
    z = st.z0 + (st.z1 - st.z0) * u[:, 0]
    wm = w_max(z, st.sign)
    w = wm * u[:, 1]
    a = np.exp(-z)
    x2 = np.exp(-w)
    c = x3_outer(a, x2, st.sign)
    x3 = c * (2.0 * u[:, 2] - 1.0)
    x1 = st.sign * a
    weight = (st.z1 - st.z0) * wm * 2.0 * c
    return x1, x2, x3, weight


def _stratum_sums(st: Stratum, n: int, seed: int, key: int, chunk: int = 1 << 20):
    """(sum f, sum f^2) over n draws, chunked in a fixed order."""
    rng = _rng(seed, key)
    s1 = s2 = 0.0
    left = n
    while left > 0:
        m = min(chunk, left)
        x1, x2, x3, wt = _draw(st, m, rng)
        f = np.where(in_region(x1, x2, x3), wt, 0.0)
        s1 += math.fsum(f)
        s2 += math.fsum(f * f)
        left -= m
    return s1, s2


@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    samples: int


def omega_inf_mc(samples: int = 4_000_000, seed: int = 0, z_max: float = Z_MAX, pilot_frac: float = 0.05) -> MCResult:
    """Stratified Monte Carlo with pilot-based Neyman allocation."""
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples")
    sts = strata(z_max)
    n_pilot = max(200, int(samples * pilot_frac) // len(sts))
    sig = []
    for i, st in enumerate(sts):
        s1, s2 = _stratum_sums(st, n_pilot, seed, 2 * i)
        mean = s1 / n_pilot
        sig.append(math.sqrt(max(s2 / n_pilot - mean * mean, 0.0)))
    budget = max(samples - n_pilot * len(sts), len(sts) * 100)
    total_sig = sum(sig) or 1.0
    est = 0.0
    var = 0.0
    used = n_pilot * len(sts)
    for i, st in enumerate(sts):
        n = max(100, int(round(budget * sig[i] / total_sig)))
        s1, s2 = _stratum_sums(st, n, seed, 2 * i + 1)
        mean = s1 / n
        est += mean
        var += max(s2 / n - mean * mean, 0.0) / n
        used += n
    return MCResult(est, math.sqrt(var), used)


def _integrand_zs(z, s, sign):
    """x3-length times dw/ds, as a function of (z, s) with w = s * w_max(z)."""
    wm = w_max(z, sign)
    x1 = sign * np.exp(-z)
    x2 = np.exp(-s * wm)
    return x3_length(x1, x2) * wm


@dataclass(frozen=True)
class GridResult:
    estimate: float
    error: float
    cells: int


def omega_inf_grid(tol: float = 1e-3, z_max: float = Z_MAX, max_depth: int = 14, min_depth: int = 5) -> GridResult:
    """Adaptive midpoint rule over (z, s) in [0, z_max] x [0, 1] per sign.

    A cell is accepted when its midpoint value and the sum over its four
    children agree to within tol * area; otherwise it is split.  Cells are
    always split down to min_depth so that a coarse cell cannot be accepted
    by a coincidental match across the cusp of the x3-length.
    """
    total = 0.0
    err = 0.0
    cells = 0
    for sign in SIGNS:
        n0 = int(math.ceil(z_max)) * 4
        z0 = np.repeat(np.linspace(0, z_max, n0, endpoint=False), 4)
        s0 = np.tile(np.linspace(0, 1, 4, endpoint=False), n0)
        hz = np.full(z0.size, z_max / n0)
        hs = np.full(z0.size, 0.25)
        for depth in range(max_depth + 1):
            if z0.size == 0:
                break
            parent = _integrand_zs(z0 + hz / 2, s0 + hs / 2, sign) * hz * hs
            qz = np.concatenate([z0 + hz / 4, z0 + 3 * hz / 4, z0 + hz / 4, z0 + 3 * hz / 4])
            qs = np.concatenate([s0 + hs / 4, s0 + hs / 4, s0 + 3 * hs / 4, s0 + 3 * hs / 4])
            kids = _integrand_zs(qz, qs, sign).reshape(4, -1).sum(axis=0) * hz * hs / 4
            diff = np.abs(kids - parent)
            if depth < min_depth:
                ok = np.zeros_like(diff, bool)
            elif depth < max_depth:
                ok = diff <= tol * hz * hs
            else:
                ok = np.ones_like(diff, bool)
            total += math.fsum(kids[ok])
            err += math.fsum(diff[ok]) / 3
            cells += int(ok.sum())
            z0, s0, hz, hs = z0[~ok], s0[~ok], hz[~ok] / 2, hs[~ok] / 2
            z0 = np.concatenate([z0, z0 + hz, z0, z0 + hz])
            s0 = np.concatenate([s0, s0, s0 + hs, s0 + hs])
            hz = np.tile(hz, 4)
            hs = np.tile(hs, 4)
    return GridResult(total, err, cells)


def omega_inf(samples: int = 4_000_000, seed: int = 0) -> tuple[float, float]:
    r = omega_inf_mc(samples, seed)
    return r.estimate, r.stderr


def shell_table(seed: int = 0, samples: int = 200_000, z_max: float = Z_MAX) -> tuple[list[Stratum], np.ndarray]:
    """Strata with selection probabilities proportional to their pilot integrals."""
    sts = strata(z_max)
    n = max(200, samples // len(sts))
    means = np.array([_stratum_sums(st, n, seed, 10_000 + i)[0] / n for i, st in enumerate(sts)])
    means = np.maximum(means, 1e-12 * means.max())
    return sts, means / means.sum()


def draw_region(n: int, rng: np.random.Generator, sts, probs):
    """n points with x-space density q(x) returned alongside.

    Stratum j is chosen with probability probs[j], then (z, s, x3) uniformly,
    so q(x) = probs[j] / ((z1 - z0) * w_max * 2c * |x1 x2|).
    """
    j = rng.choice(len(sts), size=n, p=probs)
    u = rng.random((n, 3))
    z0 = np.array([st.z0 for st in sts])[j]
    z1 = np.array([st.z1 for st in sts])[j]
    sign = np.array([st.sign for st in sts])[j]
    z = z0 + (z1 - z0) * u[:, 0]
    wm = np.where(sign > 0, 2.0 * z, 3.0 * z + LOG2)
    x2 = np.exp(-wm * u[:, 1])
    a = np.exp(-z)
    c = np.where(sign > 0, np.sqrt(a), np.minimum(1.0, np.sqrt(a**3 / x2 + a)))
    x3 = c * (2.0 * u[:, 2] - 1.0)
    x1 = sign * a
    q = probs[j] / ((z1 - z0) * wm * 2.0 * c * a * x2)
    return x1, x2, x3, q
