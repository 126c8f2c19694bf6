"""Exact volume of small rational polytopes {x >= 0, A x <= b}.

Vertices come from intersecting every d-subset of the constraint
hyperplanes; the volume from a pulling triangulation (cone each facet
not containing a fixed base vertex over that vertex, recursively).
Everything is in Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None when singular."""
    n = len(rows)
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    m = [list(v) for v in vectors]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


@dataclass(frozen=True)
class Polytope:
    """{t in R^d : t >= 0, A t <= b}."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        A = tuple(tuple(Fraction(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        if len({len(r) for r in A}) != 1 or len(A) != len(self.b):
            raise ValueError("ragged constraint matrix")

    @property
    def dim(self) -> int:
        return len(self.A[0])

    def halfspaces(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        """All constraints as (a, beta) meaning a.t <= beta, nonnegativity first."""
        d = self.dim
        out = []
        for i in range(d):
            a = [Fraction(0)] * d
            a[i] = Fraction(-1)
            out.append((tuple(a), Fraction(0)))
        out.extend(zip(self.A, self.b))
        return out

    def contains(self, t: Sequence) -> bool:
        return all(sum(x * y for x, y in zip(a, t)) <= beta for a, beta in self.halfspaces())

    def vertices(self) -> list[tuple[Fraction, ...]]:
        hs = self.halfspaces()
        found = set()
        for idx in combinations(range(len(hs)), self.dim):
            sol = _solve([list(hs[i][0]) for i in idx], [hs[i][1] for i in idx])
            if sol is not None and self.contains(sol):
                found.add(tuple(sol))
        return sorted(found)

    def sample_hits(self, pts: np.ndarray) -> np.ndarray:
        """Float membership test for an (n, d) array."""
        A = np.array([[float(x) for x in row] for row in self.A])
        b = np.array([float(x) for x in self.b])
        return (pts >= 0).all(axis=1) & (pts @ A.T <= b).all(axis=1)


def _affine_dim(pts: Sequence[Sequence[Fraction]]) -> int:
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]])


def _triangulate(face: frozenset, k: int, verts, tight) -> list[tuple[int, ...]]:
    """Simplices (as vertex index tuples) of a pulling triangulation of a k-face."""
    if len(face) == k + 1:
        return [tuple(sorted(face))]
    base = min(face)
    seen = set()
    out = []
    common = set.intersection(*(tight[v] for v in face))
    for c in set().union(*(tight[v] for v in face)) - common:
        sub = frozenset(v for v in face if c in tight[v])
        if base in sub or sub in seen or len(sub) < k:
            continue
        if _affine_dim([verts[v] for v in sub]) != k - 1:
            continue
        seen.add(sub)
        for simplex in _triangulate(sub, k - 1, verts, tight):
            out.append((base,) + simplex)
    return out


def volume(P: Polytope) -> Fraction:
    verts = P.vertices()
    d = P.dim
    if len(verts) <= d or _affine_dim(verts) < d:
        raise ValueError("degenerate polytope")
    hs = P.halfspaces()
    tight = [
        {i for i, (a, beta) in enumerate(hs) if sum(x * y for x, y in zip(a, v)) == beta} for v in verts
    ]
    total = Fraction(0)
    for simplex in _triangulate(frozenset(range(len(verts))), d, verts, tight):
        v0 = verts[simplex[0]]
        rows = [[a - b for a, b in zip(verts[i], v0)] for i in simplex[1:]]
        total += abs(det(rows))
    return total / math.factorial(d)


# the polytope whose volume is alpha(S)
ALPHA_POLYTOPE = Polytope(
    ((3, 2, 4, 3, 2, 0), (-5, -3, -6, -4, -2, 2)),
    (1, -1),
)

ALPHA_EXPECTED = Fraction(1, 172800)

# dropping the second constraint and t6 leaves a simplex of volume 1 / (5! * 3*2*4*3*2)
SIMPLEX5 = Polytope(((3, 2, 4, 3, 2),), (1,))
SIMPLEX5_VOLUME = Fraction(1, math.factorial(5) * 3 * 2 * 4 * 3 * 2)


def alpha_volume() -> Fraction:
    return volume(ALPHA_POLYTOPE)


def alpha_hit_count(samples: int, seed: int = 0, chunk: int = 1 << 20) -> tuple[float, float]:
    """Monte Carlo volume of the alpha polytope, (estimate, stderr).

    Proposal: uniform on the 5-simplex in t1..t5 times t6 in [0, 1/3]
    (t6 <= 1/3 is implied by the two constraints).
    """
    rng = np.random.Generator(np.random.Philox(seed))
    coef = np.array([3.0, 2.0, 4.0, 3.0, 2.0])
    prop_vol = float(SIMPLEX5_VOLUME) / 3
    hits = 0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        e = rng.exponential(size=(n, 6))
        x = e[:, :5] / e.sum(axis=1, keepdims=True) / coef
        t6 = rng.random(n) / 3
        pts = np.column_stack([x, t6])
        hits += int(ALPHA_POLYTOPE.sample_hits(pts).sum())
        done += n
    p = hits / samples
    return prop_vol * p, prop_vol * math.sqrt(p * (1 - p) / samples)
