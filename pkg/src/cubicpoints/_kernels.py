"""numba kernels for the torsor count. Mirrors ``torsor.iter_torsor_points``."""

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _modinv(a, m):
    if m == 1:
        return 0
    t, nt, r, nr = 0, 1, m, a % m
    while nr:
        qq = r // nr
        t, nt = nt, t - qq * nt
        r, nr = nr, r - qq * nr
    return t % m


@njit(cache=True)
def _isqrt(n):
    if n <= 0:
        return 0
    r = np.int64(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _walk(left, right, rho, e1, e2, A, e8, m9, m10, B):
    cnt = 0
    e9 = left + (rho - left) % e1
    while e9 <= right:
        if _gcd(e9, m9) == 1:
            e10 = -(e2 * e9 * e9 + A * e8) // e1
            if _gcd(e10, m10) == 1 and abs(e8 * e10) <= B:
                cnt += 1
        e9 += e1
    return cnt


@njit(cache=True)
def _count_head(h, B, base, ptr, roots):
    e1, e2, e3, e4, e5, e6, e7 = h[0], h[1], h[2], h[3], h[4], h[5], h[6]
    A = e4 * e5 * e5 * e6 * e6 * e6 * e6 * e7 * e7 * e7
    p1 = e1 * e2 * e3 * e3 * e4 * e4 * e5 * e5 * e6 * e6 * e7 * e7
    y0 = e2 * e3 * e4 * e5 * e6 * e7
    m8 = e1 * e2 * e3 * e4 * e5 * e7
    m9 = e1 * e3 * e4 * e5 * e6 * e7
    m10 = y0
    inv2 = _modinv(e2, e1)
    top = B // p1
    Be1 = B * e1
    fB2e2 = np.float64(B) * np.float64(B) * np.float64(e2)
    fy02 = np.float64(y0) * np.float64(y0)
    total = 0
    for sgn in (1, -1):
        for a8 in range(1, top + 1):
            Aa2 = A * a8 * a8
            if sgn > 0:
                if Aa2 > Be1:
                    break
            else:
                low = Aa2 - Be1
                # float test with slack; a missed break only costs an empty pass
                if low > 0 and 3 * Aa2 > Be1 and np.float64(low) * a8 * fy02 > fB2e2 * 1.000001:
                    break
            if _gcd(a8, m8) != 1:
                continue
            e8 = sgn * a8
            den = e2 * a8
            if sgn > 0:
                lo = 0
                hi = _isqrt((Be1 - Aa2) // den)
            else:
                low = Aa2 - Be1
                if low > 0:
                    lo = _isqrt((low + den - 1) // den - 1) + 1
                else:
                    lo = 0
                hi = _isqrt((Aa2 + Be1) // den)
            cap = B // (y0 * a8)
            if cap < hi:
                hi = cap
            if lo > hi:
                continue
            c = ((-(A % e1) * (e8 % e1)) % e1) * inv2 % e1
            if _gcd(c, e1) != 1:
                continue
            idx = base[e1] + c
            for k in range(ptr[idx], ptr[idx + 1]):
                rho = roots[k]
                if lo == 0:
                    total += _walk(-hi, hi, rho, e1, e2, A, e8, m9, m10, B)
                else:
                    total += _walk(lo, hi, rho, e1, e2, A, e8, m9, m10, B)
                    total += _walk(-hi, -lo, rho, e1, e2, A, e8, m9, m10, B)
    return total


@njit(cache=True, parallel=True)
def count_heads(heads, B, base, ptr, roots):
    n = heads.shape[0]
    total = 0
    for i in prange(n):
        total += _count_head(heads[i], B, base, ptr, roots)
    return total


@njit(cache=True, parallel=True)
def count_per_head(heads, B, base, ptr, roots):
    n = heads.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in prange(n):
        out[i] = _count_head(heads[i], B, base, ptr, roots)
    return out
