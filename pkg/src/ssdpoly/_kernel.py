"""Lattice evaluation of the pentagon closure error.

Every lattice point is computed independently with the same scalar
arithmetic, so the result does not depend on thread count or scheduling.
"""

import math

import numpy as np

try:
    import numba

    # TBB on this platform is too old for numba; pick a layer that always works
    numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

CLAMP = 1e-12
UNIT_TOL = 1e-9
# planes through (nearly) collinear points carry no information
MIN_NORMAL = 1e-12


def _phi(ax, ay, az, bx, by, bz, r):
    # same domain checks and arithmetic as duality.phi; NaN marks a failed step
    na = math.sqrt(ax * ax + ay * ay + az * az)
    nb = math.sqrt(bx * bx + by * by + bz * bz)
    if abs(na - 1.0) > UNIT_TOL or abs(nb - 1.0) > UNIT_TOL:
        return math.nan, math.nan, math.nan
    ax, ay, az = ax / na, ay / na, az / na
    bx, by, bz = bx / nb, by / nb, bz / nb
    sx, sy, sz = ax + bx, ay + by, az + bz
    dx, dy, dz = ax - bx, ay - by, az - bz
    plus = math.sqrt(sx * sx + sy * sy + sz * sz)
    minus2 = dx * dx + dy * dy + dz * dz
    den = 0.5 * plus * plus
    if den <= 1e-12 or minus2 <= 2e-15:
        return math.nan, math.nan, math.nan
    disc = 0.5 * (plus - 2.0 * r) * (plus + 2.0 * r)
    if disc < 0.0:
        if disc < -CLAMP:
            return math.nan, math.nan, math.nan
        disc = 0.0
    s = math.sqrt(disc / (0.5 * minus2))
    cx = ay * bz - az * by
    cy = az * bx - ax * bz
    cz = ax * by - ay * bx
    return ((s * cx - r * sx) / den,
            (s * cy - r * sy) / den,
            (s * cz - r * sz) / den)


def _plane_dist(p, q, w, v):
    ux, uy, uz = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    wx, wy, wz = w[0] - p[0], w[1] - p[1], w[2] - p[2]
    nx = uy * wz - uz * wy
    ny = uz * wx - ux * wz
    nz = ux * wy - uy * wx
    nn = math.sqrt(nx * nx + ny * ny + nz * nz)
    if not nn > MIN_NORMAL:
        return math.nan
    return abs(nx * (v[0] - p[0]) + ny * (v[1] - p[1]) + nz * (v[2] - p[2])) / nn


def _point_error(kappa, lam, r):
    # same parameter domain as search.pentagon_vertices
    if not (0.0 < r < 1.0) or not (0.0 < kappa < lam < math.pi):
        return math.inf
    rho = math.sqrt(1.0 - r * r)
    ck, sk, cl, sl = math.cos(kappa), math.sin(kappa), math.cos(lam), math.sin(lam)
    a = (rho, 0.0, -r)
    b = (rho * ck, rho * sk, -r)
    c = (rho * cl, rho * sl, -r)
    d = (rho * cl, -rho * sl, -r)
    e = (rho * ck, -rho * sk, -r)
    f = _phi(d[0], d[1], d[2], c[0], c[1], c[2], r)
    g = _phi(e[0], e[1], e[2], d[0], d[1], d[2], r)
    h = _phi(a[0], a[1], a[2], e[0], e[1], e[2], r)
    i = _phi(b[0], b[1], b[2], a[0], a[1], a[2], r)
    j = _phi(c[0], c[1], c[2], b[0], b[1], b[2], r)
    k = _phi(h[0], h[1], h[2], i[0], i[1], i[2], r)
    l = _phi(i[0], i[1], i[2], j[0], j[1], j[2], r)
    m = _phi(j[0], j[1], j[2], f[0], f[1], f[2], r)
    n = _phi(f[0], f[1], f[2], g[0], g[1], g[2], r)
    p = _phi(g[0], g[1], g[2], h[0], h[1], h[2], r)
    q = _phi(p[0], p[1], p[2], n[0], n[1], n[2], r)
    rv = _phi(k[0], k[1], k[2], p[0], p[1], p[2], r)
    s = _phi(l[0], l[1], l[2], k[0], k[1], k[2], r)
    t = _phi(m[0], m[1], m[2], l[0], l[1], l[2], r)
    y = _phi(m[0], m[1], m[2], n[0], n[1], n[2], r)
    u = _phi(s[0], s[1], s[2], t[0], t[1], t[2], r)
    v = _phi(q[0], q[1], q[2], rv[0], rv[1], rv[2], r)
    x = _phi(rv[0], rv[1], rv[2], s[0], s[1], s[2], r)
    e1 = math.sqrt((f[0] - x[0]) ** 2 + (f[1] - x[1]) ** 2 + (f[2] - x[2]) ** 2)
    e2 = _plane_dist(n, s, t, v)
    e3 = _plane_dist(t, f, j, v)
    # a failed step leaves NaN, which max() would silently drop
    # y and u are not scored but must exist, as in search.build_chain
    if not (e1 <= math.inf and e2 <= math.inf and e3 <= math.inf and y[0] == y[0] and u[0] == u[0]):
        return math.inf
    return max(e1, e2, e3)


def _lattice_py(ks, ls, rs):
    out = np.empty((len(ks), len(ls), len(rs)))
    for a in range(len(ks)):
        for b in range(len(ls)):
            for c in range(len(rs)):
                out[a, b, c] = _point_error(ks[a], ls[b], rs[c])
    return out


if numba is not None:
    _phi = numba.njit(cache=True, error_model="numpy")(_phi)
    _plane_dist = numba.njit(cache=True, error_model="numpy")(_plane_dist)
    point_error = numba.njit(cache=True, error_model="numpy")(_point_error)

    @numba.njit(parallel=True, cache=True, error_model="numpy")
    def _lattice_nb(ks, ls, rs):
        nk, nl, nr = len(ks), len(ls), len(rs)
        out = np.empty((nk, nl, nr))
        for idx in numba.prange(nk * nl):
            a = idx // nl
            b = idx % nl
            for c in range(nr):
                out[a, b, c] = point_error(ks[a], ls[b], rs[c])
        return out

    lattice_errors = _lattice_nb
else:  # pragma: no cover
    point_error = _point_error
    lattice_errors = _lattice_py
