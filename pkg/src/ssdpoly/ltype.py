"""Lovasz's L-type polyhedra P(k, l): apex, k rings of l vertices on common meridians.

Layer ``i`` (1..k) sits at polar angle ``theta_i``; layer ``k`` is the base
l-gon at height ``-r``. The face dual to vertex ``u(v, i)`` is the band
between layers ``k - i`` and ``k - i + 1`` on the opposite side (layer 0 is
the apex), so the whole polytope closes when each vertex lies on the dual
plane of one representative of those bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .duality import phi
from .errors import InvalidParams, NoClosure, SsdError
from .polytope import Polytope, order_cycle
from .verify import verify_ssd


MIN_LAYER_GAP = 1e-6


@dataclass(frozen=True)
class LTypeSpec:
    k: int
    l: int
    latitudes: tuple  # polar angles of layers 1..k, radians from the apex
    r: float

    def __post_init__(self):
        if self.k < 1 or self.l < 3 or self.l % 2 == 0:
            raise InvalidParams("need k >= 1 and an odd l >= 3")
        if len(self.latitudes) != self.k:
            raise InvalidParams(f"expected {self.k} latitudes, got {len(self.latitudes)}")
        object.__setattr__(self, "latitudes", tuple(float(t) for t in self.latitudes))

    @property
    def ordered(self) -> bool:
        # distinct layers, not merely non-decreasing: collapsed layers solve
        # the incidence equations of a smaller P(k', l)
        th = (0.0,) + self.latitudes + (math.pi,)
        return all(b - a > MIN_LAYER_GAP for a, b in zip(th, th[1:])) and 0.0 < self.r < 1.0


def layer_point(theta: float, azimuth: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(azimuth), st * math.sin(azimuth), math.cos(theta)])


def ltype_vertices(spec: LTypeSpec) -> np.ndarray:
    """Apex first, then layer by layer, azimuths ``2 pi j / l``."""
    pts = [np.array([0.0, 0.0, 1.0])]
    for th in spec.latitudes:
        pts.extend(layer_point(th, 2.0 * math.pi * j / spec.l) for j in range(spec.l))
    return np.array(pts)


def _incidences(k: int):
    """(layer i, dual-face layer j) pairs; j = 0 is the apex."""
    return [(i, j) for i in range(1, k + 1) for j in (k - i, k - i + 1)]


def ltype_residuals(spec: LTypeSpec) -> np.ndarray:
    """Signed distances of dual-face vertices from the dual planes of ``u(0, i)``.

    By the l-fold and mirror symmetry one meridian suffices: the dual face
    of ``u(0, i)`` is spanned by layers ``k-i`` and ``k-i+1`` on the meridian
    at azimuth ``pi - pi / l``.
    """
    opposite = math.pi - math.pi / spec.l
    th = (0.0,) + spec.latitudes
    out = []
    for i, j in _incidences(spec.k):
        v = layer_point(th[i], 0.0)
        w = layer_point(th[j], opposite) if j else np.array([0.0, 0.0, 1.0])
        out.append(float(v @ w) + spec.r)
    return np.array(out)


def _unpack(x, k, l):
    return LTypeSpec(k, l, tuple(x[1:]), x[0])


def _solve_newton(k, l, x0, tol, max_iter=60):
    x = np.array(x0, dtype=float)

    def F(y):
        return ltype_residuals(_unpack(y, k, l))

    f = F(x)
    h = 1e-7
    for _ in range(max_iter):
        norm = np.max(np.abs(f))
        if norm <= tol * 1e-3:
            break
        J = np.empty((len(f), len(x)))
        for c in range(len(x)):
            e = np.zeros_like(x)
            e[c] = h
            J[:, c] = (F(x + e) - F(x - e)) / (2 * h)
        step, *_ = np.linalg.lstsq(J, -f, rcond=None)
        t = 1.0
        while t > 1e-6:
            xn = x + t * step
            if 0.0 < xn[0] < 1.0:
                fn = F(xn)
                if np.max(np.abs(fn)) < norm:
                    break
            t *= 0.5
        else:
            return None
        x, f = xn, fn
    return x if np.max(np.abs(f)) <= tol else None


def _seeds(k):
    for r0 in (0.5, 0.7, 0.35, 0.85, 0.6, 0.45, 0.9):
        base = math.acos(-r0)
        yield np.array([r0] + [base * i / k for i in range(1, k + 1)])


def _grid_fallback(k, l, tol):
    from .search import refine_box

    def evaluate(axes):
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([m.ravel() for m in mesh], axis=1)
        err = np.array([_grid_error(row, k, l) for row in flat])
        return err.reshape(mesh[0].shape)

    center = next(_seeds(k))
    delta = np.array([0.3] + [0.5] * k)
    try:
        res = refine_box(evaluate, center, delta, n=8, shrink=0.5, tol=tol * 1e-2, max_steps=40)
        return res[0]
    except SsdError as exc:
        return exc.best[0] if exc.best is not None else None


def _grid_error(x, k, l):
    spec = LTypeSpec(k, l, tuple(x[1:]), x[0])
    if not spec.ordered:
        return math.inf
    return float(np.max(np.abs(ltype_residuals(spec))))


def solve_ltype(k: int, l: int, tol: float = 1e-12) -> LTypeSpec:
    """Layer angles and insphere radius that close P(k, l)."""
    LTypeSpec(k, l, (0.0,) * k, 0.5)  # validates k, l
    for x0 in _seeds(k):
        x = _solve_newton(k, l, x0, tol)
        if x is not None:
            spec = _unpack(x, k, l)
            if spec.ordered:
                return spec
    # the tangent-polygon route gives an independent starting point
    try:
        e = ellipse_ltype(k, l)
    except NoClosure:
        pass
    else:
        x = _solve_newton(k, l, np.array((e.r,) + e.latitudes), tol)
        if x is not None and _unpack(x, k, l).ordered:
            return _unpack(x, k, l)
    # a lattice over 1 + k unknowns is only affordable for few layers
    x = _grid_fallback(k, l, tol) if k <= 3 else None
    if x is not None:
        x = _solve_newton(k, l, x, tol)
        if x is not None and _unpack(x, k, l).ordered:
            return _unpack(x, k, l)
    raise NoClosure(f"P({k},{l}) incidence system did not close to {tol:g}")


def ltype_faces(k: int, l: int):
    """Apex triangles, trapezoid bands, base polygon (vertex indices of :func:`ltype_vertices`)."""

    def idx(i, j):
        return 1 + (i - 1) * l + (j % l)

    faces = [(0, idx(1, j), idx(1, j + 1)) for j in range(l)]
    for i in range(1, k):
        faces += [(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)) for j in range(l)]
    faces.append(tuple(idx(k, j) for j in range(l)))
    return faces


def construct_ltype(k: int, l: int, tol: float = 1e-9) -> Polytope:
    """Build and verify P(k, l); raises :class:`NoClosure` if it does not exist numerically."""
    spec = solve_ltype(k, l, tol=min(tol, 1e-12))
    verts = ltype_vertices(spec)
    faces = []
    for f in ltype_faces(k, l):
        c = verts[list(f)].mean(axis=0)
        faces.append(order_cycle(verts, list(f), c / np.linalg.norm(c)))
    poly = Polytope(verts, tuple(sorted(faces)), r=spec.r,
                    provenance=f"construct ltype k={k} l={l}")
    try:
        report = verify_ssd(poly, tol)
    except SsdError as exc:
        raise NoClosure(f"P({k},{l}) does not verify: {exc}") from None
    if not report.passed:
        raise NoClosure(f"P({k},{l}) does not verify:\n{report.to_text()}")
    return poly.with_(sigma=report.sigma)


def _ellipse_step(p, t, r0):
    """Next vertex of a polygon inscribed in ``(X/r0)^2 + Y^2 = 1`` whose sides touch the circle of radius ``t``.

    The side leaves ``p`` along the clockwise tangent to the circle.
    """
    psi = math.atan2(p[1], p[0])
    phi_t = psi - math.acos(t / math.hypot(p[0], p[1]))
    d = np.array([math.sin(phi_t), -math.cos(phi_t)])
    s = -2.0 * (p[0] * d[0] / r0 ** 2 + p[1] * d[1]) / (d[0] ** 2 / r0 ** 2 + d[1] ** 2)
    return p + s * d


def _ellipse_chain(k, t, r0):
    p = np.array([0.0, 1.0])
    out = []
    for _ in range(k):
        p = _ellipse_step(p, t, r0)
        out.append(p)
    return out


def ellipse_ltype(k: int, l: int, samples: int = 200) -> LTypeSpec:
    """P(k, l) from a tangent polygon in an ellipse, independently of :func:`solve_ltype`.

    In the meridian plane take the ellipse with semi-axes ``r0`` (across)
    and 1 (along the axis), where ``r0 = cos(pi / l)`` is the insphere
    radius of the base l-gon in its own plane. From the pole, draw the
    ``2k + 1`` sides of a polygon inscribed in the ellipse and tangent to
    the circle of radius ``t``; by mirror symmetry it closes exactly when
    the k-th vertex sits at height ``-t``. Stretching the ellipse onto the
    unit circle turns the first k vertices into the layer latitudes, and
    ``t`` is the insphere radius. ``t`` is found by bisection on the
    largest bracket whose chain winds once around the circle.
    """
    LTypeSpec(k, l, (0.0,) * k, 0.5)  # validates k, l
    r0 = math.cos(math.pi / l)

    def latitudes(t):
        return [math.atan2(p[0] / r0, p[1]) for p in _ellipse_chain(k, t, r0)]

    def gap(t):
        return _ellipse_chain(k, t, r0)[-1][1] + t

    def winds_once(t):
        th = latitudes(t)
        return all(a < b for a, b in zip([0.0] + th, th)) and th[-1] < math.pi

    # closing radii crowd towards r0 as k grows, so sample geometrically in r0 - t
    ts = r0 * (1.0 - np.geomspace(1e-12, 1.0 - 1e-6, samples * k))
    vals = [gap(t) for t in ts]
    for hi, lo, fh, fl in zip(ts, ts[1:], vals, vals[1:]):
        if fh == 0.0 or fh * fl < 0.0:
            t = hi if fh == 0.0 else bisect(gap, lo, hi, xtol=1e-16, rtol=1e-15, maxiter=200)
            if winds_once(t):
                return LTypeSpec(k, l, tuple(latitudes(t)), t)
    raise NoClosure(f"no tangent polygon closes for P({k},{l})")


def propagate_from_apex(l: int, r: float, theta1: float) -> dict:
    """Grow a half-meridian from the apex ring by dual-edge steps.

    The ring edge of layer 1 is dual to the lowest meridian edge on the
    opposite meridian, which yields layers ``k-1`` and ``k``; the ring edge
    of layer ``k-1`` is in turn dual to the meridian edge between layers 1
    and 2. Returns polar angles ``{"1", "k-1", "k", "2"}``; raises
    :class:`~ssdpoly.errors.DegenerateDiscriminant` when a step has no real
    solution.
    """
    step = 2.0 * math.pi / l
    u0, u1 = layer_point(theta1, 0.0), layer_point(theta1, step)
    p, q = phi(u0, u1, r), phi(u1, u0, r)
    hi, lo = sorted((p, q), key=lambda w: -w[2])
    out = {"1": theta1, "k-1": math.acos(hi[2]), "k": math.acos(lo[2])}
    az = math.atan2(hi[1], hi[0])
    w0, w1 = layer_point(out["k-1"], az), layer_point(out["k-1"], az + step)
    p, q = phi(w0, w1, r), phi(w1, w0, r)
    out["2"] = math.acos(min(p[2], q[2]))
    return out


def p5_obstruction_constants() -> dict:
    """Constants showing that no P(k, 5) has a regular triangle at its apex."""
    s5 = math.sqrt(5.0)
    r = math.sqrt((5.0 + 2.0 * s5) / 15.0)
    # the closed form with a minus sign gives about 58.8 degrees; the quoted
    # angle of about 35.34 degrees corresponds to the plus sign
    cos_b = (10.0 + s5) / 15.0
    a = math.degrees(math.acos(r))
    b = math.degrees(math.acos(cos_b))
    c = math.degrees(math.acos(s5 / 5.0))
    ring_chord = math.sqrt((15.0 + 8.0 * s5) / 15.0)
    r2_bound = (45.0 - 8.0 * s5) / 60.0
    # 1 + <p, q> - 2 r^2 for unit p, q at distance ring_chord
    discriminant = 2.0 - ring_chord ** 2 / 2.0 - 2.0 * r * r
    return {
        "r": r,
        "cos_b": cos_b,
        "a_deg": a,
        "b_deg": b,
        "c_deg": c,
        "abc_deg": a + b + c,
        "ring_chord": ring_chord,
        "r2_bound": r2_bound,
        "r2_minus_bound": r * r - r2_bound,
        "discriminant": discriminant,
    }
