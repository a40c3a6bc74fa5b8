"""Pentagon-seeded search for a non-L-type ssd polyhedron.

A pentagon on the circle ``z = -r`` that is symmetric about the ``xz`` plane
is fixed by two polar angles ``kappa`` (vertices B, E) and ``lambda``
(vertices C, D). Repeated dual-edge steps grow the vertices F..V from it;
the pentagon closes into a polyhedron when three residuals vanish:
``|f - x|`` and the distances of V from the planes NST and FJT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .duality import phi
from .errors import DegenerateDiscriminant, InvalidParams, NoConvergence, SsdError, VerificationFailed
from .polytope import Polytope, convex_hull3
from .verify import verify_ssd

# converged parameters of the 22-vertex polyhedron (degrees, degrees, radius)
KAPPA_23 = 45.18708115925679
LAMBDA_23 = 137.9708898008123
R_23 = 0.801257067121262

# parameters reported for the 8-vertex Katz-Memoli-Wang polyhedron
KAPPA_KMW = 25.73186609765885
LAMBDA_KMW = 167.1340669511706
R_KMW = 0.493643648472824

# below this cross-product norm the three points do not span a plane
MIN_NORMAL = 1e-12

CHAIN_NAMES = ("f", "g", "h", "i", "j", "k", "l", "m", "n", "p",
               "q", "rv", "s", "t", "u", "v", "x", "y")

# (name, first, second): name = phi(first, second); order respects dependencies
CHAIN_STEPS = (
    ("f", "d", "c"), ("g", "e", "d"), ("h", "a", "e"), ("i", "b", "a"), ("j", "c", "b"),
    ("k", "h", "i"), ("l", "i", "j"), ("m", "j", "f"), ("n", "f", "g"), ("p", "g", "h"),
    ("q", "p", "n"), ("rv", "k", "p"), ("s", "l", "k"), ("t", "m", "l"), ("y", "m", "n"),
    ("u", "s", "t"), ("v", "q", "rv"), ("x", "rv", "s"),
)

# vertex labels of the assembled polyhedron in table order; X coincides with F
SSD23_LABELS = ("Z", "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L",
                "M", "N", "P", "Q", "R", "S", "T", "U", "V")


def pentagon_vertices(kappa: float, lam: float, r: float):
    """Base pentagon ``a..e`` and apex ``z`` for angles in radians."""
    if not (0.0 < kappa < lam < math.pi):
        raise InvalidParams("need 0 < kappa < lambda < pi")
    if not (0.0 < r < 1.0):
        raise InvalidParams("need 0 < r < 1")
    rho = math.sqrt(1.0 - r * r)
    ck, sk, cl, sl = math.cos(kappa), math.sin(kappa), math.cos(lam), math.sin(lam)
    a = np.array([rho, 0.0, -r])
    b = np.array([rho * ck, rho * sk, -r])
    c = np.array([rho * cl, rho * sl, -r])
    d = np.array([rho * cl, -rho * sl, -r])
    e = np.array([rho * ck, -rho * sk, -r])
    z = np.array([0.0, 0.0, 1.0])
    return a, b, c, d, e, z


def build_chain(kappa: float, lam: float, r: float) -> dict:
    """All points derived from the pentagon, keyed by lower-case name (``rv`` is R)."""
    a, b, c, d, e, _ = pentagon_vertices(kappa, lam, r)
    pts = {"a": a, "b": b, "c": c, "d": d, "e": e}
    for name, p, q in CHAIN_STEPS:
        try:
            pts[name] = phi(pts[p], pts[q], r)
        except DegenerateDiscriminant as exc:
            exc.where = name
            raise DegenerateDiscriminant(f"chain point {name}: {exc}", exc.discriminant, name) from None
    return {k: pts[k] for k in CHAIN_NAMES}


def _plane_distance(p0, p1, p2, q) -> float:
    n = np.cross(p1 - p0, p2 - p0)
    if not np.linalg.norm(n) > MIN_NORMAL:
        return math.inf
    return abs(float(n @ (q - p0))) / float(np.linalg.norm(n))


@dataclass(frozen=True)
class ResidualTriple:
    e1: float
    e2: float
    e3: float

    @property
    def error(self) -> float:
        return max(self.e1, self.e2, self.e3)


def residuals(kappa: float, lam: float, r: float) -> ResidualTriple:
    """Closure residuals; an infeasible parameter point scores ``inf``."""
    try:
        ch = build_chain(kappa, lam, r)
    except (DegenerateDiscriminant, SsdError):
        return ResidualTriple(math.inf, math.inf, math.inf)
    e1 = float(np.linalg.norm(ch["f"] - ch["x"]))
    e2 = _plane_distance(ch["n"], ch["s"], ch["t"], ch["v"])
    e3 = _plane_distance(ch["t"], ch["f"], ch["j"], ch["v"])
    vals = [e if math.isfinite(e) else math.inf for e in (e1, e2, e3)]
    return ResidualTriple(*vals)


@dataclass
class SearchParams:
    """Grid-refinement settings; angles in radians."""

    kappa: float = math.radians(45.0)
    lam: float = math.radians(135.0)
    r: float = 0.8
    delta0: float = 0.1
    n: int = 200
    shrink: float = 1.0 / 3.0
    tol: float = 1e-15
    max_steps: int = 40

    def __post_init__(self):
        if not (0.0 < self.kappa < self.lam < math.pi):
            raise InvalidParams("need 0 < kappa < lambda < pi")
        if not (0.0 < self.r < 1.0):
            raise InvalidParams("need 0 < r < 1")
        if self.n < 2 or not (0.0 < self.shrink < 1.0) or self.delta0 <= 0 or self.max_steps < 1:
            raise InvalidParams("need n >= 2, 0 < shrink < 1, delta0 > 0, max_steps >= 1")


@dataclass(frozen=True)
class TraceRow:
    step: int
    kappa: float
    lam: float
    r: float
    error: float
    delta: float

    @property
    def kappa_deg(self) -> float:
        return math.degrees(self.kappa)

    @property
    def lam_deg(self) -> float:
        return math.degrees(self.lam)


@dataclass
class SearchResult:
    kappa: float
    lam: float
    r: float
    error: float
    steps: int
    trace: list = field(default_factory=list)

    @property
    def kappa_deg(self) -> float:
        return math.degrees(self.kappa)

    @property
    def lam_deg(self) -> float:
        return math.degrees(self.lam)


def lattice_axis(center: float, delta: float, n: int) -> np.ndarray:
    """``n + 1`` samples spanning ``[center - delta, center + delta]``; the centre is exact for even ``n``."""
    i = np.arange(n + 1, dtype=float)
    return center + delta * ((2.0 * i - n) / n)


def lattice_errors(kappas, lams, rs) -> np.ndarray:
    """Error ``max(e1, e2, e3)`` on the tensor grid ``kappas x lams x rs``."""
    from ._kernel import lattice_errors as impl

    return impl(np.ascontiguousarray(kappas, dtype=float),
                np.ascontiguousarray(lams, dtype=float),
                np.ascontiguousarray(rs, dtype=float))


def grid_refine(params: SearchParams, evaluate=lattice_errors, progress=None) -> SearchResult:
    """Shrinking-box lattice search for a zero of the closure residuals.

    Each step samples ``(n+1)^3`` points around the current centre, moves to
    the lowest error (first in C order on ties) and shrinks the box by
    ``shrink``. Raises :class:`NoConvergence` carrying the best point when
    ``max_steps`` pass without reaching ``tol``.
    """
    ck, cl, cr = params.kappa, params.lam, params.r
    best = math.inf
    delta = params.delta0
    trace = []
    for step in range(1, params.max_steps + 1):
        ks = lattice_axis(ck, delta, params.n)
        ls = lattice_axis(cl, delta, params.n)
        rs = lattice_axis(cr, delta, params.n)
        err = evaluate(ks, ls, rs)
        flat = int(np.argmin(err))
        e = float(err.flat[flat])
        if e < best:
            i, j, k = np.unravel_index(flat, err.shape)
            ck, cl, cr, best = float(ks[i]), float(ls[j]), float(rs[k]), e
        row = TraceRow(step, ck, cl, cr, best, delta)
        trace.append(row)
        if progress is not None:
            progress(row)
        if best <= params.tol:
            return SearchResult(ck, cl, cr, best, step, trace)
        delta *= params.shrink
    result = SearchResult(ck, cl, cr, best, params.max_steps, trace)
    raise NoConvergence(
        f"no point with error <= {params.tol:g} after {params.max_steps} steps "
        f"(best {best:.3e})", result)


def refine_box(evaluate, center, delta, n: int = 8, shrink: float = 0.5,
               tol: float = 1e-12, max_steps: int = 40):
    """Shrinking-box lattice search in any number of dimensions.

    ``evaluate`` receives a list of 1-D sample arrays (one per coordinate)
    and returns the error on their tensor grid. Returns ``(x, error, steps)``;
    raises :class:`NoConvergence` with ``best = (x, error)`` otherwise.
    """
    x = np.array(center, dtype=float)
    delta = np.broadcast_to(np.asarray(delta, dtype=float), x.shape).copy()
    best = math.inf
    for step in range(1, max_steps + 1):
        axes = [lattice_axis(c, d, n) for c, d in zip(x, delta)]
        err = np.asarray(evaluate(axes), dtype=float)
        flat = int(np.argmin(err))
        e = float(err.flat[flat])
        if e < best:
            idx = np.unravel_index(flat, err.shape)
            x = np.array([a[i] for a, i in zip(axes, idx)])
            best = e
        if best <= tol:
            return x, best, step
        delta *= shrink
    raise NoConvergence(f"box refinement stalled at error {best:.3e}", (x, best))


def format_trace(trace) -> str:
    lines = [f"{'step':>4}  {'kappa_deg':>20}  {'lambda_deg':>20}  {'r':>18}  {'error':>10}"]
    for t in trace:
        lines.append(f"{t.step:4d}  {t.kappa_deg:20.14f}  {t.lam_deg:20.13f}  {t.r:18.15f}  {t.error:10.3e}")
    return "\n".join(lines)


def ssd23_points(kappa: float, lam: float, r: float) -> dict:
    """Labelled vertices Z, A..V of the closed polyhedron (X is returned separately under ``X``)."""
    a, b, c, d, e, z = pentagon_vertices(kappa, lam, r)
    ch = build_chain(kappa, lam, r)
    pts = {"Z": z, "A": a, "B": b, "C": c, "D": d, "E": e}
    for lab in SSD23_LABELS[6:]:
        pts[lab] = ch["rv" if lab == "R" else lab.lower()]
    pts["X"] = ch["x"]
    return pts


def assemble_ssd23(kappa: float, lam: float, r: float, tol: float = 1e-9) -> Polytope:
    """Close the pentagon chain into a verified 22-vertex polytope (X merged into F)."""
    res = residuals(kappa, lam, r)
    if not res.error <= tol:
        raise VerificationFailed(
            f"closure residual {res.error:.3e} exceeds {tol:g}; parameters do not close")
    pts = ssd23_points(kappa, lam, r)
    verts = np.array([pts[lab] for lab in SSD23_LABELS])
    hull = convex_hull3(verts)
    if hull.n_vertices != len(SSD23_LABELS):
        raise VerificationFailed(f"hull has {hull.n_vertices} vertices, expected 22")
    # hull keeps input order when every point is a vertex
    poly = hull.with_(labels=SSD23_LABELS, r=r, alpha=None,
                      provenance=f"ssd23 kappa={math.degrees(kappa)!r}deg "
                                 f"lambda={math.degrees(lam)!r}deg r={r!r}")
    report = verify_ssd(poly, tol)
    if not report.passed:
        raise VerificationFailed("assembled polytope is not strongly self-dual", report)
    return poly.with_(sigma=report.sigma)


def kmw8(tol: float = 1e-8, assume_closure: float = 1e-9) -> Polytope:
    """The 8-vertex polyhedron with a pentagonal face, grown from its pentagon."""
    from .reconstruct import reconstruct_from_face

    a, b, c, d, e, _ = pentagon_vertices(math.radians(KAPPA_KMW), math.radians(LAMBDA_KMW), R_KMW)
    try:
        poly = reconstruct_from_face([a, b, c, d, e], tol=min(tol, 1e-9), assume_closure=assume_closure)
    except SsdError as exc:
        raise VerificationFailed(f"pentagon did not grow into an ssd polyhedron: {exc}") from None
    report = verify_ssd(poly, tol)
    if not report.passed or poly.n_vertices != 8:
        raise VerificationFailed("grown polyhedron fails the ssd check", report)
    return poly.with_(provenance=f"kmw8 kappa={KAPPA_KMW!r}deg lambda={LAMBDA_KMW!r}deg r={R_KMW!r}")
