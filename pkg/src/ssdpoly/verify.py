"""Certification of strong self-duality with quantitative deviations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .duality import alpha_lower_bound
from .errors import NoSigmaCandidate, NonConvex
from .polytope import Polytope

SIGMA_ANGLE_TOL = 1e-6


def _angles(normals, v):
    # atan2 keeps full precision near zero, unlike arccos
    return np.arctan2(np.linalg.norm(np.cross(normals, v), axis=-1), normals @ v)


@dataclass
class SsdReport:
    r: float
    alpha: float
    inscribed_dev: float
    tangency_dev: float
    sigma_valid: bool
    orthogonality_dev: float
    diagonal_dev: float
    product_dev: float
    alpha_bound_ok: bool
    tol: float
    sigma: tuple = ()
    problems: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        devs = (self.inscribed_dev, self.tangency_dev, self.orthogonality_dev,
                self.diagonal_dev, self.product_dev)
        return self.sigma_valid and self.alpha_bound_ok and all(d <= self.tol for d in devs)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_text(self) -> str:
        lines = [
            f"status            : {'PASSED' if self.passed else 'FAILED'} (tol {self.tol:.1e})",
            f"r                 : {self.r:.15f}",
            f"alpha             : {self.alpha:.15f}",
            f"inscribed_dev     : {self.inscribed_dev:.3e}",
            f"tangency_dev      : {self.tangency_dev:.3e}",
            f"sigma_valid       : {self.sigma_valid}",
            f"orthogonality_dev : {self.orthogonality_dev:.3e} rad",
            f"diagonal_dev      : {self.diagonal_dev:.3e}",
            f"product_dev       : {self.product_dev:.3e}",
            f"alpha >= sqrt(8/3): {self.alpha_bound_ok}",
        ]
        lines += [f"problem           : {p}" for p in self.problems]
        return "\n".join(lines)


def infer_sigma(poly: Polytope, angle_tol: float = SIGMA_ANGLE_TOL) -> tuple:
    """Match each vertex ``v`` to the face whose outward normal is ``-v``."""
    normals = np.array([p.normal for p in poly.face_planes()])
    units = poly.vertices / np.linalg.norm(poly.vertices, axis=1)[:, None]
    sigma = []
    for i, v in enumerate(units):
        ang = _angles(normals, -v)
        j = int(np.argmin(ang))
        if ang[j] > angle_tol:
            raise NoSigmaCandidate(
                f"vertex {i} has no face orthogonal to it (closest {ang[j]:.3e} rad)")
        sigma.append(j)
    return tuple(sigma)


def verify_ssd(poly: Polytope, tol: float = 1e-9) -> SsdReport:
    """Check every defining property of an ssd polyhedron.

    Raises :class:`NoSigmaCandidate` when ``poly`` has no sigma and none can
    be inferred, :class:`NonConvex` when a vertex lies outside a face plane.
    """
    verts = poly.vertices
    nv = len(verts)
    if nv < 4 or len(poly.faces) < 4:
        raise NonConvex("an ssd polyhedron needs at least four vertices and faces")
    planes = poly.face_planes()
    offsets = np.array([p.offset for p in planes])
    normals = np.array([p.normal for p in planes])
    outside = (verts @ normals.T - offsets).max()
    if outside > max(tol, 1e-12) * 1e3:
        raise NonConvex(f"a vertex lies {outside:.3e} outside a face plane")

    sigma = poly.sigma if poly.sigma is not None else infer_sigma(poly)
    r = poly.r if poly.r is not None else float(offsets.mean())
    alpha = math.sqrt(2.0 + 2.0 * r)
    problems = []

    inscribed = float(np.max(np.abs(np.linalg.norm(verts, axis=1) - 1.0)))
    tangency = float(np.max(np.abs(offsets - r)))

    sigma_valid = len(sigma) == nv and len(poly.faces) == nv and sorted(sigma) == list(range(nv))
    if not sigma_valid:
        problems.append("sigma is not a bijection between vertices and faces")
    face_sets = [set(f) for f in poly.faces]
    ortho = 0.0
    diag = 0.0
    for i in range(min(nv, len(sigma))):
        v = verts[i] / np.linalg.norm(verts[i])
        fi = sigma[i]
        ortho = max(ortho, float(_angles(normals[fi], -v)))
        if i in face_sets[fi]:
            sigma_valid = False
            problems.append(f"vertex {i} lies on its own dual face")
        for j in face_sets[fi]:
            diag = max(diag, abs(float(np.linalg.norm(verts[i] - verts[j])) - alpha))
    if sigma_valid:
        for i in range(nv):
            for j in face_sets[sigma[i]]:
                if i not in face_sets[sigma[j]]:
                    sigma_valid = False
                    problems.append(f"incidence not symmetric for vertices {i}, {j}")

    # vertex/face pairs: |v| * d_sigma(v); edge/dual-edge pairs via chord midpoints
    product = max(abs(float(np.linalg.norm(verts[i])) * offsets[sigma[i]] - r)
                  for i in range(min(nv, len(sigma)))) if sigma else math.inf
    if sigma_valid:
        for a, b in poly.edges:
            dual = face_sets[sigma[a]] & face_sets[sigma[b]]
            if len(dual) != 2:
                sigma_valid = False
                problems.append(f"edge ({a},{b}) has no dual edge")
                continue
            x, y = sorted(dual)
            d_edge = np.linalg.norm(verts[a] + verts[b]) / 2.0
            d_dual = np.linalg.norm(verts[x] + verts[y]) / 2.0
            product = max(product, abs(float(d_edge * d_dual) - r))

    return SsdReport(
        r=r, alpha=alpha, inscribed_dev=inscribed, tangency_dev=tangency,
        sigma_valid=sigma_valid, orthogonality_dev=ortho, diagonal_dev=diag,
        product_dev=product, alpha_bound_ok=alpha >= alpha_lower_bound(3) - tol,
        tol=tol, sigma=tuple(sigma), problems=problems,
    )


def polar_vertices(poly: Polytope) -> np.ndarray:
    """Vertices of the polar body: ``n / d`` for every face plane ``<p, n> = d``."""
    return np.array([p.normal / p.offset for p in poly.face_planes()])


def homothety_check(poly: Polytope, tol: float = 1e-8) -> bool:
    """Scaled by ``1/sqrt(r)`` the polytope must equal minus its own polar body."""
    planes = poly.face_planes()
    r = poly.r if poly.r is not None else float(np.mean([p.offset for p in planes]))
    if len(planes) != poly.n_vertices or not 0.0 < r < 1.0:
        return False
    scaled = poly.vertices / math.sqrt(r)
    # polar of (P / s) is s * polar(P)
    polar = polar_vertices(poly) * math.sqrt(r)
    d = np.linalg.norm(polar[:, None, :] + scaled[None, :, :], axis=-1)
    return bool(np.all(d.min(axis=0) <= tol) and np.all(d.min(axis=1) <= tol))
