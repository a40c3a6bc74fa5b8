"""Small 3D kernel: vectors are plain ``numpy`` arrays of shape (3,)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollinearInput, InvalidParams, NotConcyclic, NotCoplanar

COPLANAR_TOL = 1e-9


def vec3(x, y=None, z=None) -> np.ndarray:
    """Build a finite float64 3-vector from three numbers or one sequence."""
    v = np.asarray([x, y, z] if y is not None else x, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise InvalidParams(f"non-finite vector {v}")
    return v


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InvalidParams("cannot normalise the zero vector")
    return v / n


@dataclass(frozen=True, eq=False)
class Plane:
    """Oriented plane ``{p : <p, normal> = offset}`` with unit ``normal``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(3)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise InvalidParams("plane normal must be a unit vector")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def through(cls, p0, p1, p2) -> "Plane":
        n = np.cross(np.subtract(p1, p0), np.subtract(p2, p0))
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise CollinearInput("three collinear points do not span a plane")
        n = n / norm
        return cls(n, float(n @ np.asarray(p0, dtype=float)))

    def flipped(self) -> "Plane":
        return Plane(-self.normal, -self.offset)


def signed_distance(plane: Plane, p) -> float:
    return float(np.asarray(p, dtype=float) @ plane.normal - plane.offset)


def fit_plane(points) -> Plane:
    """Least-squares plane through a point cloud (smallest singular direction)."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid)
    n = vt[-1]
    return Plane(n / np.linalg.norm(n), float(n @ centroid) / np.linalg.norm(n))


def circumcircle(points, tol: float = COPLANAR_TOL):
    """Circle through three or more coplanar points.

    The circle is fixed by the first three non-collinear points (in input
    order) and every other point is checked against it.

    Returns ``(center, radius, plane)``; the plane normal is oriented by the
    right-hand rule of that first triple.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 3:
        raise InvalidParams("circumcircle needs at least three 3D points")
    triple = _first_noncollinear(pts, tol)
    if triple is None:
        raise CollinearInput("all points are collinear")
    p0, p1, p2 = (pts[i] for i in triple)
    plane = Plane.through(p0, p1, p2)
    dev = max(abs(signed_distance(plane, p)) for p in pts)
    if dev > tol:
        raise NotCoplanar(f"points deviate {dev:.3e} from a common plane", dev)

    # center = p0 + s*u + t*v solved in the plane spanned by u, v
    u, v = p1 - p0, p2 - p0
    uu, vv, uv = u @ u, v @ v, u @ v
    det = 2.0 * (uu * vv - uv * uv)
    s = (vv * (uu - uv)) / det
    t = (uu * (vv - uv)) / det
    center = p0 + s * u + t * v
    radius = float(np.linalg.norm(p0 - center))
    spread = float(np.max(np.abs(np.linalg.norm(pts - center, axis=1) - radius)))
    if spread > tol:
        raise NotConcyclic(f"points deviate {spread:.3e} from the circle", spread)
    return center, radius, plane


def _first_noncollinear(pts, tol):
    n = len(pts)
    scale = max(1.0, float(np.max(np.abs(pts))))
    for i in range(n):
        for j in range(i + 1, n):
            d = pts[j] - pts[i]
            if np.linalg.norm(d) <= tol:
                continue
            for k in range(j + 1, n):
                area = np.linalg.norm(np.cross(d, pts[k] - pts[i]))
                if area > tol * scale * np.linalg.norm(d):
                    return i, j, k
    return None


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about ``axis`` by ``angle`` radians."""
    k = unit(axis)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * (kx @ kx)
