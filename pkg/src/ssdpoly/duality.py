"""Polar machinery of an ssd polyhedron: dual planes, the dual-edge map and segment types.

For a vertex ``v`` of the unit sphere the dual plane is ``{p : <p, v> = -r}``;
it meets the sphere in the circle through every vertex of the face ``sigma(v)``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import AntipodalInput, DegenerateDiscriminant, InvalidRadius, NonUnitVertex
from .geom import Plane

UNIT_TOL = 1e-9
# discriminants in [-CLAMP, 0) are treated as tangent circles
DISCRIMINANT_CLAMP = 1e-12
EDGE_RTOL = 1e-8


class SegmentType(enum.Enum):
    EDGE = "Edge"
    BODY_DIAGONAL = "BodyDiagonal"
    FACE_DIAGONAL = "FaceDiagonal"
    FACE_DIAGONAL_THROUGH_CENTER = "FaceDiagonalThroughCenter"


def _check_radius(r):
    if not (0.0 < r < 1.0) or not math.isfinite(r):
        raise InvalidRadius(f"insphere radius must lie in (0, 1), got {r!r}")


def _check_unit(v, name="vertex"):
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise NonUnitVertex(f"{name} {v} is not on the unit sphere")
    return v


def dual_plane(v, r: float) -> Plane:
    """Plane orthogonal to ``v`` touching the insphere on the far side."""
    _check_radius(r)
    v = _check_unit(v)
    return Plane(v / np.linalg.norm(v), -r)


def dual_circle(v, r: float):
    """``(center, radius)`` of the dual plane's intersection with the unit sphere."""
    _check_radius(r)
    v = _check_unit(v)
    return -r * v, math.sqrt(1.0 - r * r)


def phi(a, b, r: float) -> np.ndarray:
    """Dual-edge map: the endpoint of ``sigma(ab)`` seen on the ``a x b`` side.

    ``phi(a, b, r)`` and ``phi(b, a, r)`` are the two points where the dual
    circles of ``a`` and ``b`` cross. Raises :class:`DegenerateDiscriminant`
    when the circles miss each other.
    """
    _check_radius(r)
    a = _check_unit(a, "a")
    b = _check_unit(b, "b")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    # 1 + <a,b> and 1 - <a,b> from |a + b| and |a - b| avoid cancellation
    # when a and b are nearly equal or nearly antipodal
    plus = float(np.linalg.norm(a + b))
    diff = a - b
    minus2 = float(diff @ diff)
    den = 0.5 * plus * plus
    if den <= 1e-12:
        raise AntipodalInput("a and b are antipodal")
    if minus2 <= 2e-15:
        raise AntipodalInput("a and b coincide")
    disc = 0.5 * (plus - 2.0 * r) * (plus + 2.0 * r)
    if disc < 0.0:
        if disc < -DISCRIMINANT_CLAMP:
            raise DegenerateDiscriminant(
                f"dual circles do not intersect (1+<a,b>-2r^2 = {disc:.3e})", disc
            )
        disc = 0.0
    scale = math.sqrt(disc / (0.5 * minus2))
    return (scale * np.cross(a, b) - r * (a + b)) / den


def parameter_alpha(r: float) -> float:
    """Common length of the principal diagonals, ``sqrt(2 + 2r)``."""
    _check_radius(r)
    return math.sqrt(2.0 + 2.0 * r)


def alpha_lower_bound(dim: int = 3) -> float:
    return math.sqrt(2.0 * (dim + 1) / dim)


def dual_line_distance(a, b, r: float) -> float:
    """Distance from the origin to the line where the dual planes of ``a`` and ``b`` meet.

    Solved as a minimum-norm linear problem, independent of :func:`phi`.
    """
    A = np.vstack([np.asarray(a, float), np.asarray(b, float)])
    p, *_ = np.linalg.lstsq(A, np.array([-r, -r]), rcond=None)
    return float(np.linalg.norm(p))


def classify_segment(u_idx: int, v_idx: int, poly, tol: float = 1e-9,
                     match_tol: float = 1e-6) -> SegmentType:
    """Type of the segment joining two vertices of ``poly``.

    A segment whose midpoint is closer to the centre than ``r`` crosses the
    interior. Otherwise the dual circles of its endpoints meet in ``x`` and
    ``y``; every vertex among them sits at principal-diagonal distance from
    both endpoints and contains the segment in its dual face. Two distinct
    such vertices make an edge, one makes a face diagonal (through the face
    centre when the circles are tangent, ``x == y``), none means no face
    holds the segment.
    """
    if u_idx == v_idx:
        raise ValueError("segment endpoints must differ")
    verts = np.asarray(poly.vertices, dtype=float)
    r = poly.r
    u, v = verts[u_idx], verts[v_idx]
    mid = float(np.linalg.norm(u + v)) / 2.0
    if mid < r - tol:
        return SegmentType.BODY_DIAGONAL
    alpha = parameter_alpha(r)

    def is_vertex(p):
        if np.min(np.linalg.norm(verts - p, axis=1)) > match_tol:
            return False
        return abs(np.linalg.norm(p - u) - alpha) <= EDGE_RTOL * alpha

    if mid <= r + tol:
        # tangent dual circles: both crossings collapse onto one point
        p = -(u + v) / np.linalg.norm(u + v)
        return (SegmentType.FACE_DIAGONAL_THROUGH_CENTER if is_vertex(p)
                else SegmentType.BODY_DIAGONAL)
    hits = int(is_vertex(phi(u, v, r))) + int(is_vertex(phi(v, u, r)))
    if hits == 2:
        return SegmentType.EDGE
    if hits == 1:
        return SegmentType.FACE_DIAGONAL
    return SegmentType.BODY_DIAGONAL
