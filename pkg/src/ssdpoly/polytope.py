"""Polytope data model, 3D convex hull with coplanar merging, face-vector accounting."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateInput
from .geom import fit_plane

HULL_COPLANAR_TOL = 1e-7
DEDUP_TOL = 1e-9


class FaceVector(dict):
    """``{l: count}`` of l-gonal faces; missing sizes count as zero."""

    def __missing__(self, key):
        return 0

    @property
    def n_faces(self) -> int:
        return sum(self.values())

    def euler_weight(self) -> int:
        """``sum (4 - l) * alpha_l``; equals 4 for every ssd candidate."""
        return sum((4 - l) * c for l, c in self.items())

    def degree_sum(self) -> int:
        return sum(l * c for l, c in self.items())

    def key(self) -> tuple:
        return tuple(sorted((l, c) for l, c in self.items() if c))

    def __repr__(self):
        inner = ", ".join(f"a{l}={c}" for l, c in sorted(self.items()) if c)
        return f"FaceVector({inner})"


@dataclass(frozen=True, eq=False)
class Polytope:
    """Vertices on the unit sphere plus ordered face cycles.

    Faces are vertex-index tuples, counter-clockwise seen from outside and
    rotated to start at their smallest index. ``sigma[i]`` is the index of
    the face dual to vertex ``i``.
    """

    vertices: np.ndarray
    faces: tuple
    sigma: Optional[tuple] = None
    r: Optional[float] = None
    alpha: Optional[float] = None
    labels: Optional[tuple] = None
    provenance: str = ""

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float).reshape(-1, 3)
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", tuple(tuple(int(i) for i in f) for f in self.faces))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        if self.r is not None:
            object.__setattr__(self, "r", float(self.r))
            if self.alpha is None:
                object.__setattr__(self, "alpha", math.sqrt(2.0 + 2.0 * self.r))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list:
        seen = set()
        for f in self.faces:
            for a, b in zip(f, f[1:] + f[:1]):
                seen.add((min(a, b), max(a, b)))
        return sorted(seen)

    def face_planes(self) -> list:
        """Least-squares plane of each face, normal pointing outward."""
        planes = []
        for f in self.faces:
            pts = self.vertices[list(f)]
            pl = fit_plane(pts)
            # faces are stored counter-clockwise from outside
            winding = np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0]).sum(axis=0)
            if winding @ pl.normal < 0:
                pl = pl.flipped()
            planes.append(pl)
        return planes

    def face_named(self, names: str) -> Optional[int]:
        """Index of the face whose vertex labels are ``names`` (any rotation or direction)."""
        if self.labels is None:
            raise ValueError("polytope has no vertex labels")
        target = set(names)
        for i, f in enumerate(self.faces):
            if len(f) == len(names) and {self.labels[j] for j in f} == target:
                cyc = "".join(self.labels[j] for j in f)
                doubled = cyc + cyc
                if names in doubled or names[::-1] in doubled:
                    return i
        return None

    def with_(self, **changes) -> "Polytope":
        return replace(self, **changes)


def dedup_points(points, tol: float = DEDUP_TOL):
    """Drop points within ``tol`` of an earlier one; returns (kept, index map)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    kept, mapping = [], []
    for p in pts:
        for j, q in enumerate(kept):
            if np.linalg.norm(p - q) <= tol:
                mapping.append(j)
                break
        else:
            mapping.append(len(kept))
            kept.append(p)
    return np.array(kept).reshape(-1, 3), mapping


def order_cycle(points, idx, outward) -> tuple:
    """Sort the face vertices ``idx`` counter-clockwise about ``outward``; smallest index first."""
    pts = np.asarray(points)[list(idx)]
    c = pts.mean(axis=0)
    n = np.asarray(outward, dtype=float)
    e1 = pts[0] - c
    e1 = e1 - (e1 @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
    cyc = [idx[i] for i in np.argsort(ang, kind="stable")]
    k = cyc.index(min(cyc))
    return tuple(cyc[k:] + cyc[:k])


def convex_hull3(points, coplanar_tol: float = HULL_COPLANAR_TOL,
                 dedup_tol: float = DEDUP_TOL) -> Polytope:
    """Convex hull with maximal planar faces.

    Near-duplicate points are merged first. Qhull's triangles are then
    grouped into faces: neighbouring triangles join when each lies within
    ``coplanar_tol`` of the other's plane, and every point within
    ``coplanar_tol`` of a merged plane becomes a vertex of that face.
    Only points that end up on some face are kept as vertices.
    """
    pts, _ = dedup_points(points, dedup_tol)
    if len(pts) < 4:
        raise DegenerateInput("need at least four distinct points")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"points are affinely dependent: {exc}") from None

    nsimp = len(hull.simplices)
    parent = list(range(nsimp))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    eq = hull.equations
    for i in range(nsimp):
        for j in hull.neighbors[i]:
            if j < i:
                continue
            oi = [v for v in hull.simplices[j] if v not in hull.simplices[i]]
            oj = [v for v in hull.simplices[i] if v not in hull.simplices[j]]
            di = abs(eq[i, :3] @ pts[oi[0]] + eq[i, 3])
            dj = abs(eq[j, :3] @ pts[oj[0]] + eq[j, 3])
            if di <= coplanar_tol and dj <= coplanar_tol:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(nsimp):
        groups.setdefault(find(i), set()).update(int(v) for v in hull.simplices[i])

    inner = pts[hull.vertices].mean(axis=0)
    raw_faces = []
    seen = set()
    for members in groups.values():
        plane = fit_plane(pts[sorted(members)])
        if plane.normal @ inner - plane.offset > 0:
            plane = plane.flipped()
        on = np.flatnonzero(np.abs(pts @ plane.normal - plane.offset) <= coplanar_tol)
        key = frozenset(int(i) for i in on)
        if key in seen or len(key) < 3:
            continue
        seen.add(key)
        raw_faces.append((sorted(key), plane.normal))

    used = sorted({i for f, _ in raw_faces for i in f})
    remap = {old: new for new, old in enumerate(used)}
    verts = pts[used]
    faces = [order_cycle(verts, [remap[i] for i in f], n) for f, n in raw_faces]
    faces.sort()
    return Polytope(verts, tuple(faces))


def face_vector(poly: Polytope) -> FaceVector:
    return FaceVector(Counter(len(f) for f in poly.faces))


@dataclass(frozen=True)
class EulerCheck:
    passed: bool
    n_vertices: int
    n_edges: int
    n_faces: int

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces


def euler_check(poly: Polytope) -> EulerCheck:
    v, e, f = poly.n_vertices, len(poly.edges), len(poly.faces)
    ok = (f + v - e == 2) and f == v and e == 2 * (v - 1)
    return EulerCheck(ok, v, e, f)


def distance_profile(vertices) -> np.ndarray:
    """Sorted multiset of pairwise vertex distances (a congruence invariant)."""
    v = np.asarray(vertices, dtype=float)
    d = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)
    return np.sort(d[np.triu_indices(len(v), 1)])


def congruent(a, b, tol: float = 1e-8) -> bool:
    """True when some isometry fixing the origin (reflections allowed) maps vertex set ``a`` onto ``b``."""
    return align(a, b, tol) is not None


def align(a, b, tol: float = 1e-8):
    """Orthogonal matrix ``Q`` with ``a @ Q.T`` equal to ``b`` as point sets, or ``None``."""
    A = np.asarray(a.vertices if isinstance(a, Polytope) else a, dtype=float)
    B = np.asarray(b.vertices if isinstance(b, Polytope) else b, dtype=float)
    if A.shape != B.shape:
        return None
    pa, pb = distance_profile(A), distance_profile(B)
    if np.max(np.abs(pa - pb)) > tol:
        return None
    # anchor on two vertices of A spanning a plane with the origin
    i0 = 0
    i1 = int(np.argmax(np.linalg.norm(np.cross(A[i0], A), axis=1)))
    basis_a = _frame(A[i0], A[i1])
    for j0 in range(len(B)):
        if abs(np.linalg.norm(B[j0]) - np.linalg.norm(A[i0])) > tol:
            continue
        for j1 in range(len(B)):
            if j1 == j0 or abs(np.linalg.norm(B[j1] - B[j0]) - np.linalg.norm(A[i1] - A[i0])) > tol:
                continue
            if abs(B[j0] @ B[j1] - A[i0] @ A[i1]) > tol:
                continue
            fb = _frame(B[j0], B[j1])
            for flip in (1.0, -1.0):
                fb2 = fb.copy()
                fb2[2] *= flip
                Q = fb2.T @ basis_a
                if _sets_match(A @ Q.T, B, tol):
                    return Q
    return None


def _frame(p, q):
    e1 = p / np.linalg.norm(p)
    e2 = q - (q @ e1) * e1
    e2 /= np.linalg.norm(e2)
    return np.array([e1, e2, np.cross(e1, e2)])


def _sets_match(X, Y, tol):
    d = np.linalg.norm(X[:, None, :] - Y[None, :, :], axis=-1)
    return bool(np.all(d.min(axis=1) <= tol) and np.all(d.min(axis=0) <= tol))
