"""Grow an ssd polyhedron from a single face.

The face fixes the insphere radius ``r`` (distance of its plane from the
origin) and the vertex dual to it. From there every new vertex is a second
intersection point of two dual circles. Duals of edges that are certainly
edges are added outright. Everything else is speculative and explored by a
depth-first search that branches on "this intersection point is a vertex"
versus "it is not".

Pruning rests on one fact about inscribed ssd polytopes: the sphere meets
the polytope only in its vertices, and every face plane is a dual plane.
So no vertex may lie beyond the dual plane of another, and a point that is
not a vertex lies beyond at least one of them.

When the known points leave no admissible intersection at all, the search
tries rotational symmetries about the axis of a known vertex (the layered
structure of an L-type polytope), taking the rotation angle from pairs of
known points on a common parallel. A branch is accepted only when the hull
of its points passes :func:`verify_ssd`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .duality import phi
from .errors import (
    AntipodalInput,
    DegenerateDiscriminant,
    DegenerateInput,
    NonUnitVertex,
    NotConcyclic,
    NotCoplanar,
    OpenChain,
    Overflow,
    SsdError,
    VerificationFailed,
)
from .geom import circumcircle, rotation_matrix
from .polytope import Polytope, convex_hull3
from .verify import verify_ssd

MERGE_TOL = 1e-9
UNIT_TOL = 1e-9
DEFAULT_MAX_NODES = 600


@dataclass(frozen=True)
class DualEdge:
    """An edge (by point ids) and its dual, ``dual = (phi(u, v), phi(v, u))``."""

    edge: tuple
    dual: tuple


@dataclass
class ReconstructionState:
    """Bookkeeping shared by every branch of one reconstruction.

    ``points`` is a registry of every point ever produced, deduplicated at
    ``merge_tol``; the other containers refer to points by registry id.
    ``vertices``, ``edges`` and ``diagonals`` describe the accepted branch
    once the search has finished (or the seed before it starts).
    """

    r: float
    merge_tol: float = MERGE_TOL
    points: list = field(default_factory=list)
    vertices: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)
    diagonals: set = field(default_factory=set)
    frontier: list = field(default_factory=list)
    _cells: dict = field(default_factory=dict, repr=False)
    _pairs: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._cell = max(10.0 * self.merge_tol, 1e-7)

    def _key(self, p):
        return tuple(int(math.floor(c / self._cell)) for c in p)

    def add_point(self, p) -> int:
        """Registry id of ``p``, reusing an existing point within ``merge_tol``."""
        p = np.asarray(p, dtype=float)
        p = p / np.linalg.norm(p)
        kx, ky, kz = self._key(p)
        for dx, dy, dz in itertools.product((-1, 0, 1), repeat=3):
            for j in self._cells.get((kx + dx, ky + dy, kz + dz), ()):
                if np.linalg.norm(self.points[j] - p) < self.merge_tol:
                    return j
        self.points.append(p)
        j = len(self.points) - 1
        self._cells.setdefault((kx, ky, kz), []).append(j)
        return j

    def crossing(self, a: int, b: int):
        """Ids ``(phi(a, b), phi(b, a))`` of the two dual-circle crossings, or None."""
        if a > b:
            res = self.crossing(b, a)
            return None if res is None else (res[1], res[0])
        if (a, b) not in self._pairs:
            try:
                x = phi(self.points[a], self.points[b], self.r)
                y = phi(self.points[b], self.points[a], self.r)
            except (DegenerateDiscriminant, AntipodalInput):
                self._pairs[(a, b)] = None
            else:
                self._pairs[(a, b)] = (self.add_point(x), self.add_point(y))
        return self._pairs[(a, b)]

    def array(self, ids) -> np.ndarray:
        return np.array([self.points[j] for j in ids]).reshape(-1, 3)


def duals_of_face_edges(face_idx, state: ReconstructionState) -> list:
    """Dual edges of the consecutive vertex pairs of a face.

    ``face_idx`` lists registry ids in cyclic order. Raises
    :class:`DegenerateDiscriminant` naming the first pair whose dual circles
    miss each other.
    """
    out = []
    k = len(face_idx)
    for i in range(k):
        u, v = face_idx[i], face_idx[(i + 1) % k]
        x = phi(state.points[u], state.points[v], state.r)
        y = phi(state.points[v], state.points[u], state.r)
        out.append(DualEdge((u, v), (state.add_point(x), state.add_point(y))))
    return out


def _cyclic_order(points, axis):
    """Indices sorting ``points`` counter-clockwise around ``axis``."""
    axis = axis / np.linalg.norm(axis)
    ref = points[0] - (points[0] @ axis) * axis
    e1 = ref / np.linalg.norm(ref)
    e2 = _cross(axis, e1)
    return [int(i) for i in np.argsort(np.arctan2(points @ e2, points @ e1), kind="stable")]


def _seed(face, tol, merge_tol):
    face = np.asarray(face, dtype=float)
    if face.ndim != 2 or face.shape[1] != 3 or len(face) < 3:
        raise DegenerateInput("a face needs at least three points in R^3")
    bad = np.abs(np.linalg.norm(face, axis=1) - 1.0) > UNIT_TOL
    if bad.any():
        raise NonUnitVertex(f"face point {int(np.argmax(bad))} is not on the unit sphere")
    try:
        center, _, _ = circumcircle(face, tol=max(tol, 1e-12))
    except NotCoplanar as exc:
        raise NotConcyclic(f"face points are not coplanar: {exc}", exc.deviation) from exc
    r = float(np.linalg.norm(center))
    if not 1e-9 < r < 1.0:
        raise DegenerateInput(f"face plane at distance {r:.3g} from the centre cannot bound an ssd polytope")
    state = ReconstructionState(r=r, merge_tol=merge_tol)
    order = _cyclic_order(face, center)
    ids = [state.add_point(face[i]) for i in order]
    if len(set(ids)) != len(ids):
        raise DegenerateInput("face has repeated points")
    apex = state.add_point(-center / r)
    return state, ids, apex


def _cross(u, v):
    return np.array([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])


class _Budget(Exception):
    """Internal signal: one search phase ran out of nodes."""


def face_mirrors(points, axis) -> list:
    """Reflections through planes containing ``axis`` mapping ``points`` onto
    themselves, as 3x3 matrices."""
    P = np.asarray(points, dtype=float)
    A = np.asarray(axis, dtype=float)
    k = len(P)
    out = []
    for d in [P[i] for i in range(k)] + [P[i] + P[(i + 1) % k] for i in range(k)]:
        u = d - (d @ A) * A
        if np.linalg.norm(u) < 1e-12:
            continue
        n = np.cross(A, u / np.linalg.norm(u))
        n /= np.linalg.norm(n)
        H = np.eye(3) - 2.0 * np.outer(n, n)
        img = P @ H.T
        gap = max(np.min(np.linalg.norm(P - x, axis=1)) for x in img)
        if gap < 1e-9 and not any(np.allclose(H, G) for G in out):
            out.append(H)
    return out


class _Search:
    """Depth-first search over the speculative vertex choices."""

    def __init__(self, state, inc_tol, tol, max_vertices, max_nodes):
        self.st = state
        self.r = state.r
        self.inc = inc_tol
        self.tol = tol
        self.max_vertices = max_vertices
        self.max_nodes = max_nodes
        self.nodes = 0
        self.overflowed = False
        self.stuck = 0
        self.failed_report = None
        self.tried_symmetries = set()
        self.use_symmetry = False
        self.mirror = None
        self._room = {}

    # -- helpers -----------------------------------------------------------
    def conflicts(self, S, j) -> bool:
        return bool(np.any(self.st.array(S) @ self.st.points[j] < -self.r - self.inc))

    def on_circle(self, S, w, dots=None):
        """Points of ``S`` on the dual circle of ``w`` in cyclic order.

        ``dots`` optionally holds the precomputed products ``<s, w>``.
        """
        if dots is None:
            dots = self.st.array(S) @ self.st.points[w]
        on = [j for j, d in zip(S, dots) if j != w and abs(d + self.r) <= self.inc]
        if len(on) < 2:
            return on
        order = _cyclic_order(self.st.array(on), -self.st.points[w])
        return [on[i] for i in order]

    def close(self, S, CE, F):
        """Add the duals of certified edges until nothing changes.

        Returns ``(S, CE)`` or None when a certified point is contradicted.
        """
        S = list(S)
        inS = set(S)
        CE = dict(CE)
        work = list(CE)
        while work:
            e = work.pop()
            a, b = sorted(e)
            d = self.st.crossing(a, b)
            if d is None or d[0] == d[1]:
                return None
            for j in d:
                if j in F:
                    return None
                if j not in inS:
                    if self.conflicts(S, j):
                        return None
                    S.append(j)
                    inS.add(j)
                    if len(S) > self.max_vertices:
                        self.overflowed = True
                        return None
            de = frozenset(d)
            if de not in CE:
                CE[de] = e
                CE[e] = de
                work.append(de)
        return S, CE

    def mirrored(self, j) -> int:
        return self.st.add_point(self.mirror @ self.st.points[j])

    def close_all(self, S, CE, F):
        """:meth:`close`, plus closure under the hypothesised mirror if any."""
        while True:
            res = self.close(S, CE, F)
            if res is None or self.mirror is None:
                return res
            S, CE = res
            inS = set(S)
            changed = False
            for j in list(S):
                m = self.mirrored(j)
                if m in F:
                    return None
                if m not in inS:
                    if self.conflicts(S, m):
                        return None
                    S = S + [m]
                    inS.add(m)
                    changed = True
            for e in list(CE):
                a, b = tuple(e)
                me = frozenset((self.mirrored(a), self.mirrored(b)))
                if me not in CE:
                    CE[me] = None
                    changed = True
            if len(S) > self.max_vertices:
                self.overflowed = True
                return None
            if not changed:
                return S, CE

    def arc_has_room(self, S, w, p, q) -> bool:
        """Whether the open arc from ``p`` to ``q`` on the circle of ``w`` meets
        the admissible region (points beyond no dual plane of ``S``).

        Each point of ``S`` allows one arc of the circle. If their common part
        within the open arc is non-empty, its first point is the start of the
        arc or the start of an allowed arc, so testing those angles is exact.
        """
        W = self.st.points[w]
        P, Q = self.st.points[p], self.st.points[q]
        rho = math.sqrt(1.0 - self.r * self.r)
        e1 = P + self.r * W
        e1 = e1 / np.linalg.norm(e1)
        e2 = _cross(-W, e1)
        qv = Q + self.r * W
        length = math.atan2(qv @ e2, qv @ e1) % (2 * math.pi)
        if length == 0.0:
            length = 2 * math.pi
        pad = 1e-7
        if length <= 2 * pad:
            return False
        M = self.st.array(S)
        # slack of the point at angle t against s: a cos t + b sin t + c >= -inc
        a = M @ e1 * rho
        b = M @ e2 * rho
        c = self.r - self.r * (M @ W)
        amp = np.hypot(a, b)
        flat = amp < 1e-15
        if np.any(flat & (c < -self.inc)):
            return False
        kappa = (-self.inc - c[~flat]) / amp[~flat]
        if np.any(kappa >= 1.0):
            return False
        live = kappa > -1.0
        starts = (np.arctan2(b[~flat], a[~flat])[live] - np.arccos(kappa[live])) % (2 * math.pi)
        T = np.concatenate(([pad], starts[(starts >= pad) & (starts <= length - pad)]))
        slack = np.outer(a, np.cos(T)) + np.outer(b, np.sin(T)) + c[:, None]
        return bool(np.any(np.all(slack >= -self.inc - 1e-12, axis=0)))

    def forced_edges(self, S, CE, F):
        """Consecutive pairs on a dual circle with no room for a vertex between
        them; they must be edges. Returns None if such a pair cannot be one."""
        inS = set(S)
        key = frozenset(S)
        M = self.st.array(S)
        G = M @ M.T
        forced = []
        for wi, w in enumerate(S):
            on = self.on_circle(S, w, G[wi])
            if len(on) < 2:
                continue
            for p, q in zip(on, on[1:] + on[:1]):
                e = frozenset((p, q))
                if e in CE:
                    continue
                room = self._room.get((key, w, p, q))
                if room is None:
                    room = self._room[(key, w, p, q)] = self.arc_has_room(S, w, p, q)
                if room:
                    continue
                d = self.st.crossing(p, q)
                if d is None or w not in d or d[0] == d[1]:
                    return None
                y = d[0] if d[1] == w else d[1]
                if y not in inS and (y in F or self.conflicts(S, y)):
                    return None
                forced.append(e)
        return forced

    def candidates(self, S, F):
        inS = set(S)
        M = self.st.array(S)
        score = {}
        for a, b in itertools.combinations(sorted(S), 2):
            d = self.st.crossing(a, b)
            if d is None:
                continue
            for j in d:
                if j in inS or j in F or j in score:
                    continue
                dots = M @ self.st.points[j]
                if np.all(dots >= -self.r - self.inc):
                    score[j] = int(np.sum(np.abs(dots + self.r) <= self.inc))
        if not score:
            return []
        ids = list(score)
        C = self.st.array(ids)
        clash = np.sum(C @ C.T < -self.r - self.inc, axis=1)
        rank = {j: (int(clash[i]), -score[j], j) for i, j in enumerate(ids)}
        return sorted(ids, key=rank.__getitem__)

    def closed(self, S) -> bool:
        inS = set(S)
        for w in S:
            on = self.on_circle(S, w)
            if len(on) < 3:
                return False
            for p, q in zip(on, on[1:] + on[:1]):
                d = self.st.crossing(p, q)
                if d is None or not (w in d and set(d) <= inS):
                    return False
        return True

    def finish(self, S):
        try:
            poly = convex_hull3(self.st.array(S))
        except SsdError:
            return None
        if poly.n_vertices != len(S):
            return None
        poly = poly.with_(r=self.r)
        try:
            report = verify_ssd(poly, self.tol)
        except SsdError:
            return None
        if not report.passed:
            self.failed_report = report
            return None
        return poly.with_(sigma=report.sigma)

    # -- symmetry step -----------------------------------------------------
    def rotations(self, S):
        """Candidate ``(axis id, order)`` pairs read off the known points."""
        pts = self.st.array(S)
        out = []
        idx = np.arange(len(S))
        orders = {}
        for ni, n in enumerate(S):
            N = pts[ni]
            h = pts @ N
            U = pts - np.outer(h, N)
            norm = np.linalg.norm(U, axis=1)
            ok = (idx != ni) & (np.abs(h) <= 1 - 1e-6)
            pair = (np.abs(h[:, None] - h[None, :]) <= self.inc) & ok[:, None] & ok[None, :]
            ii, kk = np.nonzero(np.triu(pair, 1))
            if len(ii) == 0:
                continue
            scale = norm[ii] * norm[kk]
            c = np.clip(np.einsum("ij,ij->i", U[ii], U[kk]) / scale, -1.0, 1.0)
            sn = np.einsum("ij,ij->i", np.cross(U[ii], U[kk]), np.broadcast_to(N, (len(ii), 3))) / scale
            turns = np.arctan2(sn, c) / (2 * math.pi) % 1.0
            for turn in turns:
                turn = float(turn)
                q = orders.get(round(turn, 12))
                if q is None:
                    frac = Fraction(turn).limit_denominator(self.max_vertices)
                    good = frac.numerator != 0 and abs(float(frac) - turn) <= 1e-9
                    q = orders[round(turn, 12)] = frac.denominator if good else 0
                if q and (n, q) not in out:
                    out.append((n, q))
        return out

    def apply_rotation(self, S, CE, F, axis_id, order):
        R = rotation_matrix(self.st.points[axis_id], 2 * math.pi / order)
        S2 = list(S)
        inS = set(S)
        images = {}
        for j in S:
            p = self.st.points[j]
            for _ in range(order - 1):
                p = R @ p
                m = self.st.add_point(p)
                images.setdefault(j, []).append(m)
                if m in F:
                    return None
                if m not in inS:
                    if self.conflicts(S2, m):
                        return None
                    S2.append(m)
                    inS.add(m)
                    if len(S2) > self.max_vertices:
                        self.overflowed = True
                        return None
        if len(S2) == len(S):
            return None
        CE2 = dict(CE)
        for e in list(CE):
            a, b = sorted(e)
            for ia, ib in zip(images[a], images[b]):
                ne = frozenset((ia, ib))
                if len(ne) == 2 and ne not in CE2:
                    CE2[ne] = None
        return S2, CE2

    # -- driver ------------------------------------------------------------
    def run(self, S, CE, F):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _Budget
        res = self.close_all(S, CE, F)
        if res is None:
            return None
        S, CE = res
        while True:
            forced = self.forced_edges(S, CE, F)
            if forced is None:
                return None
            if not forced:
                break
            for e in forced:
                CE[e] = None
            res = self.close_all(S, CE, F)
            if res is None:
                return None
            S, CE = res
        cand = self.candidates(S, F)
        if cand:
            j = cand[0]
            if len(S) + 1 > self.max_vertices:
                self.overflowed = True
            else:
                found = self.run(S + [j], CE, F)
                if found is not None:
                    return found
            banned = {j} if self.mirror is None else {j, self.mirrored(j)}
            return self.run(S, CE, F | banned)
        if self.closed(S):
            poly = self.finish(S)
            if poly is not None:
                self.st.vertices = list(S)
                self.st.edges = {e: d for e, d in CE.items() if d is not None}
                self.st.diagonals = self._diagonals(S)
            return poly
        self.stuck += 1
        if not self.use_symmetry:
            return None
        for axis_id, order in self.rotations(S):
            key = (frozenset(S), axis_id, order)
            if key in self.tried_symmetries:
                continue
            self.tried_symmetries.add(key)
            res = self.apply_rotation(S, CE, F, axis_id, order)
            if res is None:
                continue
            found = self.run(res[0], res[1], F)
            if found is not None:
                return found
        return None

    def _diagonals(self, S):
        """Consecutive pairs on some dual circle whose crossing lies outside."""
        inS = set(S)
        diag = set()
        for w in S:
            on = self.on_circle(S, w)
            for p, q in itertools.combinations(on, 2):
                d = self.st.crossing(p, q)
                if d is not None and not set(d) <= inS:
                    diag.add(frozenset((p, q)))
        return diag


def reconstruct_from_face(face, tol: float = 1e-9, max_vertices: int = 200,
                          assume_closure: float | None = None,
                          max_nodes: int = DEFAULT_MAX_NODES) -> Polytope:
    """Rebuild the ssd polytope having ``face`` as one of its faces.

    ``face`` is a sequence of at least three unit vectors on a common circle.
    ``assume_closure`` widens the merge tolerance for new points (and the
    incidence tolerance with it), for faces known only to limited accuracy.

    Raises :class:`NotConcyclic` for bad input, :class:`Overflow` when every
    branch outgrows ``max_vertices``, :class:`VerificationFailed` when a
    combinatorially closed candidate fails the ssd check, and
    :class:`OpenChain` when propagation stalls without closing.
    """
    merge = MERGE_TOL if assume_closure is None else max(float(assume_closure), MERGE_TOL)
    state, face_ids, apex = _seed(face, tol, merge)
    inc = max(100.0 * tol, merge)
    k = len(face_ids)
    CE = {}
    for i in range(k):
        e = frozenset((face_ids[i], face_ids[(i + 1) % k]))
        CE[e] = None
    state.vertices = face_ids + [apex]
    state.frontier = [apex]
    seed = face_ids + [apex]
    search = _Search(state, inc, tol, max_vertices, max_nodes)
    # Phases, cheapest hypothesis first: growth symmetric under a mirror of
    # the face, then plain growth, then rotational symmetry about a vertex.
    phases = [(H, False) for H in face_mirrors(state.array(face_ids), state.points[apex])]
    phases += [(None, False), (None, True)]
    poly = None
    exhausted = False
    for mirror, use_symmetry in phases:
        if use_symmetry and not search.stuck:
            break
        search.mirror = mirror
        search.use_symmetry = use_symmetry
        search.nodes = 0
        try:
            poly = search.run(list(seed), dict(CE), frozenset())
        except _Budget:
            exhausted = True
            poly = None
        if poly is not None:
            break
    if poly is not None:
        state.frontier = []
        return poly.with_(provenance=f"reconstructed from a {k}-gon face")
    if search.failed_report is not None:
        raise VerificationFailed("propagation closed but the result is not ssd", search.failed_report)
    if search.overflowed and not search.stuck:
        raise Overflow(f"reconstruction exceeded {max_vertices} vertices")
    if exhausted:
        raise OpenChain(f"search budget of {max_nodes} nodes exhausted without closing")
    raise OpenChain("propagation stalled with face diagonals left unresolved")
