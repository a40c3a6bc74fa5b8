import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ssdpoly.errors import DegenerateInput
from ssdpoly.polytope import (
    FaceVector,
    Polytope,
    align,
    congruent,
    convex_hull3,
    dedup_points,
    distance_profile,
    euler_check,
    face_vector,
)

from conftest import TETRA, VERTEX_TABLE, brute_force_faces, random_rotation

OCTA = np.vstack([np.eye(3), -np.eye(3)])
CUBE = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]) / math.sqrt(3)


def table_points():
    return np.array(list(VERTEX_TABLE.values()))


def test_tetra_hull():
    P = convex_hull3(TETRA)
    assert len(P.faces) == 4 and len(P.edges) == 6
    assert face_vector(P) == {3: 4}


def test_octahedron_hull():
    P = convex_hull3(OCTA)
    assert face_vector(P) == {3: 8}


def test_too_few_or_flat_points():
    with pytest.raises(DegenerateInput):
        convex_hull3(TETRA[:3])
    with pytest.raises(DegenerateInput):
        convex_hull3([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_table_hull_matches_brute_force():
    P = convex_hull3(table_points())
    assert P.n_vertices == 22  # X merges into F
    mine = {frozenset(f) for f in P.faces}
    oracle = brute_force_faces(P.vertices)
    assert mine == oracle


def test_table_face_vector():
    # frozen from the brute-force facet enumeration above
    P = convex_hull3(table_points())
    fv = face_vector(P)
    assert fv == {3: 7, 4: 13, 5: 1, 6: 1}
    assert fv.euler_weight() == 4
    assert fv.degree_sum() == 4 * (P.n_vertices - 1)


def test_named_faces_present(ssd23):
    for name in ["ABCDE", "CDNSRM", "STVN", "QRMU", "FJTV", "FUQG", "FVPK", "FULK"]:
        assert ssd23.face_named(name) is not None, name


def test_dedup_merges_duplicate_row():
    pts = table_points()
    kept, mapping = dedup_points(pts)
    assert len(kept) == 22
    labels = list(VERTEX_TABLE)
    assert mapping[labels.index("X")] == mapping[labels.index("F")]


def test_face_cycles_canonical_and_outward(ssd23):
    for f in ssd23.faces:
        assert f[0] == min(f)
        pts = ssd23.vertices[list(f)]
        c = pts.mean(axis=0)
        n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        assert n @ c > 0  # counter-clockwise seen from outside


def test_euler_examples(ssd23):
    assert euler_check(convex_hull3(TETRA)).passed
    cube = euler_check(convex_hull3(CUBE))
    assert not cube.passed and cube.euler_characteristic == 2
    res = euler_check(ssd23)
    assert res.passed and res.n_edges == 42


def test_face_vector_known_polytopes(tetra, kmw, verified_polytopes):
    assert face_vector(tetra) == {3: 4}
    assert face_vector(verified_polytopes["P(1,7)"]) == {7: 1, 3: 7}
    assert face_vector(kmw) == {5: 1, 4: 2, 3: 5}


def test_face_vector_missing_sizes():
    fv = FaceVector({3: 4})
    assert fv[5] == 0 and fv.n_faces == 4 and fv.key() == ((3, 4),)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_hull_face_vector_rotation_invariant(seed):
    rng = np.random.default_rng(seed)
    pts = table_points()
    Q = random_rotation(rng)
    assert face_vector(convex_hull3(pts @ Q.T)) == face_vector(convex_hull3(pts))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(6, 30))
def test_hull_contains_all_points(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    pts[: n // 2] /= np.linalg.norm(pts[: n // 2], axis=1)[:, None]
    P = convex_hull3(pts)
    for pl in P.face_planes():
        assert np.all(pts @ pl.normal - pl.offset <= 1e-9)
    assert {frozenset(f) for f in P.faces} == brute_force_faces(P.vertices)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_congruent_under_isometry(seed, reflect):
    rng = np.random.default_rng(seed)
    pts = table_points()[:-1]
    Q = random_rotation(rng)
    if reflect:
        Q = Q @ np.diag([1.0, 1.0, -1.0])
    moved = rng.permutation(pts @ Q.T)
    R = align(pts, moved)
    assert R is not None
    assert_allclose(np.sort(distance_profile(pts @ R.T)), np.sort(distance_profile(moved)), atol=1e-12)
    assert congruent(pts, moved)


def test_not_congruent_when_perturbed():
    pts = table_points()[:-1].copy()
    other = pts.copy()
    other[3] = other[3] + np.array([1e-6, 0, 0])
    assert not congruent(pts, other, 1e-8)
    assert not congruent(pts, pts[:-1])


def test_polytope_defaults_alpha():
    P = Polytope(TETRA, ((0, 1, 2),), r=1 / 3)
    assert P.alpha == pytest.approx(math.sqrt(8 / 3))
    assert not P.vertices.flags.writeable
