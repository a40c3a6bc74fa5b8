import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from ssdpoly.duality import (
    SegmentType,
    alpha_lower_bound,
    classify_segment,
    dual_circle,
    dual_line_distance,
    dual_plane,
    parameter_alpha,
    phi,
)
from ssdpoly.errors import AntipodalInput, DegenerateDiscriminant, InvalidRadius, NonUnitVertex
from ssdpoly.search import KAPPA_23, LAMBDA_23, R_23, pentagon_vertices

from conftest import TETRA, VERTEX_TABLE, admissible_triples


def circle_crossings(a, b, r):
    """Independent oracle: points x with <x,a> = <x,b> = -r, |x| = 1.

    Takes the minimum-norm point of the line of the two dual planes and
    walks along the line direction by the remaining chord length.
    """
    A = np.vstack([a, b])
    p, *_ = np.linalg.lstsq(A, np.array([-r, -r]), rcond=None)
    d = np.linalg.svd(A)[2][-1]
    t = math.sqrt(max(0.0, 1.0 - p @ p))
    return p + t * d, p - t * d


def as_set(points):
    return sorted(tuple(np.round(p, 12)) for p in points)


# -- worked examples ---------------------------------------------------------

def test_dual_plane_and_circle_of_pole():
    pl = dual_plane([0, 0, 1], 0.8)
    assert_allclose(pl.normal, [0, 0, 1])
    assert pl.offset == -0.8
    center, radius = dual_circle([0, 0, 1], 0.8)
    assert_allclose(center, [0, 0, -0.8])
    assert radius == pytest.approx(0.6, abs=1e-15)


def test_dual_plane_of_tetra_vertex_holds_opposite_face():
    pl = dual_plane(TETRA[0], 1.0 / 3.0)
    for w in TETRA[1:]:
        assert w @ pl.normal - pl.offset == pytest.approx(0.0, abs=1e-15)


def test_invalid_radius():
    with pytest.raises(InvalidRadius):
        dual_plane([0, 0, 1], 1.0)
    with pytest.raises(InvalidRadius):
        phi([1, 0, 0], [0, 1, 0], 0.0)


def test_non_unit_input():
    with pytest.raises(NonUnitVertex):
        phi([2, 0, 0], [0, 1, 0], 0.5)


def test_phi_tetra_edge_maps_to_opposite_edge():
    a, b = TETRA[0], TETRA[1]
    x, y = phi(a, b, 1 / 3), phi(b, a, 1 / 3)
    assert_allclose(x, np.array([-1, 1, -1]) / math.sqrt(3), atol=1e-15)
    assert_allclose(y, np.array([-1, -1, 1]) / math.sqrt(3), atol=1e-15)
    assert as_set([x, y]) == as_set(circle_crossings(a, b, 1 / 3))


def test_phi_orthogonal_pair():
    a, b = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    x = phi(a, b, 0.5)
    assert_allclose(x, [-0.5, -0.5, math.sqrt(0.5)], atol=1e-15)
    center_a, rho = dual_circle(a, 0.5)
    center_b, _ = dual_circle(b, 0.5)
    assert np.linalg.norm(x - center_a) == pytest.approx(rho, abs=1e-15)
    assert np.linalg.norm(x - center_b) == pytest.approx(rho, abs=1e-15)


def test_phi_reproduces_vertex_f():
    _, _, c, d, _, _ = pentagon_vertices(math.radians(KAPPA_23), math.radians(LAMBDA_23), R_23)
    assert_allclose(phi(d, c, R_23), VERTEX_TABLE["F"], atol=1e-9)


def test_degenerate_discriminant_and_clamp():
    r = 0.8
    # 1 + <a,b> - 2 r^2 = -0.2 for orthogonal a, b
    with pytest.raises(DegenerateDiscriminant) as info:
        phi([1, 0, 0], [0, 1, 0], r)
    assert info.value.discriminant == pytest.approx(-0.28)
    # tangent circles: discriminant exactly at zero gives a single point
    c = 2 * r * r - 1
    a = np.array([1.0, 0, 0])
    b = np.array([c, math.sqrt(1 - c * c), 0])
    x, y = phi(a, b, r), phi(b, a, r)
    assert_allclose(x, y, atol=1e-7)


def test_antipodal_and_equal_inputs():
    with pytest.raises(AntipodalInput):
        phi([0, 0, 1], [0, 0, -1], 0.5)
    with pytest.raises(AntipodalInput):
        phi([0, 0, 1], [0, 0, 1], 0.5)


def test_parameter_alpha_examples():
    assert parameter_alpha(1 / 3) == pytest.approx(np.linalg.norm(TETRA[0] - TETRA[1]), abs=1e-15)
    assert parameter_alpha(0.8) == pytest.approx(math.sqrt(3.6), abs=1e-15)
    assert alpha_lower_bound(3) == pytest.approx(math.sqrt(8 / 3), abs=1e-15)
    # r close to zero gives alpha near sqrt 2, under the three-dimensional bound
    assert parameter_alpha(1e-9) < alpha_lower_bound(3)


# -- properties of the dual-edge map ----------------------------------------

@settings(max_examples=1000)
@given(admissible_triples())
def test_phi_matches_independent_oracle(t):
    a, b, r = t
    got = [phi(a, b, r), phi(b, a, r)]
    want = circle_crossings(a, b, r)
    d = min(np.linalg.norm(got[0] - want[0]) + np.linalg.norm(got[1] - want[1]),
            np.linalg.norm(got[0] - want[1]) + np.linalg.norm(got[1] - want[0]))
    assert d <= 1e-7


@settings(max_examples=1000)
@given(admissible_triples())
def test_phi_lands_on_both_circles(t):
    a, b, r = t
    x = phi(a, b, r)
    assert abs(x @ a + r) <= 1e-12
    assert abs(x @ b + r) <= 1e-12
    assert abs(np.linalg.norm(x) - 1.0) <= 1e-12


@settings(max_examples=1000)
@given(admissible_triples(margin=0.05))
def test_phi_involution(t):
    a, b, r = t
    x, y = phi(a, b, r), phi(b, a, r)
    assert_allclose(phi(x, y, r), a, atol=1e-10)
    assert_allclose(phi(y, x, r), b, atol=1e-10)


@settings(max_examples=300)
@given(admissible_triples())
def test_phi_pair_mirror_symmetric(t):
    a, b, r = t
    diff = phi(a, b, r) - phi(b, a, r)
    n = np.cross(a, b)
    assert np.linalg.norm(np.cross(diff, n)) <= 1e-9 * max(1.0, np.linalg.norm(n))


@settings(max_examples=300)
@given(admissible_triples())
def test_distance_product_of_dual_lines(t):
    a, b, r = t
    d_chord = np.linalg.norm(a + b) / 2
    assert d_chord * dual_line_distance(a, b, r) == pytest.approx(r, abs=1e-10)


# -- segment classification --------------------------------------------------

def test_classify_tetra_edge(tetra):
    for i, j in itertools.combinations(range(4), 2):
        assert classify_segment(i, j, tetra) is SegmentType.EDGE


def test_classify_pentagon_diagonal(ssd23):
    a, c = ssd23.labels.index("A"), ssd23.labels.index("C")
    assert classify_segment(a, c, ssd23) is SegmentType.FACE_DIAGONAL
    a, b = ssd23.labels.index("A"), ssd23.labels.index("B")
    assert classify_segment(a, b, ssd23) is SegmentType.EDGE


def test_classify_body_diagonal(verified_polytopes):
    poly = verified_polytopes["P(3,5)"]
    v = poly.vertices
    i, j = np.unravel_index(np.argmin(v @ v.T), (len(v), len(v)))
    assert np.linalg.norm(v[i] + v[j]) / 2 < poly.r
    assert classify_segment(int(i), int(j), poly) is SegmentType.BODY_DIAGONAL


def test_classify_segment_against_hull(verified_polytopes):
    for name, poly in verified_polytopes.items():
        edges = set(poly.edges)
        faces = [set(f) for f in poly.faces]
        for i, j in itertools.combinations(range(poly.n_vertices), 2):
            kind = classify_segment(i, j, poly)
            on_face = any(i in f and j in f for f in faces)
            if (i, j) in edges:
                assert kind is SegmentType.EDGE, (name, i, j)
            elif on_face:
                assert kind in (SegmentType.FACE_DIAGONAL, SegmentType.FACE_DIAGONAL_THROUGH_CENTER), (name, i, j)
            else:
                assert kind is SegmentType.BODY_DIAGONAL, (name, i, j)
