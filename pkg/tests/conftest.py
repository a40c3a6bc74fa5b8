import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ssdpoly.ltype import construct_ltype
from ssdpoly.search import KAPPA_23, LAMBDA_23, R_23, assemble_ssd23, kmw8

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=200
)
settings.load_profile("default")

# Reference coordinates of the 22-vertex polyhedron; X repeats F.
VERTEX_TABLE = {
    "Z": (0.0, 0.0, 1.0),
    "A": (0.5983202423353512, 0.0, -0.8012570671212621),
    "B": (0.4216926266320513, 0.4244554641330405, -0.8012570671212621),
    "C": (-0.4444351271090439, 0.4005802418739614, -0.8012570671212621),
    "D": (-0.4444351271090439, -0.4005802418739614, -0.8012570671212621),
    "E": (0.4216926266320513, -0.4244554641330405, -0.8012570671212621),
    "F": (0.8483424447791927, 0.0, 0.5294479165943166),
    "G": (0.0224329604142071, 0.8138064392649369, 0.5807028859046416),
    "H": (-0.8628874394036844, 0.3590712428534728, 0.3556586980168142),
    "I": (-0.8628874394036844, -0.3590712428534728, 0.3556586980168142),
    "J": (0.0224329604142071, -0.8138064392649369, 0.5807028859046416),
    "K": (0.9891443044532439, 0.0, 0.1469474224602405),
    "L": (0.4887101245345391, 0.8460369840318558, -0.2130348230400762),
    "M": (-0.6075422756722804, 0.5825733695380467, -0.5399080036228703),
    "N": (-0.6075422756722804, -0.5825733695380467, -0.5399080036228703),
    "P": (0.4887101245345391, -0.8460369840318558, -0.2130348230400762),
    "Q": (0.1228243012703047, 0.9324888687546015, 0.3396744039020674),
    "R": (-0.7680489592088464, 0.5746015768538119, -0.2827257047658043),
    "S": (-0.7680489592088464, -0.5746015768538119, -0.2827257047658043),
    "T": (0.1228243012703047, -0.9324888687546015, 0.3396744039020674),
    "U": (0.2797981540096859, 0.9490145065069506, 0.1452048878383263),
    "V": (0.2797981540096859, -0.9490145065069506, 0.1452048878383263),
    "X": (0.8483424447791927, 0.0, 0.5294479165943166),
}

TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / math.sqrt(3.0)


def brute_force_faces(points, tol=1e-7):
    """Facets of the hull by testing every triple's plane (slow, independent of Qhull)."""
    pts = np.asarray(points, dtype=float)
    faces = set()
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        n = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        if np.linalg.norm(n) < 1e-12:
            continue
        n /= np.linalg.norm(n)
        d = pts @ n - pts[i] @ n
        if np.all(d <= tol) or np.all(d >= -tol):
            faces.add(frozenset(np.flatnonzero(np.abs(d) <= tol).tolist()))
    return faces


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@st.composite
def unit_vectors(draw):
    v = np.array([draw(st.floats(-1, 1, allow_nan=False)) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    return v / np.linalg.norm(v)


@st.composite
def admissible_triples(draw, margin=1e-3):
    """(a, b, r) whose dual circles cross transversally."""
    r = draw(st.floats(0.05, 0.95))
    a = draw(unit_vectors())
    lo = max(2.0 * r * r - 1.0 + margin, -1.0 + 1e-3)
    hi = 1.0 - 1e-3
    if lo >= hi:
        r = 0.5
        lo = 2.0 * r * r - 1.0 + margin
    c = draw(st.floats(lo, hi))
    t = draw(unit_vectors())
    perp = t - (t @ a) * a
    if np.linalg.norm(perp) < 1e-6:
        perp = np.cross(a, [1.0, 0.0, 0.0] if abs(a[0]) < 0.9 else [0.0, 1.0, 0.0])
    perp /= np.linalg.norm(perp)
    b = c * a + math.sqrt(1.0 - c * c) * perp
    return a, b / np.linalg.norm(b), r


@pytest.fixture(scope="session")
def tetra():
    return construct_ltype(1, 3)


@pytest.fixture(scope="session")
def ssd23():
    return assemble_ssd23(math.radians(KAPPA_23), math.radians(LAMBDA_23), R_23)


@pytest.fixture(scope="session")
def kmw():
    return kmw8()


@pytest.fixture(scope="session")
def verified_polytopes(ssd23, kmw):
    polys = {f"P({k},{l})": construct_ltype(k, l) for k, l in [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5), (3, 5)]}
    polys["ssd23"] = ssd23
    polys["kmw8"] = kmw
    return polys
