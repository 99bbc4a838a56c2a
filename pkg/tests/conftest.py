import numpy as np
import pytest

from descent_geom.geom_core import hull


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def unit_square():
    return hull([(0, 0), (1, 0), (1, 1), (0, 1)])


def disk_polygon(r=1.0, center=(0.0, 0.0), m=64):
    ang = (np.arange(m) + 0.5) * 2 * np.pi / m
    return hull(np.asarray(center) + r * np.column_stack([np.cos(ang), np.sin(ang)]))


@pytest.fixture
def disk64():
    return disk_polygon()


def random_polytope(rng, n=2, npts=20, scale=1.0):
    pts = rng.standard_normal((npts, n)) * scale
    return hull(pts)


def nested_pair(rng, n=2, npts=16):
    """Outer body and a strictly included inner body (scaled about centroid)."""
    B = random_polytope(rng, n, npts)
    c = B.centroid()
    f = 0.3 + 0.5 * rng.random()
    A = hull(c + f * (B.vertices - c))
    return A, B
