import json

import numpy as np
import pytest

from descent_geom.errors import DimensionMismatch, InvalidInput
from descent_geom.geom_core import (
    ConvexBody,
    body_from_dict,
    contains,
    hausdorff,
    hull,
    includes,
    mix,
    project,
    support,
    unit_directions,
)

from .conftest import disk_polygon, nested_pair, random_polytope
from .oracles import extreme_points_bruteforce, hausdorff_sampling


class TestHull:
    def test_interior_point_dropped(self):
        K = hull([(0, 0), (1, 0), (0.5, 0.25), (0, 1)])
        assert sorted(map(tuple, K.vertices)) == [(0, 0), (0, 1), (1, 0)]
        assert K.dim_affine == 2

    def test_singleton(self):
        K = hull([(3, 4)])
        assert K.nvertices == 1
        assert K.dim_affine == 0

    def test_collinear(self):
        K = hull([(0, 0), (1, 0), (2, 0), (0.7, 0)])
        assert K.dim_affine == 1
        assert sorted(map(tuple, K.vertices)) == [(0, 0), (2, 0)]

    def test_extreme_points_match_bruteforce(self, rng):
        pts = rng.standard_normal((100, 2)) * 0.6
        pts = pts[np.linalg.norm(pts, axis=1) <= 1.0]
        pts = np.vstack([pts, [(1, 0), (-1, 0), (0, 1), (0, -1)]])
        K = hull(pts)
        got = sorted(map(tuple, K.vertices))
        expected = sorted(tuple(pts[i]) for i in extreme_points_bruteforce(pts))
        assert got == pytest.approx(expected)
        for axis_pt in [(1, 0), (-1, 0), (0, 1), (0, -1)]:
            assert any(np.allclose(v, axis_pt) for v in K.vertices)

    def test_idempotent(self, rng):
        for n in (2, 3, 4):
            K = random_polytope(rng, n, 30)
            K2 = hull(K.vertices)
            assert np.allclose(K.vertices, K2.vertices)

    def test_errors(self):
        with pytest.raises(InvalidInput):
            hull(np.zeros((0, 2)))
        with pytest.raises(InvalidInput):
            hull([(np.nan, 0.0)])

    def test_dedup(self):
        K = hull([(0, 0), (0, 1e-12), (1, 0), (0, 1)])
        assert K.nvertices == 3


class TestSupport:
    def test_square(self):
        K = hull([(1, 1), (-1, 1), (-1, -1), (1, -1)])
        assert support(K, (1, 0)) == 1.0
        assert support(K, (1, 1)) == 2.0

    def test_segment(self):
        L = 2.5
        K = hull([(0, 0), (L, 0)])
        for th in np.linspace(0, 2 * np.pi, 17):
            x = (np.cos(th), np.sin(th))
            assert support(K, x) == pytest.approx(max(0.0, L * np.cos(th)))

    def test_homogeneous(self, rng):
        K = random_polytope(rng, 3, 12)
        x = rng.standard_normal(3)
        for lam in (0.0, 0.5, 2.0):
            assert support(K, lam * x) == pytest.approx(lam * support(K, x))

    def test_monotone_under_inclusion(self, rng):
        for _ in range(20):
            A, B = nested_pair(rng)
            dirs = unit_directions(2, 1000, 5)
            hA = np.max(dirs @ A.vertices.T, axis=1)
            hB = np.max(dirs @ B.vertices.T, axis=1)
            assert np.all(hA <= hB + 1e-12)

    def test_dimension_mismatch(self):
        K = hull([(0, 0), (1, 0), (0, 1)])
        with pytest.raises(DimensionMismatch):
            support(K, (1, 0, 0))


class TestMinkowskiLinearity:
    def test_support_is_affine_in_lambda(self, rng):
        for _ in range(10):
            A = random_polytope(rng, 2, 10)
            B = random_polytope(rng, 2, 10)
            lam = rng.random()
            M = mix(A, B, lam)
            dirs = unit_directions(2, 256, 7)
            hM = np.max(dirs @ M.vertices.T, axis=1)
            hA = np.max(dirs @ A.vertices.T, axis=1)
            hB = np.max(dirs @ B.vertices.T, axis=1)
            assert np.abs(hM - (lam * hA + (1 - lam) * hB)).max() < 1e-10


class TestProject:
    def test_disk_exterior(self, disk64):
        q = project(disk64, (2, 0))
        assert np.linalg.norm(q - (1, 0)) < 2e-3  # polygonal discretization

    def test_interior_fixed(self, unit_square):
        p = np.array([0.3, 0.7])
        assert np.allclose(project(unit_square, p), p)

    def test_corner(self, unit_square):
        assert np.allclose(project(unit_square, (2, 2)), (1, 1))

    def test_certificate_random(self, rng):
        for n in (2, 3, 4, 5):
            K = random_polytope(rng, n, 25)
            for _ in range(15):
                p = rng.standard_normal(n) * 2.0
                q = project(K, p)
                gap = np.max((K.vertices - q) @ (p - q))
                assert gap <= 1e-8 * (1 + np.linalg.norm(p - q))

    def test_degenerate_3d(self):
        flat = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
        q = project(flat, np.array([0.5, 0.5, 2.0]))
        assert np.allclose(q, (0.5, 0.5, 0.0), atol=1e-8)


class TestContainsIncludes:
    def test_contains_tolerance_band(self, unit_square):
        assert contains(unit_square, (0.5, 0.5), 0.0)
        assert not contains(unit_square, (1 + 1e-3, 0.5), 1e-6)
        assert contains(unit_square, (1 + 1e-9, 0.5), 1e-6)

    def test_includes_balls(self):
        assert includes(disk_polygon(2.0, m=32), disk_polygon(1.0, m=32), 1e-9)

    def test_translated_squares(self, unit_square):
        other = unit_square.translate((2, 0))
        assert not includes(unit_square, other, 1e-9)
        assert not includes(other, unit_square, 1e-9)

    def test_nested_random_strict(self, rng):
        for _ in range(10):
            A, B = nested_pair(rng)
            # add one exterior vertex to B so the inclusion is strict
            far = B.centroid() + np.array([3.0, 0.0]) * (1 + B.diameter())
            B2 = hull(np.vstack([B.vertices, far]))
            assert includes(B2, A, 1e-9)
            assert not includes(A, B2, 1e-9)


class TestHausdorff:
    def test_concentric_disks(self):
        d = hausdorff(disk_polygon(1.0), disk_polygon(2.0))
        assert d == pytest.approx(1.0, abs=2e-3)

    def test_identity(self, rng):
        K = random_polytope(rng, 3, 15)
        assert hausdorff(K, K) == 0.0

    def test_translate(self, unit_square):
        for d in (0.25, 1.0, 3.0):
            assert hausdorff(unit_square, unit_square.translate((d, 0))) == pytest.approx(d)

    def test_agrees_with_direction_sampling_smooth_max(self, unit_square):
        # when the support-gap maximizer is not a kink, 1e4 directions
        # resolve the Hausdorff distance to 1e-6
        for d in (0.37, 1.3):
            B = unit_square.translate((d, 0))
            exact = hausdorff(unit_square, B)
            sampled = hausdorff_sampling(unit_square, B, ndirs=10000)
            assert abs(exact - sampled) < 1e-6

    def test_agrees_with_direction_sampling_random(self, rng):
        # kinked maximizers limit a 1e4-direction sample to O(grid step)
        for _ in range(5):
            A = random_polytope(rng, 2, 12)
            B = random_polytope(rng, 2, 12)
            exact = hausdorff(A, B)
            sampled = hausdorff_sampling(A, B, ndirs=10000)
            assert sampled <= exact + 1e-12
            assert exact - sampled < 1e-3 * (1 + exact)


class TestSerialization:
    def test_round_trip(self, rng):
        for n in (2, 3):
            K = random_polytope(rng, n, 18)
            K2 = body_from_dict(json.loads(json.dumps(K.to_dict())))
            assert np.allclose(K.vertices, K2.vertices)

    def test_canonicalize_on_load(self):
        K = body_from_dict({"dim": 2, "vertices": [[0, 0], [1, 0], [0.5, 0.2], [0, 1]]})
        assert K.nvertices == 3
