import math

import numpy as np
import pytest

from descent_geom.errors import InvalidInput, PreconditionViolated
from descent_geom.cones import (
    CircularCone,
    cap_body,
    cap_support,
    cap_support_batch,
    cone_from_generators,
    cone_intersect_halfspace,
    dual_cone,
    in_normal_cone,
    normal_cone,
    normal_cone_limit_report,
    sector_integral_exact,
    sector_integral_lower_bound,
    sphere_measure,
    tangent_cone,
)
from descent_geom.geom_core import hull, support, unit_directions

from .conftest import disk_polygon, random_polytope
from .oracles import sector_flux_axis_quad, sector_flux_offaxis_quad


def wedge_membership_by_angle(lo, hi, dirs):
    ang = np.arctan2(dirs[:, 1], dirs[:, 0])
    rel = (ang - lo) % (2 * np.pi)
    return rel <= (hi - lo) + 1e-9


class TestSphereMeasure:
    def test_small_dims(self):
        assert sphere_measure(1) == pytest.approx(2.0)
        assert sphere_measure(2) == pytest.approx(2 * math.pi)
        assert sphere_measure(3) == pytest.approx(4 * math.pi)
        assert sphere_measure(4) == pytest.approx(2 * math.pi**2)


class TestNormalTangent:
    def test_square_corner(self, unit_square):
        N = normal_cone(unit_square, (1, 1))
        G = sorted(map(tuple, np.round(N.generators, 9)))
        assert G == [(0.0, 1.0), (1.0, 0.0)]

    def test_square_interior_zero(self, unit_square):
        assert normal_cone(unit_square, (0.5, 0.5)).is_zero

    def test_polygon_vertex_width(self):
        m = 64
        K = disk_polygon(1.0, m=m)
        q = K.vertices[0]
        N = normal_cone(K, q)
        # brute force the definition <x, v - q> <= 0 on sampled directions
        dirs = unit_directions(2, 4000, 11)
        by_def = np.max(dirs @ (K.vertices - q).T, axis=1) <= 1e-12
        by_cone = N.member_mask(dirs, tol=1e-9)
        assert np.array_equal(by_def, by_cone)
        ang = np.arctan2(N.generators[:, 1], N.generators[:, 0])
        width = abs(((ang.max() - ang.min()) + np.pi) % (2 * np.pi) - np.pi)
        assert width == pytest.approx(2 * np.pi / m, abs=1e-9)

    def test_tangent_square_origin(self, unit_square):
        T = tangent_cone(unit_square, (0, 0))
        assert T.contains((1, 0)) and T.contains((0, 1)) and T.contains((1, 2))
        assert not T.contains((-1, 0))

    def test_tangent_segment(self):
        seg = hull([(0, 0), (1, 0)])
        T = tangent_cone(seg, (0, 0))
        assert np.allclose(T.generators, [[1.0, 0.0]])
        assert np.linalg.matrix_rank(T.generators) == seg.dim_affine

    def test_tangent_spans_affine_hull(self, rng):
        # the tangent cone spans exactly the affine hull of the body
        for K in (
            random_polytope(rng, 2, 10),
            random_polytope(rng, 3, 12),
            hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]),
        ):
            q = K.vertices[0]
            T = tangent_cone(K, q)
            assert np.linalg.matrix_rank(T.generators, tol=1e-9) == K.dim_affine

    def test_outside_point_rejected(self, unit_square):
        with pytest.raises(InvalidInput):
            tangent_cone(unit_square, (2, 2))

    def test_duality_on_probes(self, rng):
        # dual of tangent cone equals -normal_cone on membership probes
        for n in (2, 3):
            K = random_polytope(rng, n, 14)
            q = K.vertices[rng.integers(K.nvertices)]
            T = tangent_cone(K, q)
            N = normal_cone(K, q)
            D = dual_cone(T)
            probes = unit_directions(n, 1000, 13)
            mN = N.member_mask(probes, tol=1e-8)
            mD = D.member_mask(-probes, tol=1e-8)
            assert np.mean(mN == mD) == 1.0

    def test_support_gap_membership_matches_cone(self, rng):
        K = random_polytope(rng, 2, 12)
        q = K.vertices[0]
        N = normal_cone(K, q)
        for _ in range(200):
            d = rng.standard_normal(2)
            d /= np.linalg.norm(d)
            assert in_normal_cone(K, q, d, 1e-9) == N.contains(d, 1e-9)


class TestDualCone:
    def test_halfline_to_halfspace(self):
        H = dual_cone(cone_from_generators([[0.0, 1.0]]))
        dirs = unit_directions(2, 720, 1)
        assert np.array_equal(H.member_mask(dirs), dirs[:, 1] >= -1e-9)

    def test_full_space_to_zero(self):
        C = cone_from_generators([[1, 0], [-1, 0], [0, 1], [0, -1]])
        assert dual_cone(C).is_zero

    def test_zero_to_full(self):
        Z = cone_from_generators([], dim=3)
        D = dual_cone(Z)
        dirs = unit_directions(3, 500, 2)
        assert np.all(D.member_mask(dirs))

    def test_2d_wedge_angles(self):
        # dual of the wedge [0, pi/3] is the wedge [pi/3 - pi/2, pi/2]
        C = cone_from_generators([[1, 0], [np.cos(np.pi / 3), np.sin(np.pi / 3)]])
        D = dual_cone(C)
        dirs = unit_directions(2, 360, 9)
        expected = wedge_membership_by_angle(np.pi / 3 - np.pi / 2, np.pi / 2, dirs)
        assert np.array_equal(D.member_mask(dirs), expected)

    def test_involution(self, rng):
        for n in (2, 3, 4):
            G = rng.standard_normal((5, n))
            C = cone_from_generators(G)
            CC = dual_cone(dual_cone(C))
            dirs = unit_directions(n, 800, 21)
            assert np.array_equal(
                C.member_mask(dirs, 1e-7), CC.member_mask(dirs, 1e-7)
            )

    def test_circular_cone_law(self):
        c = CircularCone(np.array([0.0, 0.0, 1.0]), np.pi / 6)
        d = c.dual()
        assert d.opening == pytest.approx(np.pi / 2 - np.pi / 6)
        dirs = unit_directions(3, 2000, 4)
        # membership in the dual circular cone == nonneg products with cone
        inner = dirs[c.member_mask(dirs)]
        for u in dirs[d.member_mask(dirs)][:50]:
            assert np.all(inner @ u >= -1e-9)

    def test_intersect_halfspace(self):
        C = cone_from_generators([[1, 0], [0, 1]])
        u = np.array([1.0, -1.0]) / np.sqrt(2)
        I = cone_intersect_halfspace(C, u)
        dirs = unit_directions(2, 720, 5)
        expected = C.member_mask(dirs) & (dirs @ u >= -1e-9)
        assert np.array_equal(I.member_mask(dirs), expected)


class TestCapBody:
    def test_segment_becomes_triangle(self):
        seg = hull([(0, 0), (1, 0)])
        tri = cap_body(seg, (0.5, 1.0))
        assert tri.nvertices == 3

    def test_inside_point_no_change(self, disk64):
        cap = cap_body(disk64, (0.1, 0.2))
        assert cap.nvertices == disk64.nvertices

    def test_support_in_apex_direction(self, disk64):
        cap = cap_body(disk64, (2, 0))
        assert support(cap, (1, 0)) == pytest.approx(2.0)

    def test_branch_formula_two_sides(self, disk64):
        assert cap_support(disk64, (2, 0), (1, 0)) == pytest.approx(2.0)
        assert cap_support(disk64, (2, 0), (-1, 0)) == pytest.approx(
            support(disk64, (-1, 0))
        )

    def test_branch_equals_direct_support(self, rng):
        # 500 directions x random (K, p) pairs
        for _ in range(20):
            K = random_polytope(rng, 2, 12)
            p = K.centroid() + rng.standard_normal(2) * (1.5 * K.diameter() + 0.5)
            cap = cap_body(K, p)
            dirs = unit_directions(2, 500, 17)
            got = cap_support_batch(K, p, dirs)
            want = np.max(dirs @ cap.vertices.T, axis=1)
            assert np.abs(got - want).max() < 1e-10


class TestSectorIntegrals:
    def test_exact_formula_values(self):
        assert sector_integral_exact(2, np.pi / 4) == pytest.approx(np.sqrt(2))
        assert sector_integral_exact(3, np.pi / 2) == pytest.approx(np.pi)

    def test_matches_quadrature(self, rng):
        for n in (2, 3, 4, 5):
            for _ in range(20):
                delta = rng.uniform(0.05, np.pi / 2)
                got = sector_integral_exact(n, delta)
                want = sector_flux_axis_quad(n, delta)
                tol = 1e-10 if n == 2 else 1e-3
                assert abs(got - want) < tol

    def test_out_of_range(self):
        with pytest.raises(InvalidInput):
            sector_integral_exact(2, 2.0)
        with pytest.raises(InvalidInput):
            sector_integral_lower_bound(2, np.pi)

    def test_lower_bound_value(self):
        assert sector_integral_lower_bound(2, np.pi / 2) == pytest.approx(
            2 * np.sin(np.pi / 8) ** 2
        )

    def test_lower_bound_against_flux_2d(self, rng):
        # worst case u on the boundary of the dual cone
        for _ in range(50):
            alpha = rng.uniform(0.1, np.pi - 0.1)
            u_angle = np.pi / 2 - alpha / 2  # boundary of the dual cone
            flux = sector_flux_offaxis_quad(2, alpha / 2, u_angle)
            assert flux >= sector_integral_lower_bound(2, alpha) - 1e-12

    def test_lower_bound_against_flux_3d_axis(self):
        alpha = np.pi / 2
        axis_cone = CircularCone(np.array([0.0, 0.0, 1.0]), alpha / 2)
        # u = axis is in the dual cone when alpha/2 <= pi/4
        assert axis_cone.dual().contains(axis_cone.axis)
        flux = sector_flux_offaxis_quad(3, alpha / 2, 0.0)
        assert flux >= sector_integral_lower_bound(3, alpha) - 1e-12


class TestNormalConeLimit:
    def test_edge_point(self, unit_square):
        rep = normal_cone_limit_report(
            unit_square, (1, 0.5), (1, 0), [0.5, 0.25, 0.1, 0.01], grid_size=2000
        )
        assert rep["sandwich_ok"]
        assert rep["metric_decreasing"]
        assert rep["final_metric"] < 0.05

    def test_corner_diagonal(self, unit_square):
        u = np.array([1.0, 1.0]) / np.sqrt(2)
        rep = normal_cone_limit_report(
            unit_square, (1, 1), u, [0.5, 0.25, 0.1, 0.01], grid_size=2000
        )
        assert rep["sandwich_ok"]
        assert rep["metric_decreasing"]
        assert rep["final_metric"] < 0.05

    def test_inward_direction_rejected(self, unit_square):
        with pytest.raises(PreconditionViolated):
            normal_cone_limit_report(unit_square, (1, 0.5), (-1, 0), [0.1])

    def test_upper_semicontinuity(self, unit_square):
        # accumulation directions land in N_K(p0) (angular tol 1e-3)
        rep = normal_cone_limit_report(
            unit_square, (1, 1), (1.0, 0.5), [0.1, 0.01, 0.001], grid_size=1000
        )
        assert rep["rows"][-1]["max_angle_to_base_cone"] < 1e-3
