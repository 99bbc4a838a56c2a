import math

import numpy as np
import pytest

from descent_geom.errors import PreconditionViolated
from descent_geom.cones import normal_cone, sphere_measure
from descent_geom.geom_core import hull
from descent_geom.mean_width import normal_sector_flux
from descent_geom.sep import (
    Polyline,
    is_sep,
    length_bound_check,
    lipschitz_ratio,
    meanwidth_param,
    polyline_from_dict,
    prefix_hulls,
)
from descent_geom.descent import cantor_graph, log_spiral

from .oracles import sep_bruteforce


def staircase():
    return Polyline.make([(0, 0), (1, 0), (1, 1), (2, 1)])


def half_circle(m=200):
    th = np.linspace(0, np.pi, m)
    return Polyline.make(np.column_stack([np.cos(th), np.sin(th)]))


def monotone_polyline(rng, npts):
    steps = rng.random((npts - 1, 2)) * 0.5
    return Polyline.make(np.vstack([[0, 0], np.cumsum(steps, axis=0)]))


def perturbed_polyline(rng, npts, noise):
    g = monotone_polyline(rng, npts)
    return Polyline.make(g.points + rng.standard_normal(g.points.shape) * noise)


class TestPolyline:
    def test_consecutive_dedup(self):
        g = Polyline.make([(0, 0), (0, 0), (1, 0), (1, 0), (2, 0)])
        assert g.npoints == 3

    def test_length_and_point_at(self):
        g = staircase()
        assert g.length() == pytest.approx(3.0)
        assert np.allclose(g.point_at(1.5), (1, 0.5))

    def test_round_trip(self):
        g = half_circle(17)
        g2 = polyline_from_dict(g.to_dict())
        assert np.allclose(g.points, g2.points)


class TestIsSep:
    def test_staircase(self):
        assert is_sep(staircase())["ok"]

    def test_backtrack_witness(self):
        res = is_sep(Polyline.make([(0, 0), (1, 0), (0.5, 0)]))
        assert not res["ok"]
        w = res["witness"]
        assert np.allclose(w["y"], (0, 0))
        assert np.allclose(w["a"], (1, 0))
        assert np.allclose(w["d"], (-1, 0))

    def test_supercritical_spiral(self):
        sp = log_spiral(0.28, 3.0, 1500)
        assert is_sep(sp)["ok"]
        assert sep_bruteforce(sp.points, refine=4)

    def test_subcritical_spiral_fails_both_ways(self):
        phi = np.linspace(-4 * np.pi, 0, 700)
        P = np.exp(0.2 * phi)[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
        sp = Polyline.make(P)
        assert not is_sep(sp)["ok"]
        assert not sep_bruteforce(sp.points, refine=4)

    def test_half_circle(self):
        assert is_sep(half_circle())["ok"]

    def test_full_circle_fails(self):
        th = np.linspace(0, 1.8 * np.pi, 200)
        g = Polyline.make(np.column_stack([np.cos(th), np.sin(th)]))
        assert not is_sep(g)["ok"]

    def test_cantor_graph(self):
        assert is_sep(cantor_graph(8))["ok"]

    def test_agrees_with_bruteforce_on_corpus(self, rng):
        agree = 0
        total = 0
        for _ in range(60):
            g = monotone_polyline(rng, int(rng.integers(5, 40)))
            total += 1
            agree += is_sep(g)["ok"] == sep_bruteforce(g.points)
        for noise in (0.001, 0.05, 0.4):
            for _ in range(40):
                g = perturbed_polyline(rng, int(rng.integers(5, 40)), noise)
                total += 1
                agree += is_sep(g)["ok"] == sep_bruteforce(g.points)
        assert agree == total

    def test_3d_monotone(self, rng):
        steps = rng.random((30, 3))
        g = Polyline.make(np.vstack([np.zeros(3), np.cumsum(steps, axis=0)]))
        assert is_sep(g)["ok"]


class TestMeanWidthParam:
    def test_single_point(self):
        assert meanwidth_param(Polyline.make([(2, 3)])) == [0.0]

    def test_segment_linear_in_arclength(self):
        k = 9
        L = 2.0
        xs = np.linspace(0, L, k)
        g = Polyline.make(np.column_stack([xs, np.zeros(k)]))
        ws = meanwidth_param(g)
        assert np.allclose(ws, 2 * xs / math.pi)

    def test_strictly_increasing_on_spiral(self):
        ws = meanwidth_param(log_spiral(0.3, 2.0, 400))
        assert np.all(np.diff(ws) > 0)

    def test_non_sep_rejected(self):
        with pytest.raises(PreconditionViolated):
            meanwidth_param(Polyline.make([(0, 0), (1, 0), (0.5, 0)]))


class TestLipschitzAndLength:
    def test_segment_ratio(self):
        g = Polyline.make([(0, 0), (1, 0), (2, 0)])
        res = lipschitz_ratio(g)
        assert res["max_ratio"] == pytest.approx(math.pi / 2)
        assert res["bound"] == pytest.approx(math.pi)

    def test_half_circle_within_bound(self):
        res = lipschitz_ratio(half_circle())
        assert res["max_ratio"] <= math.pi + 1e-2

    def test_spiral_within_bound(self):
        res = lipschitz_ratio(log_spiral(0.28, 3.0, 1500))
        assert res["max_ratio"] <= math.pi + 1e-2
        # regression: the near-critical spiral runs close to the sharp bound
        assert res["max_ratio"] == pytest.approx(3.1049, abs=2e-3)

    def test_length_bounds(self):
        seg = Polyline.make([(0, 0), (3, 0)])
        res = length_bound_check(seg)
        assert res["bound_ok"]
        assert res["bound"] == pytest.approx(2 * res["length"])
        res = length_bound_check(half_circle())
        assert res["bound_ok"]
        ratio = res["length"] / res["w_hull"]
        assert 1.5 <= ratio <= math.pi


class TestVariationalProperties:
    def test_acute_angles(self, rng):
        # for SEP vertices, every pair of earlier points subtends an angle
        # at most pi/2 at the current vertex
        for g in (staircase(), half_circle(60), log_spiral(0.3, 2.0, 200)):
            P = g.points
            for i in range(2, len(P), max(1, len(P) // 25)):
                rel = P[:i] - P[i]
                M = rel @ rel.T
                assert M.min() >= -1e-9 * (1 + (rel**2).sum())

    def test_discrete_differential_inclusion(self):
        # each outgoing direction lies in the normal cone of the prefix hull
        for g in (staircase(), half_circle(80), log_spiral(0.3, 2.0, 150)):
            P = g.points
            hulls = prefix_hulls(g)
            for i in range(1, len(P) - 1):
                d = P[i + 1] - P[i]
                d = d / np.linalg.norm(d)
                N = normal_cone(hulls[i], P[i])
                assert N.contains(d, tol=1e-6)

    def test_discrete_width_growth_inequality(self):
        # dw/ds >= (2/omega_n) * flux of <theta, d> over the prefix normal
        # sector; the residual (near-zero a.e.) is recorded, not asserted
        g = log_spiral(0.3, 2.0, 300)
        P = g.points
        ws = meanwidth_param(g)
        hulls = prefix_hulls(g)
        om = sphere_measure(2)
        residuals = []
        for i in range(1, len(P) - 1, 7):
            d = P[i + 1] - P[i]
            ds = np.linalg.norm(d)
            d = d / ds
            flux = normal_sector_flux(hulls[i], P[i], d, restrict=False)
            lhs = (ws[i + 1] - ws[i]) / ds
            rhs = 2.0 / om * flux
            assert lhs >= rhs - 1e-6
            residuals.append(lhs - rhs)
        print(f"mean width-growth residual: {np.mean(residuals):.2e}")
