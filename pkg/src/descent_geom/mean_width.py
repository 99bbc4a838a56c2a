"""Mean width of convex bodies and its first variation under cap-body
deformations.

The planar path is exact (mean width = perimeter / pi, by Cauchy's formula,
with a segment's perimeter counting both sides); higher dimensions use a
deterministic seeded sphere grid.  Sector-restricted integrals over normal
cones are exact angular integrals in the plane and grid-filtered sums
otherwise.  Summation runs in fixed index order, so identical inputs give
bit-identical results.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput, PreconditionViolated
from .geom_core import (
    TAU_PT,
    ConvexBody,
    as_point,
    contains,
    hausdorff,
    includes,
    unit_directions,
)
from .cones import (
    cap_body,
    normal_cone,
    normal_cone_mask,
    sphere_measure,
    tangent_cone,
)

_DEFAULT_GRID_SIZE = 20000
_grid_cache = {}


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes on S^{n-1} with weights summing to omega_n."""

    dim: int
    directions: np.ndarray
    weights: np.ndarray
    seed: int = 0

    @classmethod
    def make(cls, n, size=_DEFAULT_GRID_SIZE, seed=0):
        if n < 1:
            raise InvalidInput("dimension must be >= 1")
        if n == 1:
            size = 2
        dirs = unit_directions(n, size, seed)
        w = np.full(len(dirs), sphere_measure(n) / len(dirs))
        return cls(n, dirs, w, seed)

    @property
    def size(self):
        return len(self.directions)

    def to_dict(self):
        return {"dim": self.dim, "size": self.size, "seed": self.seed}

    @classmethod
    def from_dict(cls, d):
        return cls.make(int(d["dim"]), int(d["size"]), int(d.get("seed", 0)))


def default_grid(n, size=_DEFAULT_GRID_SIZE, seed=0) -> SphereGrid:
    key = (n, size, seed)
    if key not in _grid_cache:
        _grid_cache[key] = SphereGrid.make(n, size, seed)
    return _grid_cache[key]


def perimeter(K: ConvexBody) -> float:
    """Perimeter of a planar body; a segment counts both sides, a point is 0."""
    if K.dim != 2:
        raise DimensionMismatch("perimeter is a planar quantity")
    V = K.vertices
    if len(V) == 1:
        return 0.0
    return float(np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1).sum())


def mean_width_quadrature(K: ConvexBody, grid: SphereGrid) -> float:
    """(2/omega_n) * sum of weighted support values over the grid."""
    if grid.dim != K.dim:
        raise DimensionMismatch("grid dimension does not match the body")
    h = np.max(grid.directions @ K.vertices.T, axis=1)
    return float(2.0 / sphere_measure(K.dim) * (grid.weights @ h))


def mean_width(K: ConvexBody, grid: SphereGrid = None) -> float:
    """Mean width of K in its ambient dimension.

    Exact for n <= 2 (perimeter/pi, segment length in the line); quadrature
    on the given or default grid for n >= 3.  Strictly monotone under
    strict inclusion at quadrature resolution.
    """
    n = K.dim
    if n == 1:
        return float(K.vertices.max() - K.vertices.min())
    if n == 2:
        return perimeter(K) / math.pi
    if grid is None:
        grid = default_grid(n)
    return mean_width_quadrature(K, grid)


def mean_width_ratio(n: int, k: int) -> float:
    """Constant w_k(K)/w_n(K) between intrinsic and ambient mean widths."""
    if not 1 <= k < n:
        raise InvalidInput("need 1 <= k < n")
    om = sphere_measure
    return (om(k + 1) / om(k)) * (om(n) / om(n + 1))


def mean_width_intrinsic(K: ConvexBody, grid: SphereGrid = None) -> float:
    """Mean width of K computed inside its own affine hull."""
    from .geom_core import affine_basis, hull

    k = K.dim_affine
    if k == 0:
        return 0.0
    if k == K.dim:
        return mean_width(K, grid)
    c, B = affine_basis(K.vertices)
    flat = hull((K.vertices - c) @ B.T)
    return mean_width(flat, grid)


# -- sector integrals over normal cones --------------------------------------


def _cone_arcs_2d(gens, tol=1e-12):
    """Angular arcs [(start, width)] of a 2-D cone given by unit generators.

    Returns the string "full" for the whole plane; rays and lines come out
    as zero-width arcs (measure zero on the circle).
    """
    m = len(gens)
    if m == 0:
        return []
    ang = np.arctan2(gens[:, 1], gens[:, 0])
    if m == 1:
        return [(float(ang[0]), 0.0)]
    ang = np.sort(ang)
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * math.pi]]))
    imax = int(np.argmax(gaps))
    maxgap = float(gaps[imax])
    if maxgap < math.pi - 1e-9:
        return "full"
    width = 2.0 * math.pi - maxgap
    start = float(ang[(imax + 1) % m])
    if width <= tol:
        return [(start, 0.0)]
    if abs(width - math.pi) <= 1e-9:
        # all generators antipodal in pairs -> a line, not a halfplane
        spread = np.abs(((ang - ang[0]) + math.pi) % (2 * math.pi) - math.pi)
        if np.all((spread <= 1e-9) | (np.abs(spread - math.pi) <= 1e-9)):
            return [(start, 0.0), (start + math.pi, 0.0)]
    return [(start, width)]


def _intersect_arc(start, width, lo, hi):
    """Intersect the circular arc [start, start+width] with [lo, hi]
    (hi - lo <= 2*pi); returns sub-arcs as (a, b) pairs."""
    out = []
    for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
        a = max(start + shift, lo)
        b = min(start + shift + width, hi)
        if b > a + 1e-15:
            out.append((a, b))
    return out


def normal_sector_flux(K, q, u, grid=None, restrict=True, tol=1e-9):
    """Integral of <theta, u> over the sector of N_K(q) on the sphere,
    optionally restricted to the halfspace {u}* = {<theta, u> >= 0}.

    Exact angular integration in the plane; grid-filtered quadrature in
    higher dimensions.
    """
    q = as_point(q, K.dim)
    u = as_point(u, K.dim)
    if K.dim == 2:
        N = normal_cone(K, q)
        arcs = _cone_arcs_2d(N.generators)
        phi_u = math.atan2(u[1], u[0])
        nu = float(np.linalg.norm(u))
        if arcs == "full":
            arcs = [(phi_u - math.pi, 2.0 * math.pi)]
        total = 0.0
        for start, width in arcs:
            if width <= 0.0:
                continue
            if restrict:
                pieces = _intersect_arc(
                    start, width, phi_u - math.pi / 2.0, phi_u + math.pi / 2.0
                )
            else:
                pieces = [(start, start + width)]
            for a, b in pieces:
                total += nu * (math.sin(b - phi_u) - math.sin(a - phi_u))
        return total
    if grid is None:
        grid = default_grid(K.dim)
    mask = normal_cone_mask(K, q, grid.directions, tol=tol)
    proj = grid.directions @ u
    if restrict:
        mask = mask & (proj >= 0.0)
    return float(np.sum(grid.weights[mask] * proj[mask]))


def normal_sector_vector_flux(K, q, grid=None, tol=1e-9):
    """Vector integral of theta over the sector of N_K(q)."""
    q = as_point(q, K.dim)
    if K.dim == 2:
        N = normal_cone(K, q)
        arcs = _cone_arcs_2d(N.generators)
        if arcs == "full":
            arcs = [(0.0, 2.0 * math.pi)]
        v = np.zeros(2)
        for start, width in arcs:
            if width <= 0.0:
                continue
            a, b = start, start + width
            v += np.array([math.sin(b) - math.sin(a), math.cos(a) - math.cos(b)])
        return v
    if grid is None:
        grid = default_grid(K.dim)
    mask = normal_cone_mask(K, q, grid.directions, tol=tol)
    return grid.weights[mask] @ grid.directions[mask]


def cap_gradient(K: ConvexBody, p, grid=None):
    """Gradient of p -> mean_width(K^p) away from the boundary of K:
    (2/omega_n) * integral of theta over the sector of N_{K^p}(p)."""
    p = as_point(p, K.dim)
    cap = cap_body(K, p)
    if contains(cap, p, TAU_PT) and not any(
        np.linalg.norm(v - p) <= TAU_PT for v in cap.vertices
    ):
        return np.zeros(K.dim)  # p interior: the cap body is locally constant
    v = normal_sector_vector_flux(cap, p, grid)
    return 2.0 / sphere_measure(K.dim) * np.asarray(v)


def first_variation(K: ConvexBody, p0, u, eps, grid: SphereGrid = None):
    """Mean-width increment of the cap body K^{p0 + eps*u} split into its
    first-order term and remainder.

    The first-order term is (2/omega_n) * eps * flux of <theta, u> over
    the sector N_K(p0) n {u}*; the remainder is nonnegative up to
    quadrature tolerance and of order greater than one in eps.
    """
    p0 = as_point(p0, K.dim)
    u = as_point(u, K.dim)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    if not contains(K, p0, 1e-7 * (1.0 + K.diameter())):
        raise PreconditionViolated("p0 must lie on the boundary of K")
    if tangent_cone(K, p0, tol=1e-7 * (1.0 + K.diameter())).contains(u, tol=1e-8):
        raise PreconditionViolated("u lies in the tangent cone at p0")
    w0 = mean_width(K, grid)
    w1 = mean_width(cap_body(K, p0 + eps * u), grid)
    delta_w = w1 - w0
    flux = normal_sector_flux(K, p0, u, grid, restrict=True)
    first = 2.0 / sphere_measure(K.dim) * eps * flux
    return {
        "delta_w": delta_w,
        "first_term": first,
        "remainder": delta_w - first,
    }


# -- distance inequalities ----------------------------------------------------


def width_gap_constant(n: int) -> float:
    """Constant c0_n = 2^{-(n-1)} * omega_{n-1} / ((n-1) * omega_n) of the
    lower distance bound."""
    if n < 2:
        raise InvalidInput("n must be >= 2")
    return 2.0 ** (-(n - 1)) * sphere_measure(n - 1) / ((n - 1) * sphere_measure(n))


def lipschitz_constant(n: int) -> float:
    """Mean-width Lipschitz constant for self-expanding paths: pi in the
    plane (sharp), (n-1) * n^{n/2} * omega_n / omega_{n-1} for n >= 3."""
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if n == 1:
        return 1.0
    if n == 2:
        return math.pi
    return (n - 1) * n ** (n / 2.0) * sphere_measure(n) / sphere_measure(n - 1)


def width_distance_bounds(K1: ConvexBody, K2: ConvexBody, grid: SphereGrid = None):
    """Both sides of the distance-vs-width sandwich for nested K1 inside K2.

    lhs_lower = (c0_n / diam(K2)^{n-1})^{1/n} * dist(K1, K2) is at most
    delta_w^{1/n}, and delta_w = w(K2) - w(K1) is at most 2 * dist(K1, K2)
    (the mean of the support gap is at most its max).
    """
    if K1.dim != K2.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    if not includes(K2, K1, 1e-7 * (1.0 + K2.diameter())):
        raise PreconditionViolated("K1 must be included in K2")
    n = K1.dim
    dist = hausdorff(K1, K2)
    delta_w = mean_width(K2, grid) - mean_width(K1, grid)
    diam = K2.diameter()
    if diam <= 0.0:
        lhs = 0.0
    else:
        lhs = (width_gap_constant(n) / diam ** (n - 1)) ** (1.0 / n) * dist
    return {
        "dist": dist,
        "delta_w": delta_w,
        "lhs_lower": lhs,
        "delta_w_root": max(delta_w, 0.0) ** (1.0 / n),
        "upper": 2.0 * dist,
    }
