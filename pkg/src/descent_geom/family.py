"""Convex stratifications and sampled quasi-convex families.

A stratification is a strictly nested chain of bodies; a family is a
stratification indexed by mean width on a grid of resolution h.  Gaps are
filled by interpolation: the body at fraction f between nested K1 and K2
is K2 intersected with the outer parallel body of K1 at distance
f * dist(K1, K2), realized as a V-polytope.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    Degenerate,
    DimensionMismatch,
    InvalidInput,
    NotAChain,
    NumericalFailure,
    PreconditionViolated,
)
from .geom_core import (
    TAU_PT,
    ConvexBody,
    body_from_dict,
    hausdorff,
    hull,
    includes,
    unit_directions,
)
from .mean_width import SphereGrid, mean_width, width_gap_constant


@dataclass(frozen=True)
class Stratification:
    """Bodies strictly ordered by inclusion, smallest first."""

    bodies: tuple
    params: tuple = None

    @property
    def dim(self):
        return self.bodies[0].dim

    def __len__(self):
        return len(self.bodies)

    def to_dict(self):
        d = {"bodies": [K.to_dict() for K in self.bodies]}
        if self.params is not None:
            d["params"] = list(self.params)
        return d


@dataclass(frozen=True)
class Family(Stratification):
    """Stratification whose params are mean widths on a grid of step <= h."""

    h: float = 0.0

    @property
    def interval(self):
        return (self.params[0], self.params[-1])

    def body_at(self, w: float) -> ConvexBody:
        """Member whose mean-width parameter is nearest to w."""
        i = int(np.argmin(np.abs(np.asarray(self.params) - w)))
        return self.bodies[i]

    def to_dict(self):
        return {
            "interval": [self.params[0], self.params[-1]],
            "h": self.h,
            "params": list(self.params),
            "bodies": [K.to_dict() for K in self.bodies],
        }


def stratification_from_dict(d) -> Stratification:
    bodies = [body_from_dict(b) for b in d["bodies"]]
    return validate_stratification(bodies)


def family_from_dict(d, grid: SphereGrid = None) -> Family:
    bodies = [body_from_dict(b) for b in d["bodies"]]
    params = d.get("params")
    if params is None:
        params = [mean_width(K, grid) for K in bodies]
    h = float(d.get("h", max(np.diff(params), default=0.0)))
    return Family(tuple(bodies), tuple(float(p) for p in params), h)


def _inclusion_tol(K: ConvexBody, tol):
    return max(tol, 1e-9 * (1.0 + K.diameter()))


def validate_stratification(bodies, tol=TAU_PT, grid: SphereGrid = None) -> Stratification:
    """Sort bodies into an inclusion chain and verify strict nesting.

    Raises NotAChain(i, j) (original indices) on an incomparable pair and
    Degenerate when fewer than two distinct bodies remain.
    """
    if len(bodies) < 2:
        raise Degenerate("a stratification needs at least two bodies")
    dims = {K.dim for K in bodies}
    if len(dims) != 1:
        raise DimensionMismatch("bodies live in different dimensions")
    ws = [mean_width(K, grid) for K in bodies]
    order = sorted(range(len(bodies)), key=lambda i: ws[i])
    kept_idx = []
    for i in order:
        if kept_idx and hausdorff(bodies[kept_idx[-1]], bodies[i]) <= tol:
            continue  # duplicate body at tolerance
        kept_idx.append(i)
    if len(kept_idx) < 2:
        raise Degenerate("minimum and maximum coincide")
    for a, b in zip(kept_idx, kept_idx[1:]):
        if not includes(bodies[b], bodies[a], _inclusion_tol(bodies[b], tol)):
            raise NotAChain(a, b)
    chain = tuple(bodies[i] for i in kept_idx)
    params = tuple(ws[i] for i in kept_idx)
    return Stratification(chain, params)


# -- outer parallel bodies and interpolation ----------------------------------


def outer_parallel(K: ConvexBody, r: float, arc_points: int = 32) -> ConvexBody:
    """V-polytope approximation of K + r*B, by a ball mesh at each vertex.

    In the plane the mesh is an exact arc polygonalization with arc_points
    per vertex; the approximation is inscribed in the true parallel body.
    """
    if r < 0:
        raise InvalidInput("r must be nonnegative")
    if r == 0.0:
        return K
    n = K.dim
    if n == 1:
        return hull([[K.vertices.min() - r], [K.vertices.max() + r]])
    if n == 2:
        mesh = r * unit_directions(2, arc_points)
    else:
        mesh = r * unit_directions(n, max(arc_points, 2 * n), seed=1)
    pts = (K.vertices[:, None, :] + mesh[None, :, :]).reshape(-1, n)
    return hull(pts)


def _clip_polygon(subject, clip, eps=1e-12):
    """Sutherland-Hodgman: clip a polygon ring by a convex CCW polygon."""
    out = np.asarray(subject, dtype=float)
    m = len(clip)
    scale = 1.0 + float(np.abs(clip).max())
    for i in range(m):
        a = clip[i]
        e = clip[(i + 1) % m] - a
        if np.linalg.norm(e) <= TAU_PT:
            continue
        if len(out) == 0:
            break
        s = e[0] * (out[:, 1] - a[1]) - e[1] * (out[:, 0] - a[0])
        inside = s >= -eps * scale
        prev = np.roll(np.arange(len(out)), 1)
        crossing = inside != inside[prev]
        pieces = []
        for j in range(len(out)):
            if crossing[j]:
                k = prev[j]
                t = s[k] / (s[k] - s[j])
                pieces.append(out[k] + t * (out[j] - out[k]))
            if inside[j]:
                pieces.append(out[j])
        out = np.array(pieces) if pieces else np.zeros((0, 2))
    return out


def _intersect_bodies(A: ConvexBody, B: ConvexBody) -> ConvexBody:
    """Intersection of two V-polytopes (A full-dimensional in the plane,
    halfspace intersection in higher dimensions)."""
    n = A.dim
    if n == 1:
        lo = max(A.vertices.min(), B.vertices.min())
        hi = min(A.vertices.max(), B.vertices.max())
        if lo > hi:
            raise NumericalFailure("empty intersection")
        return hull([[lo], [hi]])
    if n == 2:
        if B.nvertices == 1:
            return B
        if B.dim_affine == 2:
            pts = _clip_polygon(A.vertices, B.vertices)
        else:
            pts = _clip_polygon(B.vertices, A.vertices)
        if len(pts) == 0:
            raise NumericalFailure("empty intersection")
        return hull(pts)
    from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

    if A.dim_affine < n or B.dim_affine < n:
        raise NumericalFailure(
            "halfspace intersection requires full-dimensional bodies in n >= 3"
        )
    eqA = ConvexHull(A.vertices).equations
    eqB = ConvexHull(B.vertices).equations
    halfspaces = np.vstack([eqA, eqB])
    interior = None
    for cand in (B.centroid(), 0.5 * (A.centroid() + B.centroid()), A.centroid()):
        margins = halfspaces[:, :-1] @ cand + halfspaces[:, -1]
        if np.all(margins < -1e-10):
            interior = cand
            break
    if interior is None:
        raise NumericalFailure("no interior point found for halfspace intersection")
    try:
        hi = HalfspaceIntersection(halfspaces, interior)
    except QhullError as e:
        raise NumericalFailure(f"halfspace intersection failed: {e}")
    return hull(hi.intersections)


def interpolate(K1: ConvexBody, K2: ConvexBody, f: float, arc_points: int = 32) -> ConvexBody:
    """Body at normalized fraction f in [0, 1] between nested K1 and K2:
    K2 intersected with the outer parallel body of K1 at f * dist(K1, K2).

    f = 0 reproduces K1 exactly; f = 1 fills K2 up to the mesh tolerance of
    the parallel body; the result is monotone in f.
    """
    if K1.dim != K2.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    if not includes(K2, K1, _inclusion_tol(K2, TAU_PT)):
        raise PreconditionViolated("K1 must be included in K2")
    if not -1e-12 <= f <= 1.0 + 1e-12:
        raise InvalidInput("fraction must lie in [0, 1]")
    f = min(max(f, 0.0), 1.0)
    if f == 0.0:
        return K1
    d = hausdorff(K1, K2)
    if d <= TAU_PT:
        return K2
    par = outer_parallel(K1, f * d, arc_points)
    return _intersect_bodies(par, K2)


# -- completion to a connected family -----------------------------------------


def _solve_width(K1, K2, target, grid, arc_points, tol_rel=1e-6, max_iter=200):
    """Monotone bisection of f -> mean_width(interpolate(K1, K2, f))."""
    w1 = mean_width(K1, grid)
    w2 = mean_width(K2, grid)
    gap = w2 - w1
    if gap <= 0:
        raise NumericalFailure("interpolation gap has nonpositive width")
    d = hausdorff(K1, K2)

    def body_at(f):
        if f <= 0.0:
            return K1
        return _intersect_bodies(outer_parallel(K1, f * d, arc_points), K2)

    tol = tol_rel * gap
    lo, hi = 0.0, 1.0
    body_hi = body_at(1.0)
    w_hi = mean_width(body_hi, grid)
    if target >= w_hi - tol:
        return body_hi
    best = None
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        B = body_at(mid)
        w = mean_width(B, grid)
        best = B
        if abs(w - target) <= tol:
            return B
        if w < target:
            lo = mid
        else:
            hi = mid
    if best is None:
        raise NumericalFailure("width bisection produced no iterate")
    raise NumericalFailure("width bisection did not converge within its cap")


def complete(strat: Stratification, h: float, grid: SphereGrid = None, arc_points: int = 32) -> Family:
    """Fill a stratification into a sampled connected family of step <= h.

    Original bodies appear at their own mean widths; each gap wider than h
    is subdivided and the interpolation fraction solved by bisection so the
    new members hit the width grid.
    """
    if h <= 0:
        raise InvalidInput("resolution h must be positive")
    ws = [mean_width(K, grid) for K in strat.bodies]
    bodies = []
    params = []
    for idx in range(len(ws) - 1):
        K1, K2 = strat.bodies[idx], strat.bodies[idx + 1]
        w1, w2 = ws[idx], ws[idx + 1]
        bodies.append(K1)
        params.append(w1)
        gap = w2 - w1
        if gap <= h:
            continue
        pieces = int(math.ceil(gap / (0.9 * h)))
        for j in range(1, pieces):
            target = w1 + gap * j / pieces
            B = _solve_width(K1, K2, target, grid, arc_points)
            bodies.append(B)
            params.append(mean_width(B, grid))
    bodies.append(strat.bodies[-1])
    params.append(ws[-1])
    for a, b in zip(params, params[1:]):
        if b - a > h * (1.0 + 1e-6) + 1e-9:
            raise NumericalFailure(
                f"completion left a width step of {b - a:.3g} > h = {h:.3g}"
            )
    return Family(tuple(bodies), tuple(params), h)


def is_connected(fam: Family, tol: float = 1.5, grid: SphereGrid = None) -> bool:
    """Resolution-relative connectedness surrogate.

    Checks that params are honest mean widths, steps do not exceed h, and
    each consecutive Hausdorff jump obeys the width-gap lower bound
    (c0_n / diam^{n-1}) * dist^n <= tol * delta_param.  A flat-zone jump
    (large Hausdorff distance at a small parameter gap) fails.
    """
    n = fam.dim
    fid = 1e-6 if n <= 2 else 1e-3
    diam = fam.bodies[-1].diameter()
    scale = 1.0 + abs(fam.params[-1])
    for K, p in zip(fam.bodies, fam.params):
        if abs(mean_width(K, grid) - p) > fid * scale:
            return False
    c0 = width_gap_constant(n) if n >= 2 else 1.0
    for i in range(len(fam) - 1):
        dp = fam.params[i + 1] - fam.params[i]
        if dp <= 0:
            return False
        if dp > fam.h * (1.0 + 1e-6) + fid * scale:
            return False
        dist = hausdorff(fam.bodies[i], fam.bodies[i + 1])
        lhs = c0 / max(diam, TAU_PT) ** (n - 1) * dist**n
        if lhs > tol * dp + fid * scale:
            return False
    return True


def family_distance(F: Family, G: Family, interval_tol: float = 1e-3) -> float:
    """Sup over a common width grid of the Hausdorff distance between the
    members of two families sharing the same width interval."""
    if F.dim != G.dim:
        raise DimensionMismatch("families live in different dimensions")
    a1, b1 = F.interval
    a2, b2 = G.interval
    span = max(b1 - a1, b2 - a2, TAU_PT)
    if abs(a1 - a2) > interval_tol * span or abs(b1 - b2) > interval_tol * span:
        raise InvalidInput("families cover different mean-width intervals")
    ws = sorted(set(F.params) | set(G.params))
    lo, hi = max(a1, a2), min(b1, b2)
    d = 0.0
    for w in ws:
        if w < lo - interval_tol * span or w > hi + interval_tol * span:
            continue
        d = max(d, hausdorff(F.body_at(w), G.body_at(w)))
    return d


def bracket_body(fam: Family, K: ConvexBody, tol=TAU_PT):
    """Indices (i1, i2) of the largest member inside K and the smallest
    member containing K; either may be None when no member qualifies."""
    i1 = None
    i2 = None
    for i, Q in enumerate(fam.bodies):
        if includes(K, Q, _inclusion_tol(K, tol)):
            i1 = i
    for i in reversed(range(len(fam))):
        if includes(fam.bodies[i], K, _inclusion_tol(fam.bodies[i], tol)):
            i2 = i
    return i1, i2
