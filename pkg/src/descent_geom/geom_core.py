"""V-polytope geometry: convex hulls, support functions, nearest-point
projection, containment and Hausdorff distance.

Bodies are stored canonically as the extreme points of their convex hull.
All operations are pure functions over immutable arrays; nothing here keeps
global state, so concurrent use on shared bodies is safe.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import DimensionMismatch, InvalidInput, NumericalFailure

# Point-identity tolerance used by canonicalization and deduplication.
TAU_PT = 1e-9

# Rank threshold factor for affine-hull dimension detection.
_RANK_RTOL = 1e-8

MAX_DIM = 8


def as_point(x, dim=None):
    """Coerce to a finite 1-D float vector, optionally checking its dimension."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidInput(f"expected a coordinate vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidInput("coordinates must be finite")
    if p.size > MAX_DIM:
        raise InvalidInput(f"dimension {p.size} exceeds supported maximum {MAX_DIM}")
    if dim is not None and p.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.size}")
    return p


def as_points(pts):
    """Coerce to a nonempty (m, n) float array of finite points."""
    try:
        P = np.asarray(pts, dtype=float)
    except ValueError:
        raise DimensionMismatch("points have mixed dimensions")
    if P.ndim == 1:
        P = P[None, :]
    if P.ndim != 2 or P.shape[0] == 0 or P.shape[1] == 0:
        raise InvalidInput(f"expected a nonempty point list, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InvalidInput("coordinates must be finite")
    if P.shape[1] > MAX_DIM:
        raise InvalidInput(f"dimension {P.shape[1]} exceeds supported maximum {MAX_DIM}")
    return P


def dedup_points(P, tol=TAU_PT):
    """Drop points within tol of an already-kept point (first occurrence wins)."""
    if len(P) == 1:
        return P.copy()
    tree = cKDTree(P)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    drop = np.zeros(len(P), dtype=bool)
    for i, j in pairs:
        lo, hi = (i, j) if i < j else (j, i)
        if not drop[lo]:
            drop[hi] = True
    return P[~drop]


def affine_basis(P):
    """Orthonormal basis of the affine hull of the rows of P.

    Returns (centroid, basis) where basis has shape (k, n) and k is the
    affine dimension detected by an SVD rank cut at _RANK_RTOL * s_max.
    """
    c = P.mean(axis=0)
    Q = P - c
    if len(P) == 1:
        return c, np.zeros((0, P.shape[1]))
    _, s, Vt = np.linalg.svd(Q, full_matrices=False)
    if s[0] <= 0.0:
        return c, np.zeros((0, P.shape[1]))
    k = int(np.sum(s > _RANK_RTOL * s[0]))
    return c, Vt[:k]


@dataclass(frozen=True)
class ConvexBody:
    """Convex body given by the extreme points of its hull (canonical form).

    In ambient dimension 2 the vertices are stored in counterclockwise
    order starting from the lexicographically smallest one; in other
    dimensions rows are sorted lexicographically.
    """

    vertices: np.ndarray
    dim_affine: int = field(default=-1)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def nvertices(self):
        return self.vertices.shape[0]

    def centroid(self):
        return self.vertices.mean(axis=0)

    def diameter(self):
        V = self.vertices
        if len(V) == 1:
            return 0.0
        d2 = ((V[:, None, :] - V[None, :, :]) ** 2).sum(axis=2)
        return float(np.sqrt(d2.max()))

    def translate(self, t):
        return ConvexBody(self.vertices + as_point(t, self.dim), self.dim_affine)

    def scale(self, s, center=None):
        c = self.centroid() if center is None else as_point(center, self.dim)
        return hull(c + s * (self.vertices - c))

    def to_dict(self):
        return {"dim": int(self.dim), "vertices": self.vertices.tolist()}

    def __repr__(self):
        return f"ConvexBody(dim={self.dim}, nvertices={self.nvertices}, dim_affine={self.dim_affine})"


def body_from_dict(d):
    """Load a body from its JSON object form, re-canonicalizing."""
    try:
        verts = d["vertices"]
    except (KeyError, TypeError):
        raise InvalidInput("body JSON must have a 'vertices' field")
    P = as_points(verts)
    if "dim" in d and int(d["dim"]) != P.shape[1]:
        raise DimensionMismatch("declared dim does not match vertex data")
    return hull(P)


def _canonical_order(V, n):
    if n == 2 and len(V) >= 2:
        # V arrives in CCW order from Qhull; rotate to start at the lex-min.
        start = np.lexsort((V[:, 1], V[:, 0]))[0]
        return np.roll(V, -start, axis=0)
    order = np.lexsort(V.T[::-1])
    return V[order]


def hull(points) -> ConvexBody:
    """Convex hull of a point set as a canonical ConvexBody.

    The stored vertex list is exactly the set of extreme points, so
    hull(hull(P).vertices) == hull(P).
    """
    P = dedup_points(as_points(points))
    n = P.shape[1]
    c, B = affine_basis(P)
    k = B.shape[0]
    if k == 0:
        return ConvexBody(P[:1].copy(), 0)
    if k == 1:
        t = (P - c) @ B[0]
        V = np.vstack([P[np.argmin(t)], P[np.argmax(t)]])
        return ConvexBody(_canonical_order(V, n), 1)
    proj = (P - c) @ B.T
    if k == n:
        proj = P  # full-dimensional: hull in original coordinates
    try:
        h = ConvexHull(proj)
    except QhullError:
        try:
            h = ConvexHull(proj, qhull_options="QJ")
        except QhullError as e:  # pragma: no cover - pathological data
            raise NumericalFailure(f"convex hull computation failed: {e}")
    idx = h.vertices  # CCW when k == 2
    V = P[idx]
    if k == 2:
        # order canonically within the (possibly embedded) plane
        if n == 2:
            V = _canonical_order(V, 2)
        else:
            order = np.lexsort(V.T[::-1])
            # keep the cyclic ring order available via vertices of the
            # projected hull; embedded-plane bodies only need a stable order
            V = V[order]
    else:
        V = _canonical_order(V, n)
    return ConvexBody(np.ascontiguousarray(V), k)


def support(K: ConvexBody, x) -> float:
    """Support value of K in direction x: the max inner product over K."""
    x = as_point(x, K.dim)
    return float(np.max(K.vertices @ x))


def support_vertex(K: ConvexBody, x):
    """A vertex of K attaining the support value in direction x."""
    x = as_point(x, K.dim)
    return K.vertices[int(np.argmax(K.vertices @ x))]


def _project_segment(a, b, p):
    d = b - a
    dd = d @ d
    if dd <= 0.0:
        return a
    t = np.clip((p - a) @ d / dd, 0.0, 1.0)
    return a + t * d


def _project_2d(K: ConvexBody, p):
    V = K.vertices
    m = len(V)
    if m == 1:
        return V[0].copy()
    if m == 2 or K.dim_affine <= 1:
        return _project_segment(V[0], V[-1], p)
    # vertices are CCW: inside iff p is left of (or on) every edge
    nxt = np.roll(V, -1, axis=0)
    e = nxt - V
    w = p - V
    cross = e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]
    if np.all(cross >= -1e-12 * (1.0 + np.abs(cross).max())):
        return p.copy()
    ee = np.einsum("ij,ij->i", e, e)
    t = np.clip(np.einsum("ij,ij->i", w, e) / ee, 0.0, 1.0)
    proj = V + t[:, None] * e
    d2 = ((proj - p) ** 2).sum(axis=1)
    return proj[int(np.argmin(d2))].copy()


def _min_norm_point(P, eps, max_iter):
    """Wolfe's algorithm: the minimum-norm point of conv(rows of P).

    Active-set method; each major cycle adds the vertex most violating the
    optimality condition <x, p_i> >= |x|^2, each minor cycle restores the
    affinely-independent positive-weight support set.
    """
    m = P.shape[0]
    norms = np.einsum("ij,ij->i", P, P)
    scale = 1.0 + float(np.sqrt(norms.max()))
    j = int(np.argmin(norms))
    S = [j]
    lam = np.array([1.0])
    x = P[j].copy()
    for _ in range(max_iter):
        dots = P @ x
        xx = x @ x
        j = int(np.argmin(dots))
        if dots[j] >= xx - eps * scale:
            return x
        if j in S:
            return x  # numerically stalled at optimum
        S.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(max_iter):
            B = P[S]
            k = len(S)
            A = np.empty((k + 1, k + 1))
            A[:k, :k] = B @ B.T
            A[:k, k] = 1.0
            A[k, :k] = 1.0
            A[k, k] = 0.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            try:
                a = np.linalg.solve(A, rhs)[:k]
            except np.linalg.LinAlgError:
                a = np.linalg.lstsq(A, rhs, rcond=None)[0][:k]
            if np.all(a > 1e-13):
                lam = a
                x = a @ B
                break
            neg = a <= 1e-13
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = lam[neg] / (lam[neg] - a[neg])
            theta = float(np.min(steps[np.isfinite(steps)], initial=1.0))
            theta = min(max(theta, 0.0), 1.0)
            lam = theta * a + (1.0 - theta) * lam
            lam[lam < 1e-13] = 0.0
            keep = lam > 0.0
            if not np.any(keep):
                keep[int(np.argmax(lam))] = True
            S = [s for s, kp in zip(S, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        else:  # pragma: no cover
            raise NumericalFailure("minor cycle of min-norm solver did not terminate")
    raise NumericalFailure("min-norm point solver exceeded its iteration cap")


def project(K: ConvexBody, p, max_iter=10000):
    """Nearest point of K to p.

    Exact edge enumeration in ambient dimension <= 2; Wolfe's min-norm
    active-set method otherwise.  The result q satisfies the optimality
    certificate <p - q, v - q> <= 1e-8 * (1 + |p - q|) over all vertices v;
    failure to reach it raises NumericalFailure rather than returning.
    """
    p = as_point(p, K.dim)
    if K.dim == 1:
        lo, hi = K.vertices.min(), K.vertices.max()
        return np.array([min(max(p[0], lo), hi)])
    if K.dim == 2:
        return _project_2d(K, p)
    if K.nvertices == 1:
        return K.vertices[0].copy()
    x = _min_norm_point(K.vertices - p, eps=1e-10, max_iter=max_iter)
    q = p + x
    gap = float(np.max((K.vertices - q) @ (p - q)))
    if gap > 1e-8 * (1.0 + np.linalg.norm(p - q)):
        raise NumericalFailure(f"projection certificate violated (gap {gap:.3e})")
    return q


def dist_to_body(K: ConvexBody, p) -> float:
    p = as_point(p, K.dim)
    return float(np.linalg.norm(project(K, p) - p))


def contains(K: ConvexBody, p, tol=TAU_PT) -> bool:
    """True iff p lies within distance tol of K."""
    if tol < 0:
        raise InvalidInput("tol must be nonnegative")
    return dist_to_body(K, p) <= tol


def includes(A: ConvexBody, B: ConvexBody, tol=TAU_PT) -> bool:
    """True iff every vertex of B lies in A (up to tol), i.e. B is inside A."""
    if A.dim != B.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    return all(contains(A, v, tol) for v in B.vertices)


def hausdorff(A: ConvexBody, B: ConvexBody) -> float:
    """Hausdorff distance between two bodies.

    Exact for V-polytopes: the directed distance from a convex body is
    attained at an extreme point, so it suffices to project vertices.
    """
    if A.dim != B.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    d = 0.0
    for v in A.vertices:
        d = max(d, np.linalg.norm(project(B, v) - v))
    for v in B.vertices:
        d = max(d, np.linalg.norm(project(A, v) - v))
    return float(d)


def mix(A: ConvexBody, B: ConvexBody, lam: float) -> ConvexBody:
    """Minkowski combination lam*A + (1-lam)*B as a hull of pairwise sums."""
    if A.dim != B.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    sums = lam * A.vertices[:, None, :] + (1.0 - lam) * B.vertices[None, :, :]
    return hull(sums.reshape(-1, A.dim))


def unit_directions(n, size, seed=0):
    """Deterministic unit-direction sample on S^{n-1}.

    n=1: both signs; n=2: equally spaced angles offset off the axes;
    n=3: seeded Fibonacci spiral; n>=4: seeded Gaussian normalization.
    """
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        ang = (np.arange(size) + 0.5) * (2.0 * np.pi / size)
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if n == 3:
        i = np.arange(size)
        z = 1.0 - (2.0 * i + 1.0) / size
        golden = np.pi * (3.0 - np.sqrt(5.0))
        phase = (seed % 997) * 0.618033988749895
        phi = i * golden + phase
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((size, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return X
