"""Monte-Carlo explorer for the Macbeath point of a V-polytope.

The Macbeath point of a convex body ``K`` maximises
``f(x) = vol(K ∩ (2x - K))``. Here ``f`` is estimated by uniform sampling in
the bounding box of ``K`` with a fixed sample set (common random numbers),
maximised by a coordinate pattern search, and the result is scored by the
smallest ``lam`` with ``K - p ⊂ -lam (K - p)``.

This is numerical evidence only. Exact volumes are computed for polygons as a
cross-check; nothing is attempted for curved bodies.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc as stats_qmc

from .errors import DegenerateCloud, Unbounded
from .geom import DEFAULT_TOL, as_points
from .polarity import enumerate_vertices

MEMBER_EPS = 1e-12


@dataclass(frozen=True)
class HullH:
    """``conv(points) = {y : A y <= b}`` together with its vertices."""

    A: np.ndarray
    b: np.ndarray
    vertices: np.ndarray

    @property
    def dim(self):
        return self.A.shape[1]

    def contains(self, Y, eps=MEMBER_EPS):
        Y = np.atleast_2d(Y)
        scale = 1.0 + np.abs(self.b)
        return np.all(Y @ self.A.T - self.b <= eps * scale, axis=1)

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def hull_halfspaces(points, tol=DEFAULT_TOL):
    """H-representation of ``conv(points)`` through two polar transforms.

    With ``g`` the mean of the points (interior for a full-dimensional cloud),
    the vertices ``u_k`` of ``(K - g)°`` give ``K = {y : <y - g, u_k> <= 1}``,
    and the vertices of that system shifted by ``g`` are the vertices of ``K``.
    """
    K = as_points(points)
    g = K.mean(axis=0)
    try:
        U = enumerate_vertices(K - g, tol).vertices
        V = enumerate_vertices(U, tol).vertices + g
    except Unbounded:
        raise DegenerateCloud("cloud is not full-dimensional")
    return HullH(U, 1.0 + U @ g, V)


def _as_hull(K):
    return K if isinstance(K, HullH) else hull_halfspaces(K)


def _box_samples(H, samples, seed, qmc=False):
    lo, hi = H.bounding_box()
    if qmc:
        U = stats_qmc.Sobol(H.dim, scramble=True, seed=seed).random(samples)
    else:
        U = np.random.default_rng(seed).random((samples, H.dim))
    return lo + (hi - lo) * U, float(np.prod(hi - lo))


class _CRNObjective:
    """Sample count of ``K ∩ (2x - K)`` on a frozen sample set."""

    def __init__(self, H, samples, seed, qmc=True):
        self.H = H
        Y, self.box_volume = _box_samples(H, samples, seed, qmc)
        self.Y = Y[H.contains(Y)]
        self.n = samples
        self.evaluations = 0

    def count(self, x):
        self.evaluations += 1
        return int(np.count_nonzero(self.H.contains(2.0 * np.asarray(x) - self.Y)))

    def estimate(self, x):
        return _estimate(self.count(x), self.n, self.box_volume)


def _estimate(hits, n, box_volume):
    f = hits / n
    return box_volume * f, box_volume * math.sqrt(f * (1.0 - f) / n)


def intersection_volume_mc(K, x, samples=20_000, seed=0):
    """Estimate ``vol(K ∩ (2x - K))`` and its binomial standard error."""
    H = _as_hull(K)
    Y, box_volume = _box_samples(H, samples, seed)
    hits = np.count_nonzero(H.contains(Y) & H.contains(2.0 * np.asarray(x, dtype=float) - Y))
    return _estimate(int(hits), samples, box_volume)


def _ccw(P):
    c = P.mean(axis=0)
    return P[np.argsort(np.arctan2(P[:, 1] - c[1], P[:, 0] - c[0]))]


def _clip(subject, a, b):
    # keep the part of subject left of the directed edge a -> b
    out = []
    n = len(subject)

    def side(p):
        return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])

    for i in range(n):
        p, q = subject[i], subject[(i + 1) % n]
        sp, sq = side(p), side(q)
        if sp >= 0:
            out.append(p)
        if (sp >= 0) != (sq >= 0):
            t = sp / (sp - sq)
            out.append(p + t * (q - p))
    return out


def polygon_area(P):
    if len(P) < 3:
        return 0.0
    P = np.asarray(P)
    x, y = P[:, 0], P[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def exact_intersection_area_2d(K, x):
    """Exact ``area(K ∩ (2x - K))`` for a polygon by Sutherland-Hodgman clipping."""
    H = _as_hull(K)
    if H.dim != 2:
        raise ValueError("exact clipping is only implemented in the plane")
    P = _ccw(H.vertices)
    R = _ccw(2.0 * np.asarray(x, dtype=float) - H.vertices)
    poly = list(P)
    for i in range(len(R)):
        if not poly:
            break
        poly = _clip(poly, R[i], R[(i + 1) % len(R)])
    return polygon_area(poly)


def _ray_exit(H, p, direction, rel_tol=1e-12):
    """Largest t with ``p + t * direction`` in K, by bisection on membership."""
    lo, hi = 0.0, 1.0
    while H.contains(p + hi * direction)[0]:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            return math.inf
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if H.contains(p + mid * direction)[0]:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def inclusion_factor(K, p):
    """Smallest ``lam`` with ``K - p ⊂ -lam (K - p)``.

    For each vertex ``u`` the ray from ``p`` away from ``u`` leaves ``K`` at
    ``p - t_u (u - p)``; the factor is ``max_u 1 / t_u``.
    """
    H = _as_hull(K)
    p = np.asarray(p, dtype=float)
    if not H.contains(p)[0]:
        raise ValueError("point is not in K")
    worst = 0.0
    for u in H.vertices:
        t = _ray_exit(H, p, -(u - p))
        worst = max(worst, 1.0 / t if t > 0 else math.inf)
    return worst


def inclusion_factor_exact(K, p):
    """Closed form of :func:`inclusion_factor` from the facet inequalities."""
    H = _as_hull(K)
    p = np.asarray(p, dtype=float)
    slack = H.b - H.A @ p
    worst = 0.0
    for u in H.vertices:
        rate = H.A @ (p - u)
        pos = rate > 0
        t = float(np.min(slack[pos] / rate[pos])) if pos.any() else math.inf
        worst = max(worst, 1.0 / t if t > 0 else math.inf)
    return worst


@dataclass(frozen=True)
class MacbeathReport:
    point: np.ndarray
    volume_at_point: float
    volume_stderr: float
    inclusion_factor: float
    samples: int
    seed: int
    evaluations: int = 0


def _pattern_search(obj, x0, step, min_step):
    x = np.array(x0, dtype=float)
    best = obj.count(x)
    d = len(x)
    while step >= min_step:
        cand = None
        for j in range(d):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[j] += sgn * step
                c = obj.count(y)
                if c > best and (cand is None or c > cand[1]):
                    cand = (y, c)
        if cand is None:
            step *= 0.5
        else:
            x, best = cand
    return x, best


def _quadratic_refine(obj, x, rho):
    """Jump to the maximiser of a least-squares quadratic fitted to the counts
    on a grid of half-width ``rho`` around ``x``; stay put if the fit is not
    concave or its maximiser leaves the grid."""
    d = len(x)
    k = {1: 6, 2: 4, 3: 2}.get(d, 1)
    grid = np.array(list(itertools.product(np.linspace(-1.0, 1.0, 2 * k + 1), repeat=d))) * rho
    counts = np.array([obj.count(x + g) for g in grid], dtype=float)
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    F = np.column_stack([np.ones(len(grid)), grid] + [grid[:, i] * grid[:, j] for i, j in pairs])
    coef = np.linalg.lstsq(F, counts, rcond=None)[0]
    g = coef[1:1 + d]
    H = np.zeros((d, d))
    for (i, j), a in zip(pairs, coef[1 + d:]):
        H[i, j] += a
        H[j, i] += a
    if np.max(np.linalg.eigvalsh(H)) >= 0:
        return x
    dx = -np.linalg.solve(H, g)
    return x + dx if np.max(np.abs(dx)) <= rho else x


def find_macbeath_point(K, samples=2**16, seed=0, restarts=2, min_step_rel=1e-4, qmc=True, refine_rel=0.1):
    """Estimate the Macbeath point of ``conv(K)`` and its inclusion factor.

    The Macbeath point commutes with affine maps, so the search runs on a
    whitened copy of ``K`` (vertex covariance equal to the identity) and the
    result is mapped back. There the pattern search starts at the vertex
    centroid and at ``restarts`` random convex combinations of vertices. Only
    strict improvements of the sample count are accepted, so for a centrally
    symmetric body the search stays at its center, where the count is the
    largest possible.

    The best pattern-search point is then moved to the maximiser of a local
    quadratic fit of the counts (grid half-width ``refine_rel`` times the
    smallest box side). This averages out most of the sampling noise. The
    fit is skipped when the count already equals the number of samples in
    ``K``, since no point can do better on the frozen sample set.
    By Brunn-Minkowski ``f^(1/d)`` is concave, so the landscape is unimodal
    and a local fit is meaningful.

    ``qmc`` switches the frozen sample set from plain uniform draws to a
    scrambled Sobol sequence, which is still uniform on the box but has much
    lower discrepancy; the reported standard error is the binomial one in
    either case and so is conservative for Sobol samples.
    """
    H0 = _as_hull(K)
    g = H0.vertices.mean(axis=0)
    R = np.linalg.cholesky(np.cov(H0.vertices, rowvar=False, bias=True).reshape(H0.dim, H0.dim))
    H = hull_halfspaces(np.linalg.solve(R, (H0.vertices - g).T).T)
    obj = _CRNObjective(H, samples, seed, qmc)
    lo, hi = H.bounding_box()
    width = float(np.min(hi - lo))
    rng = np.random.default_rng(seed + 1)
    starts = [H.vertices.mean(axis=0)]
    for _ in range(restarts):
        w = rng.dirichlet(np.ones(len(H.vertices)))
        starts.append(w @ H.vertices)
    best_x, best_c = None, -1
    for x0 in starts:
        x, c = _pattern_search(obj, x0, 0.25 * width, min_step_rel * width)
        if c > best_c:
            best_x, best_c = x, c
    # a full count means every sample is reflected into K; nothing to refine
    if refine_rel > 0 and best_c < len(obj.Y):
        best_x = _quadratic_refine(obj, best_x, refine_rel * width)
        best_c = obj.count(best_x)
    vol, err = _estimate(best_c, obj.n, obj.box_volume)
    jac = abs(float(np.prod(np.diag(R))))
    point = g + R @ best_x
    return MacbeathReport(
        point=point,
        volume_at_point=vol * jac,
        volume_stderr=err * jac,
        inclusion_factor=inclusion_factor(H0, point),
        samples=samples,
        seed=seed,
        evaluations=obj.evaluations,
    )
