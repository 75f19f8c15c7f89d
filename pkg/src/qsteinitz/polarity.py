"""Polar duality between point clouds and unit-halfspace systems.

A cloud ``Q`` (rows of an ``(m, d)`` array) and the system
``{x : <x, q> <= 1 for q in Q}`` are the same data read two ways, so taking the
polar is a relabelling. Everything quantitative goes through
:func:`enumerate_vertices`, a brute-force solve over all d-subsets of normals.
It is deliberately simple since it is what the certificates rest on.
"""

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    CenterNotInterior,
    DimensionTooLarge,
    HypothesisViolated,
    Unbounded,
    VerificationFailed,
)
from .geom import DEFAULT_TOL, as_points, batched_solve

SUBSET_BUDGET = 5_000_000
MERGE_EPS = 1e-9
_CHUNK = 20_000


@dataclass(frozen=True)
class UnitHalfspaceSystem:
    """The polyhedron ``{x : <x, n_i> <= 1}`` given by its normals."""

    normals: np.ndarray

    @property
    def dim(self):
        return self.normals.shape[1]


@dataclass(frozen=True)
class VertexEnumeration:
    vertices: np.ndarray
    defining_subsets: list

    def __len__(self):
        return len(self.vertices)


def polar_of_cloud(points):
    return UnitHalfspaceSystem(as_points(points))


def cloud_of_polar(system):
    """Inverse of :func:`polar_of_cloud`: the normals as a point cloud."""
    return np.array(system.normals, dtype=float)


def _normals(system):
    if isinstance(system, UnitHalfspaceSystem):
        return system.normals
    return as_points(system)


def _subsets(m, k, budget):
    count = math.comb(m, k)
    if count > budget:
        raise DimensionTooLarge(f"C({m},{k}) = {count} subsets exceeds budget {budget}")
    it = itertools.combinations(range(m), k)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.intp).reshape(len(chunk), k)


def _null_directions(rows):
    """Generalised cross product of a stack of (d-1) x d matrices."""
    k, dm1, d = rows.shape
    out = np.empty((k, d))
    for j in range(d):
        minor = np.delete(rows, j, axis=2)
        out[:, j] = (-1) ** j * (np.linalg.det(minor) if dm1 else 1.0)
    return out


def find_recession_ray(system, tol=DEFAULT_TOL, budget=SUBSET_BUDGET):
    """Return a unit ray ``u`` with ``<u, n_i> <= 0`` for all i, or None.

    A nonzero recession cone either contains a line (normals do not span) or is
    pointed, in which case one of its extreme rays is the common null
    direction of some d-1 linearly independent normals.
    """
    N = _normals(system)
    m, d = N.shape
    norms = np.linalg.norm(N, axis=1)
    slack = tol.feas_eps * np.maximum(norms, 1.0)
    if m < d or np.linalg.matrix_rank(N) < d:
        _, _, vt = np.linalg.svd(np.vstack([N, np.zeros((1, d))]))
        return vt[-1]
    if d == 1:
        for u in (np.array([1.0]), np.array([-1.0])):
            if np.all(N @ u <= slack):
                return u
        return None
    for idx in _subsets(m, d - 1, budget):
        U = _null_directions(N[idx])
        lens = np.linalg.norm(U, axis=1)
        good = lens > tol.sing_eps * np.prod(norms[idx], axis=1)
        if not good.any():
            continue
        U = U[good] / lens[good, None]
        for sign in (1.0, -1.0):
            vals = sign * U @ N.T
            hit = np.all(vals <= slack, axis=1)
            if hit.any():
                return sign * U[int(np.argmax(hit))]
    return None


def enumerate_vertices(system, tol=DEFAULT_TOL, budget=SUBSET_BUDGET):
    """All vertices of a bounded unit-halfspace system.

    Every d-subset of normals is solved for ``N_S x = 1``; solutions feasible
    for all constraints (within ``feas_eps``) are kept and duplicates within
    1e-9 merged, keeping the lexicographically first defining subset.

    Raises
    ------
    Unbounded
        With ``ray`` set, when the system has a recession direction.
    DimensionTooLarge
        When the number of subsets exceeds ``budget``.
    """
    N = _normals(system)
    m, d = N.shape
    ray = find_recession_ray(N, tol, budget)
    if ray is not None:
        raise Unbounded("halfspace system is unbounded", ray=ray)
    verts, subsets = [], []
    for idx in _subsets(m, d, budget):
        x, ok = batched_solve(N[idx], np.ones((len(idx), d)), tol)
        feas = ok & np.all(x @ N.T <= 1.0 + tol.feas_eps, axis=1)
        for k in np.flatnonzero(feas):
            v = x[k]
            if verts:
                dist = np.linalg.norm(np.asarray(verts) - v, axis=1)
                if dist.min() <= MERGE_EPS * max(1.0, np.linalg.norm(v)):
                    continue
            verts.append(v)
            subsets.append(tuple(int(i) for i in idx[k]))
    return VertexEnumeration(np.array(verts).reshape(-1, d), subsets)


def vertex_correspondence(v, c, tol=DEFAULT_TOL):
    """Image ``v / (1 - <c, v>)`` of a polar vertex under a shift of center."""
    v = np.asarray(v, dtype=float)
    s = 1.0 - float(np.dot(c, v))
    if s <= tol.feas_eps:
        raise CenterNotInterior(f"<c, v> = {1.0 - s:.3g} is not below 1")
    return v / s


def correspondence_images(points, c, tol=DEFAULT_TOL):
    """Row-wise :func:`vertex_correspondence`."""
    V = as_points(points)
    s = 1.0 - V @ np.asarray(c, dtype=float)
    if np.any(s <= tol.feas_eps):
        raise CenterNotInterior("center is not interior to every halfspace")
    return V / s[:, None]


class BallCheck(NamedTuple):
    contained: bool
    inradius: float
    witness: object  # unit direction or None


def _inradius_and_direction(points, tol, budget):
    W = as_points(points)
    try:
        en = enumerate_vertices(polar_of_cloud(W), tol, budget)
    except Unbounded as exc:
        return 0.0, exc.ray
    if len(en) == 0:
        return 0.0, None
    norms = np.linalg.norm(en.vertices, axis=1)
    top = np.flatnonzero(norms >= norms.max() * (1.0 - 1e-12))
    # ties go to the lexicographically largest vertex
    k = max(top, key=lambda i: tuple(np.round(en.vertices[i] / norms[i], 12)))
    return float(1.0 / norms.max()), en.vertices[k] / norms[k]


def inscribed_radius_at_origin(points, tol=DEFAULT_TOL, budget=SUBSET_BUDGET):
    """Largest r with ``r * B^d`` inside ``conv(points)``.

    Computed as one over the largest vertex norm of the polar; zero when the
    origin is not interior (polar unbounded).
    """
    return _inradius_and_direction(points, tol, budget)[0]


def support(points, u):
    return float(np.max(as_points(points) @ np.asarray(u, dtype=float)))


def certify_ball_in_hull(points, radius, tol=DEFAULT_TOL, budget=SUBSET_BUDGET):
    """Check ``radius * B^d`` lies in ``conv(points)``.

    On failure ``witness`` is a unit direction along which the support
    function of the hull is below ``radius``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    r, u = _inradius_and_direction(points, tol, budget)
    if r >= radius - tol.feas_eps:
        return BallCheck(True, r, None)
    return BallCheck(False, r, u)


def atlantis_radius(lam):
    """Radius kept after mapping a ball of radius ``lam`` back across polarity."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return lam / (1.0 + lam)


@dataclass(frozen=True)
class AtlantisRecord:
    image_radius: float  # lambda: inradius of the images under the center
    bound: float  # lambda / (1 + lambda)
    radius: float  # inradius of the original points


def atlantis_transfer(cloud, c, subset, tol=DEFAULT_TOL, hull_radius=None, budget=SUBSET_BUDGET):
    """Carry a ball certificate from the images ``w_i`` back to the ``v_i``.

    ``cloud`` plays the vertex set of ``P°`` with ``P = cloud°``, and ``c`` is
    interior to ``P``. The hypothesis ``P inside B^d`` is enforced by
    checking that ``conv(cloud)`` contains the unit ball; pass a previously
    computed ``hull_radius`` to skip that enumeration.
    """
    Q = as_points(cloud)
    if hull_radius is None:
        hull_radius = inscribed_radius_at_origin(Q, tol, budget)
    if hull_radius < 1.0 - tol.feas_eps:
        raise HypothesisViolated(f"conv(cloud) has inradius {hull_radius:.6g} < 1")
    W = correspondence_images(Q[list(subset)], c, tol)
    lam = inscribed_radius_at_origin(W, tol, budget)
    r = inscribed_radius_at_origin(Q[list(subset)], tol, budget)
    bound = atlantis_radius(lam) if lam > 0 else 0.0
    if r < bound - 1e-8:
        raise VerificationFailed(f"radius {r:.12g} below transferred bound {bound:.12g}")
    return AtlantisRecord(lam, bound, r)
