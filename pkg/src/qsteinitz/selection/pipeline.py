"""Selection of at most 2d points whose hull keeps a concentric ball.

The construction works in the polar picture. With ``P = Q°`` and ``c`` the
unit-weight polar center of ``P``, the images ``w_i = q_i / (1 - <c, q_i>)``
sum to zero and their hull contains half the unit ball. A locally maximal
origin-anchored simplex on the ``w_i`` plus an anchored Carathéodory step for
the centroid of the remaining images picks at most 2d of them whose hull
contains ``B / (2(m + d))``; mapping back through the correspondence costs one
more unit in the denominator.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..center import WeightedSystem, solve_center, verify_zero_sum
from ..errors import (
    BallNotContained,
    InclusionViolated,
    NoConvergence,
    TooFewPoints,
    VerificationFailed,
)
from ..geom import DEFAULT_TOL, as_points
from ..polarity import (
    atlantis_transfer,
    certify_ball_in_hull,
    correspondence_images,
    inscribed_radius_at_origin,
)
from .caratheodory import anchored_caratheodory
from .lp import initial_convex_combination
from .maxvol import max_volume_simplex_at_origin, verify_lemma23_inclusions

DEDUP_EPS = 1e-12
RADIUS_EPS = 1e-8
MAX_RESTARTS = 48


def guaranteed_radius(m, d):
    return 1.0 / (2 * (m + d) + 1)


@dataclass(frozen=True)
class SelectionCertificate:
    selected_indices: list  # into the caller's cloud
    certified_radius: float
    guaranteed_radius: float
    pruned_count: int
    dim: int
    center: np.ndarray = None
    lemma_checks: dict = field(default_factory=dict)

    @property
    def size(self):
        return len(self.selected_indices)


def dedupe(points, eps=DEDUP_EPS):
    """Drop repeated points (within ``eps``), keeping first occurrences."""
    Q = as_points(points)
    keep = []
    for i, q in enumerate(Q):
        if keep and np.min(np.linalg.norm(Q[keep] - q, axis=1)) <= eps:
            continue
        keep.append(i)
    return Q[keep], keep


def prune_to_extreme(points, tol=DEFAULT_TOL):
    """Extreme points of ``conv(points)`` and their original indices.

    A point is dropped when the phase-1 feasibility solve writes it as a
    convex combination of the other (deduplicated) points.
    """
    Q, index = dedupe(points)
    if len(Q) <= 1:
        return Q, index
    keep = []
    for i in range(len(Q)):
        others = np.delete(Q, i, axis=0)
        if not initial_convex_combination(others, Q[i], tol).feasible:
            keep.append(i)
    return Q[keep], [index[i] for i in keep]


def _simplex_with_escalation(L, restarts, seed, tol):
    r = max(1, restarts)
    while True:
        S = max_volume_simplex_at_origin(L, r, seed, tol)
        try:
            return S, verify_lemma23_inclusions(L, S, tol)
        except InclusionViolated:
            if r >= MAX_RESTARTS:
                raise
            r = min(2 * r, MAX_RESTARTS)


def select_steinitz(points, tol=DEFAULT_TOL, seed=0, restarts=3):
    """Pick at most 2d points of ``points`` whose hull contains ``r B^d``.

    ``points`` must have a hull containing the unit ball. The returned
    certificate carries the radius measured by the inscribed-radius oracle,
    the guaranteed ``1 / (2(m + d) + 1)`` with ``m`` the number of extreme
    points, and the intermediate measurements in ``lemma_checks``.

    Raises
    ------
    BallNotContained
        If ``conv(points)`` misses part of the unit ball (with witness).
    TooFewPoints
        If at most d extreme points remain.
    VerificationFailed
        If any intermediate inclusion fails; this indicates a bug.
    """
    Q = as_points(points)
    d = Q.shape[1]
    check = certify_ball_in_hull(Q, 1.0, tol)
    if not check.contained:
        raise BallNotContained(
            f"hull inradius {check.inradius:.6g} < 1", witness=check.witness, radius=check.inradius
        )
    V, index = prune_to_extreme(Q, tol)
    m = len(V)
    if m <= d:
        raise TooFewPoints(f"{m} extreme points in dimension {d}")
    checks = {"hull_radius": check.inradius}

    W = WeightedSystem.of(V)
    cres = solve_center(W, tol, check_bounded=False)
    if not cres.converged:
        raise NoConvergence(f"center residual {cres.residual:.3g} after {cres.iterations} steps")
    c = cres.center
    checks["center_iterations"] = cres.iterations
    checks["zero_sum_residual"] = verify_zero_sum(W, c)

    L = correspondence_images(V, c, tol)
    half = inscribed_radius_at_origin(L, tol)
    checks["atlantis_midpoint_radius"] = half
    if half < 0.5 - RADIUS_EPS:
        raise VerificationFailed(f"image hull inradius {half:.12g} below 1/2")

    S, incl = _simplex_with_escalation(L, restarts, seed, tol)
    checks["simplex_volume"] = S.volume
    checks["zonotope_margin"] = incl.zonotope_margin
    checks["simplex_margin"] = incl.simplex_margin

    s = L[S.indices].sum(axis=0)
    p = -s / (m - d)
    b = s / d
    others = [i for i in range(m) if i not in set(S.indices)]
    centroid_err = float(np.linalg.norm(L[others].mean(axis=0) - p))
    checks["centroid_identity_error"] = centroid_err
    if centroid_err > 1e-9 * max(1.0, float(np.abs(L).max())):
        raise VerificationFailed(f"centroid identity off by {centroid_err:.3g}")

    car = anchored_caratheodory(L[others], p, b, tol)
    checks["caratheodory_max_step_residual"] = max(car.step_residuals)
    chosen = sorted(set(S.indices) | {others[i] for i in car.indices})

    lam_target = 1.0 / (2 * (m + d))
    image_radius = inscribed_radius_at_origin(L[chosen], tol)
    checks["image_radius"] = image_radius
    if image_radius < lam_target - RADIUS_EPS:
        raise VerificationFailed(f"selected images have inradius {image_radius:.12g} < {lam_target:.12g}")

    back = atlantis_transfer(V, c, chosen, tol, hull_radius=check.inradius)
    checks["transfer_bound"] = back.bound
    certified = back.radius
    guaranteed = guaranteed_radius(m, d)
    if certified < guaranteed - RADIUS_EPS:
        raise VerificationFailed(f"certified radius {certified:.12g} < guaranteed {guaranteed:.12g}")
    return SelectionCertificate(
        selected_indices=sorted(index[i] for i in chosen),
        certified_radius=float(certified),
        guaranteed_radius=guaranteed,
        pruned_count=m,
        dim=d,
        center=c,
        lemma_checks=checks,
    )


def corollary12_radius(alpha, lam, d):
    return lam / (5.0 * alpha * d)


def select_corollary12(points, alpha=None, lam=1.0, tol=DEFAULT_TOL, seed=0):
    """Selection for ``alpha * d`` points around ``lam * B^d``.

    ``alpha`` defaults to ``m / d``. The certificate's ``guaranteed_radius`` is
    ``lam / (5 alpha d)``; the radius from the main bound is kept in
    ``lemma_checks["steinitz_radius"]``.
    """
    Q = as_points(points)
    m, d = Q.shape
    if alpha is None:
        alpha = m / d
    if alpha <= 1:
        raise ValueError("alpha > 1 required")
    if m > alpha * d + 1e-9:
        raise ValueError(f"{m} points exceed alpha * d = {alpha * d:g}")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cert = select_steinitz(Q / lam, tol, seed)
    bound = corollary12_radius(alpha, lam, d)
    certified = cert.certified_radius * lam
    if certified < bound - RADIUS_EPS:
        raise VerificationFailed(f"certified {certified:.12g} < {bound:.12g}")
    checks = dict(cert.lemma_checks, steinitz_radius=cert.guaranteed_radius * lam)
    return replace(
        cert, certified_radius=certified, guaranteed_radius=bound, center=cert.center, lemma_checks=checks
    )


def corollary14_radius(d):
    return d ** -2.5 / 7.0


def select_corollary14(points, tol=DEFAULT_TOL, seed=0):
    """Two-stage selection for an arbitrary cloud whose hull contains ``B^d``.

    Stage 1 keeps, for every ``±e_j``, at most d points with ``±e_j`` in the
    hull of those points and the origin; the union has at most ``2d^2``
    points and its hull contains ``B / sqrt(d)``. Stage 2 runs
    :func:`select_steinitz` on the union scaled by ``sqrt(d)``.
    """
    Q = as_points(points)
    d = Q.shape[1]
    check = certify_ball_in_hull(Q, 1.0, tol)
    if not check.contained:
        raise BallNotContained(
            f"hull inradius {check.inradius:.6g} < 1", witness=check.witness, radius=check.inradius
        )
    union = set()
    origin = np.zeros(d)
    for j in range(d):
        for sign in (1.0, -1.0):
            e = np.zeros(d)
            e[j] = sign
            res = anchored_caratheodory(Q, e, origin, tol)
            union.update(res.indices)
    U = sorted(union)
    stage1 = inscribed_radius_at_origin(Q[U], tol)
    if stage1 < 1.0 / math.sqrt(d) - RADIUS_EPS:
        raise VerificationFailed(f"stage-1 union inradius {stage1:.12g} < 1/sqrt(d)")
    cert = select_steinitz(Q[U] * math.sqrt(d), tol, seed)
    selected = sorted(U[i] for i in cert.selected_indices)
    certified = inscribed_radius_at_origin(Q[selected], tol)
    bound = corollary14_radius(d)
    stage2 = cert.guaranteed_radius / math.sqrt(d)
    if certified < stage2 - RADIUS_EPS or stage2 < bound:
        raise VerificationFailed(f"certified {certified:.12g} below {stage2:.12g}")
    checks = dict(cert.lemma_checks, stage1_size=len(U), stage1_radius=stage1, steinitz_radius=stage2)
    return SelectionCertificate(
        selected_indices=selected,
        certified_radius=float(certified),
        guaranteed_radius=bound,
        pruned_count=cert.pruned_count,
        dim=d,
        center=cert.center,
        lemma_checks=checks,
    )
