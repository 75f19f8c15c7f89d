"""Carathéodory reduction with a prescribed extra point.

Any point of ``conv(Q)`` is a convex combination of an anchor ``b`` and at
most d points of ``Q``. Starting from an arbitrary representation with anchor
weight zero, each step removes one point of the support by moving along an
affine dependence of the vectors ``q_i - b``; the anchor weight only grows.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import TargetNotInHull, VerificationFailed
from ..geom import DEFAULT_TOL, as_points
from .lp import initial_convex_combination

STEP_EPS = 1e-9


@dataclass(frozen=True)
class CaratheodoryResult:
    indices: list  # positions in the cloud, at most d of them
    coefficients: np.ndarray  # weights on the chosen points, same order as indices
    anchor_weight: float
    step_residuals: list = field(default_factory=list)

    def combination(self, cloud, anchor):
        return self.anchor_weight * np.asarray(anchor, dtype=float) + self.coefficients @ as_points(cloud)[self.indices]


def _residual(Q, lam, mu, anchor, target):
    return float(np.linalg.norm(mu * anchor + lam @ Q - target))


def anchored_caratheodory(cloud, target, anchor, tol=DEFAULT_TOL):
    """Write ``target`` as a convex combination of ``anchor`` and <= d cloud points.

    Raises
    ------
    TargetNotInHull
        If ``target`` is not in ``conv(cloud)``; carries a separating witness.
    VerificationFailed
        If a reduction step drifts from ``target`` by more than 1e-9.
    """
    Q = as_points(cloud)
    t = np.asarray(target, dtype=float)
    b = np.asarray(anchor, dtype=float)
    d = Q.shape[1]
    start = initial_convex_combination(Q, t, tol)
    if not start.feasible:
        raise TargetNotInHull("target is outside conv(cloud)", witness=start.witness)
    lam = start.weights.copy()
    mu = 0.0
    scale = max(1.0, float(np.abs(Q).max()), float(np.abs(b).max(initial=0.0)))
    zero = 1e-15 * scale
    lam[lam <= zero] = 0.0
    residuals = [_residual(Q, lam, mu, b, t)]
    while np.count_nonzero(lam) > d:
        supp = np.flatnonzero(lam)
        D = (Q[supp] - b).T
        c = np.linalg.svd(D)[2][-1]
        if c.sum() < 0 or (c.sum() == 0 and not np.any(c > 0)):
            c = -c
        pos = c > 1e-14 * np.abs(c).max()
        ratios = np.full(len(c), np.inf)
        ratios[pos] = lam[supp][pos] / c[pos]
        k = int(np.argmin(ratios))
        step = ratios[k]
        lam[supp] -= step * c
        mu += step * c.sum()
        lam[supp[k]] = 0.0
        lam[lam < 0] = 0.0
        r = _residual(Q, lam, mu, b, t)
        residuals.append(r)
        if r > STEP_EPS * scale:
            raise VerificationFailed(f"reduction step lost the target by {r:.3g}")
    supp = np.flatnonzero(lam)
    return CaratheodoryResult([int(i) for i in supp], lam[supp], float(mu), residuals)
