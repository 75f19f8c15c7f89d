"""Weighted polar center of a unit-halfspace system.

For normals ``v_i`` and positive weights ``beta_i`` the center is the unique
maximizer of ``sum_i beta_i * log(1 - <x, v_i>)`` over the interior of
``{x : <x, v_i> <= 1}``. At that point ``sum_i beta_i v_i / (1 - <c, v_i>)``
vanishes, i.e. the weighted images of the normals under the shift to ``c``
sum to zero.

All sums over normals use :func:`math.fsum`, so results do not depend on the
order in which normals are listed.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import InfeasiblePoint, UnboundedPolytope
from .geom import DEFAULT_TOL, as_points, fsum_rows
from .polarity import UnitHalfspaceSystem, inscribed_radius_at_origin

ARMIJO = 0.01
FRACTION_TO_BOUNDARY = 0.99
MIN_SLACK = 1e-12
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class WeightedSystem:
    normals: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.weights) != len(self.normals):
            raise ValueError("one weight per normal required")
        if np.any(np.asarray(self.weights) <= 0):
            raise ValueError("weights must be strictly positive")

    @classmethod
    def of(cls, normals, weights=None):
        if isinstance(normals, UnitHalfspaceSystem):
            normals = normals.normals
        N = as_points(normals)
        w = np.ones(len(N)) if weights is None else np.asarray(weights, dtype=float)
        return cls(N, w)

    @property
    def dim(self):
        return self.normals.shape[1]


@dataclass(frozen=True)
class CenterResult:
    center: np.ndarray
    residual: float
    iterations: int
    converged: bool
    log_objective: float


def _slacks(W, x):
    s = 1.0 - W.normals @ x
    if np.any(s <= 0):
        raise InfeasiblePoint("point violates a constraint")
    return s


def log_objective(W, x):
    """``sum_i beta_i * log(1 - <x, v_i>)``."""
    s = _slacks(W, np.asarray(x, dtype=float))
    return math.fsum(W.weights * np.log(s))


def gradient(W, x):
    """Gradient of :func:`log_objective`: ``-sum_i beta_i v_i / s_i``."""
    s = _slacks(W, np.asarray(x, dtype=float))
    return -fsum_rows((W.weights / s)[:, None] * W.normals)


def weighted_image_sum(W, c):
    """``sum_i beta_i v_i / (1 - <c, v_i>)``, which is zero at the center."""
    s = _slacks(W, np.asarray(c, dtype=float))
    return fsum_rows((W.weights / s)[:, None] * W.normals)


def verify_zero_sum(W, c):
    return float(np.linalg.norm(weighted_image_sum(W, c)))


def hessian(W, x):
    """Negated Hessian ``sum_i beta_i v_i v_i^T / s_i^2`` (positive definite)."""
    s = _slacks(W, np.asarray(x, dtype=float))
    scaled = np.sqrt(W.weights)[:, None] * W.normals / s[:, None]
    d = W.dim
    H = np.empty((d, d))
    for a in range(d):
        for b in range(a, d):
            H[a, b] = H[b, a] = math.fsum(scaled[:, a] * scaled[:, b])
    return H


def _residual_scale(W):
    return 1.0 + math.fsum(W.weights * np.linalg.norm(W.normals, axis=1))


def solve_center(W, tol=DEFAULT_TOL, max_iter=200, start=None, check_bounded=True, polish=2, trace=None):
    """Damped Newton ascent for the weighted polar center.

    Starts from the origin (always strictly feasible) unless ``start`` is
    given. Each step is clipped by a 0.99 fraction-to-boundary rule and then
    halved until the Armijo condition with constant 0.01 holds. Once the
    predicted gain is below the rounding error of the objective, a step is
    accepted instead when it lowers the residual. Iteration
    stops once the residual ``|sum beta_i v_i / s_i|`` drops below
    ``grad_eps * (1 + sum beta_i |v_i|)``.

    After convergence up to ``polish`` further full Newton steps are taken
    while they keep reducing the residual.

    If ``trace`` is a list, ``(x, log_objective)`` is appended for every
    accepted iterate, starting point included.

    When ``max_iter`` is exhausted the best iterate is returned with
    ``converged=False``; callers decide whether that is fatal.

    Raises
    ------
    UnboundedPolytope
        If the origin is not interior to the hull of the normals.
    """
    if not isinstance(W, WeightedSystem):
        W = WeightedSystem.of(W)
    if check_bounded and inscribed_radius_at_origin(W.normals, tol) <= 0:
        raise UnboundedPolytope("origin is not interior to conv(normals)")
    x = np.zeros(W.dim) if start is None else np.array(start, dtype=float)
    target = tol.grad_eps * _residual_scale(W)
    f = log_objective(W, x)
    g = gradient(W, x)
    it = 0
    if trace is not None:
        trace.append((x.copy(), f))
    while np.linalg.norm(g) > target and it < max_iter:
        it += 1
        H = hessian(W, x)
        try:
            step = cho_solve(cho_factor(H), g)
        except np.linalg.LinAlgError:
            raise UnboundedPolytope("Newton system lost definiteness")
        rate = W.normals @ step
        s = 1.0 - W.normals @ x
        grow = rate > 0
        t = 1.0
        if grow.any():
            t = min(1.0, FRACTION_TO_BOUNDARY * float(np.min(s[grow] / rate[grow])))
        slope = float(g @ step)
        gnorm = np.linalg.norm(g)
        while True:
            xn = x + t * step
            if np.max(W.normals @ xn) <= 1.0 - MIN_SLACK:
                fn = log_objective(W, xn)
                if fn >= f + ARMIJO * t * slope:
                    break
                # the predicted gain is below the rounding of f: judge by the residual
                if ARMIJO * t * slope <= 64 * EPS * max(1.0, abs(f)) and np.linalg.norm(gradient(W, xn)) < gnorm:
                    break
            t *= 0.5
            if t < 1e-30:
                # no ascent possible at working precision
                return CenterResult(x, float(np.linalg.norm(g)), it, False, f)
        x, f = xn, fn
        g = gradient(W, x)
        if trace is not None:
            trace.append((x.copy(), f))
    res = float(np.linalg.norm(g))
    if res <= target:
        # full Newton steps are quadratically convergent here; keep them while they help
        for _ in range(polish):
            try:
                xn = x + cho_solve(cho_factor(hessian(W, x)), g)
                if np.max(W.normals @ xn) > 1.0 - MIN_SLACK:
                    break
                gn = gradient(W, xn)
                fn = log_objective(W, xn)
            except (np.linalg.LinAlgError, InfeasiblePoint):
                break
            rn = float(np.linalg.norm(gn))
            if not rn < res:
                break
            x, g, f, res = xn, gn, fn, rn
            it += 1
            if trace is not None:
                trace.append((x.copy(), f))
    return CenterResult(x, res, it, res <= target, f)
