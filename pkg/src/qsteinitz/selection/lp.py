"""Phase-1 simplex method for convex-combination feasibility.

Solves ``sum_i lam_i q_i = target, sum_i lam_i = 1, lam >= 0`` with a dense
tableau and Bland's rule. When the system is infeasible the final duals give
a separating direction.
"""

from dataclasses import dataclass

import numpy as np

from ..geom import DEFAULT_TOL, as_points, unit


@dataclass(frozen=True)
class ConvexCombination:
    feasible: bool
    weights: np.ndarray = None
    witness: np.ndarray = None  # u with <u, target> > max_i <u, q_i>
    residual: float = np.inf


def _pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def phase_one(A, b, tol=1e-12, max_iter=10_000):
    """Minimise the sum of artificials for ``A x = b, x >= 0``.

    Returns ``(x, infeasibility, duals)``; ``duals`` satisfy
    ``A^T y <= 0`` and ``b^T y = infeasibility`` at termination.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    rows, n = A.shape
    flip = np.where(b < 0, -1.0, 1.0)
    A *= flip[:, None]
    b *= flip
    T = np.zeros((rows + 1, n + rows + 1))
    T[:rows, :n] = A
    T[:rows, n:n + rows] = np.eye(rows)
    T[:rows, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + rows))
    eps = tol * max(1.0, float(np.abs(A).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    for _ in range(max_iter):
        entering = np.flatnonzero(T[-1, :n + rows] < -eps)
        if entering.size == 0:
            break
        c = int(entering[0])
        col = T[:rows, c]
        cand = np.flatnonzero(col > eps)
        if cand.size == 0:  # cannot happen for a bounded phase-1 objective
            break
        ratios = T[cand, -1] / col[cand]
        best = ratios.min()
        ties = cand[ratios <= best + eps]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
    x = np.zeros(n + rows)
    x[basis] = T[:rows, -1]
    y = (1.0 - T[-1, n:n + rows]) * flip
    return x[:n], -T[-1, -1], y


def initial_convex_combination(cloud, target, tol=DEFAULT_TOL):
    """Find convex weights reproducing ``target`` from the rows of ``cloud``.

    Returns a :class:`ConvexCombination`. Infeasibility is an outcome, not an
    error: ``witness`` is then a unit direction ``u`` with
    ``<u, target> > max_i <u, q_i>``.
    """
    Q = as_points(cloud)
    t = np.asarray(target, dtype=float)
    m, d = Q.shape
    A = np.vstack([Q.T, np.ones((1, m))])
    b = np.append(t, 1.0)
    lam, infeas, y = phase_one(A, b)
    scale = max(1.0, float(np.abs(Q).max()), float(np.abs(t).max(initial=0.0)))
    lam = np.clip(lam, 0.0, None)
    residual = float(np.linalg.norm(lam @ Q - t)) + abs(lam.sum() - 1.0) * scale
    if infeas <= tol.feas_eps * scale and residual <= 10 * tol.feas_eps * scale:
        return ConvexCombination(True, weights=lam, residual=residual)
    u = y[:d]
    if np.linalg.norm(u) == 0 or np.dot(u, t) <= np.max(Q @ u):
        # duals degenerate: fall back to the direction from the best combination
        u = t - lam @ Q if lam.sum() > 0 else t - Q.mean(axis=0)
    return ConvexCombination(False, witness=unit(u), residual=residual)


def in_hull(cloud, target, tol=DEFAULT_TOL):
    return initial_convex_combination(cloud, target, tol).feasible
