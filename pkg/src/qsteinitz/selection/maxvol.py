"""Locally maximal simplices with one vertex at the origin.

For a basis ``w_1..w_d`` drawn from a cloud, replacing ``w_j`` by a point
``q`` scales ``|det|`` by ``|t_j|`` where ``q = sum_j t_j w_j``. So the swap
search stops exactly when every cloud point has all basis coefficients in
``[-1, 1]``, which is also the zonotope inclusion verified afterwards.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateCloud, InclusionViolated
from ..geom import DEFAULT_TOL, as_points
from ..rng import Xoshiro256

SWAP_GAIN = 1e-9
INCLUSION_EPS = 1e-8


@dataclass(frozen=True)
class SimplexResult:
    indices: list
    volume: float  # |det[w_1..w_d]| / d!
    swaps: int
    restarts_used: int
    best_restart: int = 0


def _greedy(L, first, tol):
    m, d = L.shape
    chosen = []
    R = L.copy()
    scale = max(1.0, float(np.abs(L).max()))
    for step in range(d):
        norms = np.linalg.norm(R, axis=1)
        norms[chosen] = -1.0
        k = first if (step == 0 and first is not None) else int(np.argmax(norms))
        if norms[k] <= tol.sing_eps * scale:
            raise DegenerateCloud("cloud does not span the space")
        chosen.append(k)
        u = R[k] / norms[k]
        R = R - np.outer(R @ u, u)
    return chosen


def basis_coefficients(L, indices):
    """Coordinates of every cloud point in the basis ``L[indices]``."""
    W = L[list(indices)]
    return np.linalg.solve(W.T, L.T).T


def _swap_search(L, chosen, max_swaps=100_000):
    chosen = list(chosen)
    swaps = 0
    while swaps < max_swaps:
        T = np.abs(basis_coefficients(L, chosen))
        T[chosen] = 0.0
        flat = int(np.argmax(T))  # row-major: lowest point index, then position
        i, j = divmod(flat, T.shape[1])
        if T[i, j] <= 1.0 + SWAP_GAIN:
            break
        chosen[j] = i
        swaps += 1
    return chosen, swaps


def max_volume_simplex_at_origin(L, restarts=3, seed=0, tol=DEFAULT_TOL):
    """Best of ``restarts`` greedy starts, each improved by single swaps.

    Restart 0 is the plain greedy start (largest norm first); later restarts
    draw the first vertex at random from a generator seeded with ``seed``.
    Ties go to the lowest index and then the earliest restart.
    """
    L = as_points(L)
    m, d = L.shape
    if m < d:
        raise DegenerateCloud(f"{m} points cannot span R^{d}")
    rng = Xoshiro256(seed)
    best = None
    total_swaps = 0
    for r in range(max(1, restarts)):
        first = None if r == 0 else rng.integer(m)
        try:
            chosen = _greedy(L, first, tol)
        except DegenerateCloud:
            if r == 0:
                raise
            continue
        chosen, swaps = _swap_search(L, chosen)
        total_swaps += swaps
        vol = abs(np.linalg.det(L[chosen])) / math.factorial(d)
        if best is None or vol > best[1] * (1.0 + SWAP_GAIN):
            best = (chosen, vol, r)
    chosen, vol, r = best
    return SimplexResult(sorted(chosen), float(vol), total_swaps, max(1, restarts), r)


@dataclass(frozen=True)
class InclusionCheck:
    zonotope_margin: float  # 1 - max |coefficient|; >= -1e-8 required
    simplex_margin: float  # min barycentric slack of zonotope vertices in -2dS + sum(w)
    ok: bool


def verify_lemma23_inclusions(L, S, tol=DEFAULT_TOL):
    """Check ``L in sum_i [-w_i, w_i] in -2d S + (w_1 + ... + w_d)``.

    Raises
    ------
    InclusionViolated
        With the worst offending point and its margin.
    """
    L = as_points(L)
    idx = S.indices if isinstance(S, SimplexResult) else list(S)
    d = L.shape[1]
    W = L[idx]
    T = basis_coefficients(L, idx)
    absT = np.abs(T).max(axis=1)
    worst = int(np.argmax(absT))
    zmargin = 1.0 - float(absT[worst])
    if zmargin < -INCLUSION_EPS:
        raise InclusionViolated("cloud point outside the zonotope", point=L[worst], margin=zmargin)
    s = W.sum(axis=0)
    smargin = np.inf
    worst_pt = None
    for eps in itertools.product((-1.0, 1.0), repeat=d):
        x = np.asarray(eps) @ W
        y = (s - x) / (2 * d)
        a = np.linalg.solve(W.T, y)
        margin = min(float(a.min()), 1.0 - float(a.sum()))
        if margin < smargin:
            smargin, worst_pt = margin, x
    if smargin < -INCLUSION_EPS:
        raise InclusionViolated("zonotope vertex outside -2dS + sum(w)", point=worst_pt, margin=smargin)
    return InclusionCheck(zmargin, float(smargin), True)
