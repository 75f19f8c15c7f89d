"""Instance generators and brute-force certification.

Nothing here is on the selection pipeline's path; these routines exist to
check it. The exhaustive searches share only :func:`inscribed_radius_at_origin`
with the pipeline, which is itself a brute-force enumeration.
"""

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, DegenerateCloud, RetryExhausted
from .geom import DEFAULT_TOL, as_points
from .polarity import inscribed_radius_at_origin
from .rng import Xoshiro256

EXHAUSTIVE_BUDGET = 1_000_000
TIE_EPS = 1e-12


@dataclass(frozen=True)
class Instance:
    points: np.ndarray
    provenance: str  # "random-seeded" | "grundbacher" | "file"
    seed: Optional[int] = None

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)


def generate_grundbacher(d):
    """The (2d+1)-point configuration around the unit ball with poor 2d-subsets."""
    if d < 2:
        raise ValueError("d >= 2 required")
    s = math.sqrt(d)
    E = np.eye(d)
    pts = []
    for i in range(d - 1):
        pts.append(s * E[i])
        pts.append(-s * E[i])
    pts.append(s * E[d - 1])
    ones = np.ones(d - 1)
    pts.append(-s * np.append(ones, 1.0))  # -sqrt(d) (e_d + e_1 + ... + e_{d-1})
    pts.append(-s * np.append(-ones, 1.0))  # -sqrt(d) (e_d - e_1 - ... - e_{d-1})
    return Instance(np.array(pts), "grundbacher")


def grundbacher_bound(d):
    return math.sqrt(d / (d * d + d - 1))


def generate_random_ball_instance(d, m, seed=0, tol=DEFAULT_TOL, attempts=100):
    """m random points whose hull has inradius exactly ``1 + feas_eps``.

    Directions are Gaussian (Box-Muller on xoshiro256**) normalised to the
    sphere, radii uniform in [1, 2]; the cloud is resampled until the origin
    is interior and then rescaled.
    """
    if m < d + 1:
        raise ValueError("m >= d + 1 required")
    rng = Xoshiro256(seed)
    for _ in range(attempts):
        P = np.empty((m, d))
        for i in range(m):
            g = np.array([rng.normal() for _ in range(d)])
            P[i] = g / np.linalg.norm(g) * rng.uniform(1.0, 2.0)
        r = inscribed_radius_at_origin(P, tol)
        if r > 1e-6:
            return Instance(P * ((1.0 + tol.feas_eps) / r), "random-seeded", seed)
    raise RetryExhausted(f"origin not interior after {attempts} attempts")


@dataclass(frozen=True)
class ExhaustiveReport:
    best_subset: list
    best_radius: float
    subsets_examined: int


def _scan(args):
    Q, combos, tol = args
    best, best_r = None, -np.inf
    for c in combos:
        r = inscribed_radius_at_origin(Q[list(c)], tol)
        if r > best_r + TIE_EPS:
            best, best_r = c, r
    return best, best_r, len(combos)


def exhaustive_best_subset(points, k, tol=DEFAULT_TOL, budget=EXHAUSTIVE_BUDGET, jobs=1):
    """Largest inscribed radius over all k-subsets (all points if fewer).

    Subsets are scanned in lexicographic order and split into contiguous
    ranges when ``jobs > 1``; the reduction keeps the lexicographically first
    subset among ties, so the answer does not depend on ``jobs``.
    """
    Q = as_points(points)
    m = len(Q)
    k = min(k, m)
    total = math.comb(m, k)
    if total > budget:
        raise BudgetExceeded(f"C({m},{k}) = {total} exceeds budget {budget}")
    combos = list(itertools.combinations(range(m), k))
    if jobs <= 1 or total < 2 * jobs:
        parts = [_scan((Q, combos, tol))]
    else:
        size = -(-total // jobs)
        chunks = [(Q, combos[i:i + size], tol) for i in range(0, total, size)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan, chunks))
    best, best_r = None, -np.inf
    for sub, r, _ in parts:
        if sub is not None and r > best_r + TIE_EPS:
            best, best_r = sub, r
    return ExhaustiveReport(list(best), float(best_r), total)


def exhaustive_max_volume_simplex(L):
    """Indices and ``|det|/d!`` of the largest origin-anchored simplex."""
    L = as_points(L)
    m, d = L.shape
    combos = np.array(list(itertools.combinations(range(m), d)))
    dets = np.abs(np.linalg.det(L[combos]))
    k = int(np.argmax(dets))
    if dets[k] == 0:
        raise DegenerateCloud("cloud does not span the space")
    return [int(i) for i in combos[k]], float(dets[k] / math.factorial(d))
