import numpy as np
import pytest
from scipy.spatial import ConvexHull

from qsteinitz.geom import Tolerance


@pytest.fixture
def tol():
    return Tolerance()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def qhull_inradius(points):
    """Distance from the origin to the nearest facet plane, via Qhull."""
    hull = ConvexHull(np.asarray(points, dtype=float))
    # equations are [n, off] with n.x + off <= 0 inside, |n| = 1
    return float(np.min(-hull.equations[:, -1]))


def sphere_cloud(rng, m, d, lo=1.0, hi=2.0):
    g = rng.normal(size=(m, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True) * rng.uniform(lo, hi, size=(m, 1))
