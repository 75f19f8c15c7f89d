import math

import numpy as np
import pytest
from scipy.linalg import cholesky
from scipy.optimize import minimize

from conftest import sphere_cloud
from qsteinitz.center import (
    WeightedSystem,
    gradient,
    hessian,
    log_objective,
    solve_center,
    verify_zero_sum,
)
from qsteinitz.errors import InfeasiblePoint, UnboundedPolytope
from qsteinitz.oracle import generate_random_ball_instance
from qsteinitz.polarity import enumerate_vertices, inscribed_radius_at_origin
from qsteinitz.selection import prune_to_extreme

CROSS2 = WeightedSystem.of([[1, 0], [-1, 0], [0, 1], [0, -1]])
SKEW = WeightedSystem.of([[1, 0], [0, 1], [-1, -1]], [2, 1, 1])


def direct_product(W, x):
    s = np.clip(1 - W.normals @ x, 0, None)
    return float(np.prod(s ** W.weights))


def random_system(rng, d, m=None, weights=False):
    while True:
        N = sphere_cloud(rng, m or 2 * d + 3, d)
        if inscribed_radius_at_origin(N) > 0.05:
            w = rng.uniform(0.2, 3.0, size=len(N)) if weights else None
            return WeightedSystem.of(N, w)


def random_feasible(rng, W, shrink=0.8):
    P = enumerate_vertices(W.normals).vertices
    return rng.dirichlet(np.ones(len(P))) @ P * shrink


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        WeightedSystem.of([[1, 0], [-1, 0]], [1, 0])


def test_log_objective_examples():
    assert log_objective(CROSS2, [0, 0]) == 0.0
    assert log_objective(CROSS2, [0.5, 0]) == pytest.approx(math.log(0.5) + math.log(1.5), abs=1e-15)
    assert log_objective(CROSS2, [0.5, 0]) == pytest.approx(-0.2876820724517809, abs=1e-12)
    with pytest.raises(InfeasiblePoint):
        log_objective(CROSS2, [1.0, 0.0])


def test_log_objective_matches_product(rng):
    for _ in range(30):
        W = random_system(rng, 3, weights=True)
        x = random_feasible(rng, W)
        assert math.exp(log_objective(W, x)) == pytest.approx(direct_product(W, x), rel=1e-10)


def test_gradient_examples():
    assert np.array_equal(gradient(CROSS2, [0, 0]), [0, 0])
    single = WeightedSystem.of([[1.0, 0.0]])
    assert np.allclose(gradient(single, [0.5, 0]), [-2, 0], atol=0)


def test_gradient_finite_differences(rng):
    h = 1e-6
    for _ in range(20):
        d = int(rng.integers(2, 6))
        W = random_system(rng, d, weights=True)
        for _ in range(5):
            x = random_feasible(rng, W, 0.7)
            g = gradient(W, x)
            fd = np.array([(log_objective(W, x + h * e) - log_objective(W, x - h * e)) / (2 * h) for e in np.eye(d)])
            assert np.linalg.norm(g - fd) <= 1e-6 * (1 + np.linalg.norm(g))


def test_center_of_cross_polytope():
    for d in (2, 3, 5):
        N = np.vstack([np.eye(d), -np.eye(d)])
        res = solve_center(WeightedSystem.of(N))
        assert res.converged and res.residual <= 1e-10
        assert np.allclose(res.center, 0, atol=1e-14)


@pytest.mark.parametrize(
    "N",
    [
        [[math.cos(a), math.sin(a)] for a in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)],
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
    ],
)
def test_center_of_regular_simplex(N):
    res = solve_center(WeightedSystem.of(N))
    assert res.converged
    assert np.linalg.norm(res.center) <= 1e-12


def grid_search_center(W, lo, hi):
    """Coarse grid, then a 1e-4 grid around the best cell, then simplex polish."""
    f = lambda x: direct_product(W, x)
    best = None
    for step, box in ((1e-2, (lo, hi)), (1e-4, None)):
        if box is None:
            box = (best - 2e-2, best + 2e-2)
        xs = np.arange(box[0][0], box[1][0] + step / 2, step)
        ys = np.arange(box[0][1], box[1][1] + step / 2, step)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        s = np.clip(1 - pts @ W.normals.T, 0, None)
        vals = np.prod(s ** W.weights, axis=1)
        best = pts[int(np.argmax(vals))]
    res = minimize(lambda x: -f(x), best, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
    return res.x


def test_weighted_center_grid_oracle():
    oracle = grid_search_center(SKEW, np.array([-2.0, -2.0]), np.array([1.0, 1.0]))
    res = solve_center(SKEW)
    assert res.converged and res.residual <= 1e-10
    assert np.linalg.norm(res.center - oracle) <= 1e-6
    # frozen from the oracle run: (-0.5, 0.25)
    assert np.allclose(res.center, [-0.5, 0.25], atol=1e-12)


def test_verify_zero_sum():
    assert verify_zero_sum(CROSS2, [0, 0]) == 0.0
    c = solve_center(SKEW).center
    assert verify_zero_sum(SKEW, c) <= 1e-12
    assert verify_zero_sum(SKEW, c + [0.01, 0]) > 1e-3


def test_zero_sum_after_solve_random(rng):
    for _ in range(20):
        W = random_system(rng, int(rng.integers(2, 6)), weights=bool(rng.integers(2)))
        res = solve_center(W)
        assert res.converged
        assert verify_zero_sum(W, res.center) <= 1e-8
        assert np.max(W.normals @ res.center) <= 1 - 1e-12


def test_hessian_pd_and_monotone_along_iterates(rng):
    for _ in range(10):
        W = random_system(rng, int(rng.integers(2, 6)), weights=True)
        trace = []
        res = solve_center(W, trace=trace)
        assert res.converged and len(trace) == res.iterations + 1
        for x, _ in trace:
            cholesky(hessian(W, x))
        values = [f for _, f in trace]
        assert all(b >= a - 1e-14 * max(1, abs(a)) for a, b in zip(values, values[1:]))


def test_uniqueness_from_two_starts(rng):
    for _ in range(10):
        W = random_system(rng, 3, weights=True)
        a = solve_center(W, start=random_feasible(rng, W, 0.9)).center
        b = solve_center(W, start=random_feasible(rng, W, 0.9)).center
        assert np.linalg.norm(a - b) <= 1e-7


def test_permutation_invariance_bitwise(rng):
    W = random_system(rng, 4, m=15)
    base = solve_center(W).center
    for _ in range(5):
        perm = rng.permutation(len(W.normals))
        c = solve_center(WeightedSystem.of(W.normals[perm])).center
        assert np.array_equal(c, base)


def test_unbounded_polytope():
    with pytest.raises(UnboundedPolytope):
        solve_center(WeightedSystem.of([[1, 0], [0, 1], [1, 1]]))


def test_iteration_cap_reports_nonconvergence(rng):
    W = random_system(rng, 4, weights=True)
    res = solve_center(W, max_iter=1)
    assert not res.converged and res.iterations == 1


def test_converges_when_objective_gain_is_below_rounding():
    # Armijo alone stalls here at residual ~4e-9 because f stops changing in floating point
    V, _ = prune_to_extreme(generate_random_ball_instance(2, 19, seed=2036).points)
    res = solve_center(WeightedSystem.of(V), check_bounded=False)
    assert res.converged and res.iterations < 50
    assert verify_zero_sum(WeightedSystem.of(V), res.center) <= 1e-12
