import itertools
import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conftest import qhull_inradius, sphere_cloud
from qsteinitz.errors import CenterNotInterior, DimensionTooLarge, HypothesisViolated, Unbounded
from qsteinitz.oracle import generate_grundbacher, generate_random_ball_instance
from qsteinitz.polarity import (
    atlantis_radius,
    atlantis_transfer,
    certify_ball_in_hull,
    cloud_of_polar,
    correspondence_images,
    enumerate_vertices,
    find_recession_ray,
    inscribed_radius_at_origin,
    polar_of_cloud,
    support,
    vertex_correspondence,
)

CROSS2 = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
SQUARE = np.array([[1, 1], [-1, 1], [1, -1], [-1, -1]], dtype=float)


def as_set(X, nd=9):
    return {tuple(np.round(x, nd) + 0.0) for x in X}


def test_polar_of_cloud_is_relabelling():
    H = polar_of_cloud(CROSS2)
    assert H.dim == 2 and len(H.normals) == 4
    assert np.array_equal(cloud_of_polar(H), CROSS2)


def test_square_vertices():
    en = enumerate_vertices(CROSS2)
    assert as_set(en.vertices) == as_set(SQUARE)
    assert all(len(s) == 2 for s in en.defining_subsets)


def test_redundant_normal_is_inactive():
    N = np.vstack([CROSS2, [0.5, 0.5]])
    en = enumerate_vertices(N)
    assert as_set(en.vertices) == as_set(SQUARE)
    assert all(4 not in s for s in en.defining_subsets)


def test_single_halfspace_unbounded():
    with pytest.raises(Unbounded) as info:
        enumerate_vertices([[1.0, 0.0]])
    u = info.value.ray
    assert np.linalg.norm(u) == pytest.approx(1.0)
    assert u @ [1.0, 0.0] <= 1e-12


def test_unbounded_ray_pointed_cone():
    # normals span R^2 but the origin is on the boundary of their hull
    N = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    u = find_recession_ray(N)
    assert u is not None and np.all(N @ u <= 1e-12)
    assert find_recession_ray(CROSS2) is None


def test_budget():
    with pytest.raises(DimensionTooLarge):
        enumerate_vertices(sphere_cloud(np.random.default_rng(0), 12, 3), budget=10)


def test_exhaustive_recheck_d3(rng, tol):
    for _ in range(5):
        N = sphere_cloud(rng, 8, 3)
        if find_recession_ray(N) is not None:
            continue
        en = enumerate_vertices(N, tol)
        for S in itertools.combinations(range(8), 3):
            A = N[list(S)]
            if abs(np.linalg.det(A)) < 1e-10:
                continue
            x = np.linalg.solve(A, np.ones(3))
            feasible = np.all(N @ x <= 1 + 1e-9)
            found = np.min(np.linalg.norm(en.vertices - x, axis=1)) <= 1e-8
            assert feasible == found
        slack = 1 - en.vertices @ N.T
        assert np.all(slack >= -tol.feas_eps)
        assert np.all(np.sum(np.abs(slack) <= tol.feas_eps, axis=1) >= 3)


@pytest.mark.parametrize("d", [2, 3])
def test_bipolar_round_trip(rng, d):
    for m in (d + 3, 8, 12):
        Q = sphere_cloud(rng, m, d)
        if inscribed_radius_at_origin(Q) <= 0:
            continue
        P_vertices = enumerate_vertices(polar_of_cloud(Q)).vertices
        back = enumerate_vertices(polar_of_cloud(P_vertices)).vertices
        extreme = Q[ConvexHull(Q).vertices]
        assert len(back) == len(extreme)
        for x in extreme:
            assert np.min(np.linalg.norm(back - x, axis=1)) <= 1e-8


def test_vertex_correspondence_examples():
    assert np.allclose(vertex_correspondence([1, 0], [0.5, 0]), [2, 0])
    assert np.array_equal(vertex_correspondence([0.3, -2.0], [0, 0]), [0.3, -2.0])
    assert np.allclose(vertex_correspondence([0, 1], [0.5, 0]), [0, 1])
    with pytest.raises(CenterNotInterior):
        vertex_correspondence([1, 0], [1.0, 0.0])


def test_vertex_correspondence_round_trip(rng):
    for _ in range(200):
        d = rng.integers(2, 6)
        v = rng.normal(size=d)
        c = rng.normal(size=d)
        if c @ v > 0.9:
            c *= 0.5 / (c @ v)
        w = vertex_correspondence(v, c)
        assert np.linalg.norm(vertex_correspondence(w, -c) - v) <= 1e-9 * (1 + np.linalg.norm(v))


def test_inscribed_radius_examples():
    assert inscribed_radius_at_origin(CROSS2) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert inscribed_radius_at_origin(SQUARE) == pytest.approx(1.0, abs=1e-12)
    assert inscribed_radius_at_origin([[1, 0], [0, 1], [1, 1]]) == 0.0


def test_inscribed_radius_against_qhull_and_sampling(rng):
    dirs = rng.normal(size=(200_000, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    for _ in range(10):
        W = sphere_cloud(rng, 10, 3)
        r = inscribed_radius_at_origin(W)
        if r == 0:
            continue
        assert abs(r - qhull_inradius(W)) <= 1e-6
        # sampled support values bracket r from above
        assert np.min((W @ dirs.T).max(axis=0)) >= r - 1e-12


def test_certify_examples():
    assert certify_ball_in_hull(math.sqrt(2) * CROSS2, 1.0).contained
    assert certify_ball_in_hull(SQUARE, 1.0).contained
    check = certify_ball_in_hull(SQUARE, 1.01)
    assert not check.contained
    assert np.allclose(check.witness, [1, 0], atol=1e-12)
    assert support(SQUARE, check.witness) < 1.01


@pytest.mark.parametrize("d", [2, 3, 4])
def test_certify_grundbacher(d):
    assert certify_ball_in_hull(generate_grundbacher(d).points, 1.0).contained


def test_certify_failure_witness_random(rng):
    for _ in range(20):
        Q = sphere_cloud(rng, 7, 3)
        check = certify_ball_in_hull(Q, 1.0)
        if not check.contained:
            assert support(Q, check.witness) < 1.0


def test_atlantis_radius_values():
    assert atlantis_radius(1.0) == 0.5
    assert atlantis_radius(1e6) == pytest.approx(0.999999, abs=1e-9)
    m, d = 10, 2
    assert atlantis_radius(1 / (2 * (m + d))) == pytest.approx(1 / 25, abs=1e-15)
    with pytest.raises(ValueError):
        atlantis_radius(0.0)


@pytest.mark.parametrize("d", [2, 3])
def test_atlantis_transfer_property(rng, d):
    checked = 0
    for seed in range(15):
        Q = generate_random_ball_instance(d, 2 * d + 3, seed=100 + seed).points
        P = enumerate_vertices(polar_of_cloud(Q)).vertices
        c = rng.dirichlet(np.ones(len(P))) @ P * rng.uniform(0.1, 0.95)
        W = correspondence_images(Q, c)
        for _ in range(5):
            sub = sorted(rng.choice(len(Q), size=rng.integers(d + 1, len(Q) + 1), replace=False))
            lam = inscribed_radius_at_origin(W[sub])
            if lam <= 0:
                continue
            r = inscribed_radius_at_origin(Q[sub])
            assert r >= lam / (1 + lam) - 1e-8
            rec = atlantis_transfer(Q, c, sub)
            assert rec.image_radius == pytest.approx(lam) and rec.radius == pytest.approx(r)
            checked += 1
    assert checked > 20


def test_atlantis_transfer_hypothesis_enforced():
    with pytest.raises(HypothesisViolated):
        atlantis_transfer(CROSS2, [0.0, 0.0], [0, 1, 2, 3])
