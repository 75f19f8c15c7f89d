import math

import numpy as np
import pytest

from qsteinitz.errors import BallNotContained
from qsteinitz.oracle import exhaustive_best_subset, generate_grundbacher, generate_random_ball_instance
from qsteinitz.polarity import inscribed_radius_at_origin
from qsteinitz.selection import (
    corollary12_radius,
    corollary14_radius,
    guaranteed_radius,
    prune_to_extreme,
    select_corollary12,
    select_corollary14,
    select_steinitz,
)


def cross(d, scale=1.0):
    return scale * np.vstack([np.eye(d), -np.eye(d)])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cross_polytope(d):
    with pytest.raises(BallNotContained) as info:
        select_steinitz(cross(d))
    assert info.value.radius == pytest.approx(1 / math.sqrt(d))
    cert = select_steinitz(cross(d, math.sqrt(d)))
    assert cert.selected_indices == list(range(2 * d))
    assert cert.certified_radius == pytest.approx(1.0, abs=1e-12)
    assert cert.guaranteed_radius == pytest.approx(1 / (6 * d + 1))


def test_grundbacher_d2():
    cert = select_steinitz(generate_grundbacher(2).points)
    assert cert.size == 4
    assert cert.guaranteed_radius == pytest.approx(1 / 15)
    assert 1 / 15 - 1e-8 <= cert.certified_radius <= math.sqrt(2 / 5) + 1e-9


def check_certificate(Q, cert, d):
    assert cert.size <= 2 * d
    assert len(set(cert.selected_indices)) == cert.size
    _, extreme = prune_to_extreme(Q)
    assert set(cert.selected_indices) <= set(extreme)
    assert cert.certified_radius >= guaranteed_radius(cert.pruned_count, d) - 1e-8
    assert cert.certified_radius == pytest.approx(inscribed_radius_at_origin(Q[cert.selected_indices]), abs=1e-12)
    lc = cert.lemma_checks
    assert lc["zero_sum_residual"] <= 1e-7
    assert lc["atlantis_midpoint_radius"] >= 0.5 - 1e-8
    assert lc["zonotope_margin"] >= -1e-8 and lc["simplex_margin"] >= -1e-8
    assert lc["centroid_identity_error"] <= 1e-9
    assert lc["caratheodory_max_step_residual"] <= 1e-9
    assert lc["image_radius"] >= 1 / (2 * (cert.pruned_count + d)) - 1e-8


def test_random_d3_m15_against_exhaustive():
    for seed in range(3):
        Q = generate_random_ball_instance(3, 15, seed=seed).points
        cert = select_steinitz(Q, seed=seed)
        check_certificate(Q, cert, 3)
        assert cert.certified_radius <= exhaustive_best_subset(Q, 6).best_radius + 1e-9


def test_interior_and_duplicate_points_are_pruned():
    Q = generate_random_ball_instance(2, 8, seed=11).points
    noisy = np.vstack([Q, [[0.0, 0.0]], Q[:2], 0.5 * Q[3:4]])
    a = select_steinitz(Q)
    b = select_steinitz(noisy)
    assert b.pruned_count == a.pruned_count
    assert b.selected_indices == a.selected_indices
    assert b.certified_radius == a.certified_radius


def test_m_equals_d_plus_one():
    # a simplex around the ball: only d + 1 points, all kept
    d = 3
    V = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) * 3.0
    cert = select_steinitz(V)
    assert cert.selected_indices == [0, 1, 2, 3]
    check_certificate(V, cert, d)


def test_corollary12_bound_and_scaling():
    Q = generate_random_ball_instance(2, 6, seed=2).points
    one = select_corollary12(Q, alpha=3, lam=1.0)
    assert one.guaranteed_radius == pytest.approx(1 / 30)
    assert one.certified_radius >= 1 / 30 - 1e-8
    two = select_corollary12(2 * Q, alpha=3, lam=2.0)
    assert two.certified_radius == 2 * one.certified_radius
    assert two.selected_indices == one.selected_indices
    assert corollary12_radius(3, 2.0, 2) == pytest.approx(2 / 30)


def test_corollary12_rejects_bad_alpha():
    Q = generate_random_ball_instance(2, 6, seed=2).points
    with pytest.raises(ValueError):
        select_corollary12(Q, alpha=1.0)
    with pytest.raises(ValueError):
        select_corollary12(Q, alpha=2.0)


def test_corollary14_d2():
    assert corollary14_radius(2) == pytest.approx(0.02525381361380527, abs=1e-15)
    Q = generate_random_ball_instance(2, 14, seed=5).points
    cert = select_corollary14(Q)
    assert cert.certified_radius >= corollary14_radius(2) - 1e-8
    assert cert.size <= 4
    assert cert.lemma_checks["stage1_radius"] >= 1 / math.sqrt(2) - 1e-8
    assert cert.lemma_checks["stage1_size"] <= 8


def test_corollary14_small_input():
    Q = cross(3, math.sqrt(3))
    cert = select_corollary14(Q)
    assert set(cert.selected_indices) <= set(range(6))
    assert cert.certified_radius >= corollary14_radius(3) - 1e-8


def test_corollary14_arithmetic():
    for d in range(1, 12):
        assert (1 / (2 * (2 * d * d + d) + 1)) / math.sqrt(d) >= corollary14_radius(d) - 1e-15
