"""Constructive quantitative Steinitz selection with numerical certificates.

Given points whose convex hull contains the unit ball, pick at most 2d of
them whose hull still contains a ball of radius ``1 / (2(m + d) + 1)`` about
the origin, checking every intermediate inclusion along the way.
"""

__version__ = "0.1.0"

from .center import CenterResult, WeightedSystem, solve_center, verify_zero_sum
from .geom import DEFAULT_TOL, Tolerance
from .polarity import (
    UnitHalfspaceSystem,
    atlantis_radius,
    certify_ball_in_hull,
    enumerate_vertices,
    inscribed_radius_at_origin,
    polar_of_cloud,
    vertex_correspondence,
)
from .selection import (
    SelectionCertificate,
    select_corollary12,
    select_corollary14,
    select_steinitz,
)

__all__ = [
    "CenterResult",
    "DEFAULT_TOL",
    "SelectionCertificate",
    "Tolerance",
    "UnitHalfspaceSystem",
    "WeightedSystem",
    "atlantis_radius",
    "certify_ball_in_hull",
    "enumerate_vertices",
    "inscribed_radius_at_origin",
    "polar_of_cloud",
    "select_corollary12",
    "select_corollary14",
    "select_steinitz",
    "solve_center",
    "vertex_correspondence",
    "verify_zero_sum",
]
