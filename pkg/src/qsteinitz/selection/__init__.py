from .caratheodory import CaratheodoryResult, anchored_caratheodory
from .lp import ConvexCombination, in_hull, initial_convex_combination
from .maxvol import (
    InclusionCheck,
    SimplexResult,
    max_volume_simplex_at_origin,
    verify_lemma23_inclusions,
)
from .pipeline import (
    SelectionCertificate,
    corollary12_radius,
    corollary14_radius,
    guaranteed_radius,
    prune_to_extreme,
    select_corollary12,
    select_corollary14,
    select_steinitz,
)

__all__ = [
    "CaratheodoryResult",
    "ConvexCombination",
    "InclusionCheck",
    "SelectionCertificate",
    "SimplexResult",
    "anchored_caratheodory",
    "corollary12_radius",
    "corollary14_radius",
    "guaranteed_radius",
    "in_hull",
    "initial_convex_combination",
    "max_volume_simplex_at_origin",
    "prune_to_extreme",
    "select_corollary12",
    "select_corollary14",
    "select_steinitz",
    "verify_lemma23_inclusions",
]
