"""Exception types raised across the package.

Every exception carries a short machine-readable ``reason`` tag which the
command-line front end copies into its error records.
"""


class GeometryError(Exception):
    reason = "geometry-error"


class SingularSystem(GeometryError):
    reason = "singular-system"


class Unbounded(GeometryError):
    """A halfspace system admits a recession ray.

    ``ray`` holds a unit direction ``u`` with ``<u, n_i> <= 0`` for all normals.
    """

    reason = "unbounded"

    def __init__(self, message, ray=None):
        super().__init__(message)
        self.ray = ray


class DimensionTooLarge(GeometryError):
    reason = "dimension-too-large"


class CenterNotInterior(GeometryError):
    reason = "center-not-interior"


class InfeasiblePoint(GeometryError):
    reason = "infeasible-point"


class UnboundedPolytope(GeometryError):
    reason = "unbounded-polytope"


class NoConvergence(GeometryError):
    reason = "no-convergence"


class DegenerateCloud(GeometryError):
    reason = "degenerate-cloud"


class InclusionViolated(GeometryError):
    """A containment check failed; ``point`` is the worst offender."""

    reason = "inclusion-violated"

    def __init__(self, message, point=None, margin=None):
        super().__init__(message)
        self.point = point
        self.margin = margin


class TargetNotInHull(GeometryError):
    reason = "target-not-in-hull"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BallNotContained(GeometryError):
    reason = "ball-not-contained"

    def __init__(self, message, witness=None, radius=None):
        super().__init__(message)
        self.witness = witness
        self.radius = radius


class TooFewPoints(GeometryError):
    reason = "too-few-points"


class BudgetExceeded(GeometryError):
    reason = "budget-exceeded"


class RetryExhausted(GeometryError):
    reason = "retry-exhausted"


class HypothesisViolated(GeometryError):
    reason = "hypothesis-violated"


class VerificationFailed(GeometryError):
    """An internal consistency check failed. Always a bug signal."""

    reason = "verification-failed"
