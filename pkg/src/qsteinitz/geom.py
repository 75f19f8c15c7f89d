"""Small dense linear algebra and tolerance handling.

Dimensions here are desk scale (d <= 10). Elimination uses partial pivoting,
which is adequate for the well-scaled systems produced by the pipelines but
gives no guarantee on badly conditioned input: pivots are compared against
``sing_eps`` times the largest entry of the matrix, so a matrix with condition
number beyond roughly ``1/sing_eps`` is reported as singular.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every routine.

    Attributes
    ----------
    feas_eps : float
        Slack allowed when testing ``<x, n> <= 1`` style inequalities.
    sing_eps : float
        Relative pivot size below which a matrix counts as singular.
    grad_eps : float
        Relative stopping threshold for the center solver residual.
    """

    feas_eps: float = 1e-9
    sing_eps: float = 1e-12
    grad_eps: float = 1e-10

    def __post_init__(self):
        if min(self.feas_eps, self.sing_eps, self.grad_eps) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if not self.feas_eps > self.sing_eps:
            raise ValueError("feas_eps must exceed sing_eps")


DEFAULT_TOL = Tolerance()


def as_points(points, dim=None):
    """Coerce input to a finite float array of shape (m, d)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"expected an (m, d) array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def _lu(M, sing_eps):
    # returns (LU, perm, sign, singular)
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    n = A.shape[0]
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= sing_eps * scale:
            return A, perm, sign, True
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        A[k + 1:, k] /= A[k, k]
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return A, perm, sign, False


def det(M, tol=DEFAULT_TOL):
    """Determinant by Gaussian elimination with partial pivoting.

    Returns exactly 0.0 when a pivot falls below the singularity threshold.
    """
    LU, _, sign, singular = _lu(M, tol.sing_eps)
    if singular:
        return 0.0
    return sign * float(np.prod(np.diag(LU)))


def solve(M, b, tol=DEFAULT_TOL):
    """Solve ``M x = b``; raises :class:`SingularSystem` on a tiny pivot."""
    LU, perm, _, singular = _lu(M, tol.sing_eps)
    if singular:
        raise SingularSystem("matrix is singular within sing_eps")
    n = LU.shape[0]
    y = np.asarray(b, dtype=float)[perm].copy()
    for i in range(n):
        y[i] -= LU[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - LU[i, i + 1:] @ y[i + 1:]) / LU[i, i]
    return y


def gram_dual_coeffs(basis, x, tol=DEFAULT_TOL):
    """Coefficients ``t`` with ``x = sum_i t_i * basis[i]``.

    ``basis`` is a sequence of d linearly independent vectors (rows).
    """
    B = as_points(basis)
    return solve(B.T, np.asarray(x, dtype=float), tol)


def batched_solve(A, b, tol=DEFAULT_TOL):
    """Solve a stack of square systems ``A[k] x = b[k]``.

    Returns ``(x, ok)``; rows where the system is singular within ``sing_eps``
    (relative to the largest entry) have ``ok`` False and undefined ``x``.
    This is the vectorised counterpart of :func:`solve` used in the hot loops
    of vertex enumeration.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape[0] == 0:
        return np.zeros(b.shape), np.zeros(0, dtype=bool)
    # |det| over the Hadamard bound lies in [0, 1] and is scale free
    hadamard = np.prod(np.linalg.norm(A, axis=2), axis=1)
    dets = np.linalg.det(A)
    ok = np.abs(dets) > tol.sing_eps * np.maximum(hadamard, np.finfo(float).tiny)
    x = np.zeros(b.shape)
    if ok.any():
        x[ok] = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
    return x, ok


def fsum_rows(rows):
    """Correctly rounded column sums of a 2-D array.

    The result does not depend on row order, which keeps reductions
    reproducible under permutation of the input.
    """
    rows = np.asarray(rows, dtype=float)
    return np.array([math.fsum(col) for col in rows.T])


def unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    return v / n if n > 0 else v
