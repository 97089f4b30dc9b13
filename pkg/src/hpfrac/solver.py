"""Direct solution of the discrete system by Cholesky factorization.

The stiffness matrix is symmetric and, for quadrature orders that keep the
discrete form positive definite, admits A = L L^T with a positive diagonal.
The factorization below is the standard column-by-column scheme with the
inner products done as vector operations; a nonpositive pivot raises
NotPositiveDefiniteError rather than producing NaNs, since losing
definiteness is an expected failure mode when the quadrature order is
pushed down to the polynomial degree.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NotPositiveDefiniteError",
    "DiscreteSolution",
    "cholesky_factor",
    "cholesky_solve",
    "energy",
]


class NotPositiveDefiniteError(Exception):
    """Raised when a Cholesky pivot is not strictly positive."""


@dataclass
class DiscreteSolution:
    """Coefficient vector of a Galerkin solution in its space."""

    coeffs: np.ndarray = field(repr=False)
    space: object = None
    quad_order: int = None


def _entries(A):
    M = getattr(A, "entries", A)
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square, got shape %r" % (M.shape,))
    return M


def cholesky_factor(A):
    """Lower-triangular L with A = L L^T; raises if A is not SPD."""
    M = _entries(A)
    n = M.shape[0]
    L = np.zeros_like(M)
    for j in range(n):
        d = M[j, j] - L[j, :j] @ L[j, :j]
        if not d > 0.0:
            raise NotPositiveDefiniteError(
                "nonpositive pivot %.3e in column %d" % (d, j)
            )
        L[j, j] = math.sqrt(d)
        if j + 1 < n:
            L[j + 1:, j] = (M[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L

def _forward_substitution(L, b):
    n = L.shape[0]
    y = np.zeros(n)
    for i in range(n):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    return y


def _backward_substitution(L, y):
    n = L.shape[0]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def cholesky_solve(A, b):
    """Solve A x = b; A may be a StiffnessMatrix or a plain square array."""
    M = _entries(A)
    b = np.asarray(b, dtype=float)
    if b.shape != (M.shape[0],):
        raise ValueError(
            "right-hand side has shape %r, expected (%d,)" % (b.shape, M.shape[0])
        )
    L = cholesky_factor(M)
    x = _backward_substitution(L, _forward_substitution(L, b))
    return DiscreteSolution(
        coeffs=x,
        space=getattr(A, "space", None),
        quad_order=getattr(A, "quad_order", None),
    )


def energy(A, x, y):
    """Bilinear value x^T A y for a StiffnessMatrix or plain square array."""
    M = _entries(A)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (M.shape[0],) or y.shape != (M.shape[0],):
        raise ValueError("vector shapes %r, %r do not match matrix dimension %d"
                         % (x.shape, y.shape, M.shape[0]))
    return float(x @ (M @ y))
