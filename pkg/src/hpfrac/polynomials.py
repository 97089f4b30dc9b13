"""Legendre and integrated-Legendre evaluations on the reference element.

The local basis on the reference element (0, 1) is ordered

    [1 - s,  s,  phi_2, ..., phi_p]

where phi_i is the integrated Legendre bubble.  Via the antiderivative
identity, phi_i(s) = (P_i(t) - P_{i-2}(t)) / (2i - 1) with t = 2s - 1,
which makes every evaluation O(1) per point after the three-term
recurrence.  Bubbles vanish at both endpoints.

Divided differences (phi(x) - phi(y)) / (x - y) are produced by a companion
recurrence rather than by literal division, so they stay accurate when x
and y coincide or nearly coincide; the singular-integral assembly depends
on that.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "legendre_values",
    "legendre_table",
    "integrated_legendre",
    "shape_values",
    "ShapeTable",
    "shape_table",
    "shape_divided_differences",
]


def legendre_table(k_max, t):
    """Legendre values P_0..P_{k_max} at the points t in [-1, 1].

    Returns an array of shape (k_max + 1,) + shape(t).
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((k_max + 1,) + t.shape)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = t
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1) * t * out[k] - k * out[k - 1]) / (k + 1)
    return out


def legendre_values(k_max, t):
    """[P_0(t), ..., P_{k_max}(t)] for a scalar t via the recurrence
    (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}."""
    return legendre_table(k_max, float(t))


def integrated_legendre(i, s_hat):
    """Integrated Legendre bubble phi_i(s_hat) for i >= 2 on [0, 1]."""
    if i < 2:
        raise ValueError("bubble index must be at least 2, got %r" % (i,))
    t = 2.0 * float(s_hat) - 1.0
    P = legendre_table(i, t)
    return (P[i] - P[i - 2]) / (2 * i - 1)


def shape_values(p, points):
    """Reference shape functions of degree p at the given points.

    Returns an array of shape (p + 1,) + shape(points): row 0 is 1 - s,
    row 1 is s, rows 2..p are the integrated Legendre bubbles.
    """
    pts = np.asarray(points, dtype=float)
    out = np.empty((p + 1,) + pts.shape)
    out[0] = 1.0 - pts
    if p >= 1:
        out[1] = pts
    if p >= 2:
        P = legendre_table(p, 2.0 * pts - 1.0)
        for i in range(2, p + 1):
            out[i] = (P[i] - P[i - 2]) / (2 * i - 1)
    return out


@dataclass(frozen=True)
class ShapeTable:
    """Shape-function values tabulated at a fixed set of reference points."""

    p: int
    points: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)   # (p + 1) x len(points)


def shape_table(p, points):
    """Tabulate all p + 1 reference shape functions at the given points."""
    if p < 1:
        raise ValueError("degree must be at least 1, got %r" % (p,))
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    return ShapeTable(p=p, points=pts, values=shape_values(p, pts))


def _legendre_dd_table(k_max, ta, tb):
    """Divided differences (P_k(ta) - P_k(tb)) / (ta - tb) for k = 0..k_max.

    Uses D_0 = 0, D_1 = 1 and

        (k+1) D_{k+1} = (2k+1) (P_k(tb) + ta D_k) - k D_{k-1},

    which never divides by ta - tb.
    """
    ta = np.asarray(ta, dtype=float)
    tb = np.asarray(tb, dtype=float)
    Pb = legendre_table(k_max, tb)
    out = np.empty((k_max + 1,) + ta.shape)
    out[0] = 0.0
    if k_max >= 1:
        out[1] = 1.0
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1) * (Pb[k] + ta * out[k]) - k * out[k - 1]) / (k + 1)
    return out


def shape_divided_differences(p, x, y):
    """(shape_k(x) - shape_k(y)) / (x - y) for all k = 0..p, elementwise.

    x and y are broadcast-compatible arrays of reference coordinates; the
    result has shape (p + 1,) + broadcast shape.  Valid also at x == y,
    where it returns the derivative.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    out = np.empty((p + 1,) + x.shape)
    out[0] = -1.0
    if p >= 1:
        out[1] = 1.0
    if p >= 2:
        D = _legendre_dd_table(p, 2.0 * x - 1.0, 2.0 * y - 1.0)
        for i in range(2, p + 1):
            out[i] = 2.0 * (D[i] - D[i - 2]) / (2 * i - 1)
    return out
