"""Gauss-Legendre and Gauss-Jacobi rules on the reference interval (0, 1).

All rules integrate against the weight (1 - x)^alpha * x^beta on (0, 1);
Legendre is the special case alpha = beta = 0.  Nodes and weights come from
the Golub-Welsch eigenvalue problem for the symmetric tridiagonal Jacobi
matrix of the monic orthogonal-polynomial recurrence, solved in-module by
implicit QL iteration with Wilkinson shifts (the problem sizes here never
warrant an external eigensolver).  Constructed rules are cached.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .special import gamma

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "gauss_jacobi",
    "apply",
    "apply_tensor",
]

_QL_TOL = 1e-15
_QL_MAX_SWEEPS = 60


@dataclass(frozen=True)
class QuadratureRule:
    """An n-point Gauss rule on (0, 1) for the weight (1-x)^alpha x^beta."""

    kind: str           # "legendre" or "jacobi"
    n: int
    alpha: float
    beta: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


def _tridiag_eigen(diag, sub):
    """Eigenvalues of a symmetric tridiagonal matrix plus first components
    of its normalized eigenvectors, by implicit QL with Wilkinson shifts.

    Returns (eigenvalues ascending, first components in matching order).
    """
    n = len(diag)
    d = np.array(diag, dtype=float)
    z = np.zeros(n)
    z[0] = 1.0
    if n == 1:
        return d, z
    e = np.zeros(n)
    e[: n - 1] = sub

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= _QL_TOL * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if sweeps >= _QL_MAX_SWEEPS:
                raise RuntimeError("QL iteration failed to converge")
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                if abs(f) >= abs(g):
                    c = g / f
                    r = math.hypot(c, 1.0)
                    e[i + 1] = f * r
                    s = 1.0 / r
                    c *= s
                else:
                    s = f / g
                    r = math.hypot(s, 1.0)
                    e[i + 1] = g * r
                    c = 1.0 / r
                    s *= c
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    return d[order], z[order]


def _jacobi_recurrence(n, alpha, beta):
    """Monic three-term recurrence coefficients for the Jacobi weight on
    (-1, 1): a_k (diagonal) for k = 0..n-1 and b_k (off-diagonal squared)
    for k = 1..n-1."""
    a = np.zeros(n)
    b = np.zeros(max(n - 1, 0))
    mu = alpha + beta
    a[0] = (beta - alpha) / (mu + 2.0)
    for k in range(1, n):
        two_k = 2.0 * k + mu
        a[k] = (beta * beta - alpha * alpha) / (two_k * (two_k + 2.0))
    if n > 1:
        b[0] = (
            4.0 * (alpha + 1.0) * (beta + 1.0)
            / ((mu + 2.0) ** 2 * (mu + 3.0))
        )
    for k in range(2, n):
        two_k = 2.0 * k + mu
        b[k - 1] = (
            4.0 * k * (k + alpha) * (k + beta) * (k + mu)
            / (two_k * two_k * (two_k + 1.0) * (two_k - 1.0))
        )
    return a, b


_rule_cache = {}


def _build_rule(n, alpha, beta):
    key = (int(n), float(alpha), float(beta))
    hit = _rule_cache.get(key)
    if hit is not None:
        return hit
    n, alpha, beta = key
    if n < 1:
        raise ValueError("rule order must be at least 1, got %r" % (n,))
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError("Jacobi exponents must exceed -1, got (%r, %r)" % (alpha, beta))
    a, b = _jacobi_recurrence(n, alpha, beta)
    # Affine map from (-1, 1) to (0, 1): x -> (x + 1) / 2.
    diag = (a + 1.0) / 2.0
    sub = np.sqrt(b) / 2.0
    nodes, first = _tridiag_eigen(diag, sub)
    # Zeroth moment of (1-x)^alpha x^beta on (0, 1).
    m0 = gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(alpha + beta + 2.0)
    weights = m0 * first * first
    kind = "legendre" if alpha == 0.0 and beta == 0.0 else "jacobi"
    nodes.setflags(write=False)
    weights.setflags(write=False)
    rule = QuadratureRule(kind=kind, n=n, alpha=alpha, beta=beta,
                          nodes=nodes, weights=weights)
    _rule_cache[key] = rule
    return rule


def gauss_legendre(n):
    """n-point Gauss-Legendre rule on (0, 1)."""
    return _build_rule(n, 0.0, 0.0)


def gauss_jacobi(n, alpha, beta):
    """n-point Gauss-Jacobi rule on (0, 1) for the weight (1-x)^alpha x^beta."""
    return _build_rule(n, alpha, beta)


def apply(rule, f):
    """Evaluate sum_i w_i f(x_i), accumulating in node order."""
    acc = 0.0
    for x, w in zip(rule.nodes, rule.weights):
        acc += w * f(x)
    return acc


def apply_tensor(rule_x, rule_y, f):
    """Evaluate sum_i sum_j w_i w_j f(x_i, y_j), rows in node order."""
    acc = 0.0
    for x, wx in zip(rule_x.nodes, rule_x.weights):
        inner = 0.0
        for y, wy in zip(rule_y.nodes, rule_y.weights):
            inner += wy * f(x, y)
        acc += wx * inner
    return acc
