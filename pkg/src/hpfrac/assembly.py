"""Singular quadrature for the nonlocal bilinear form and stiffness assembly.

Every double integral of the form is reduced to quadrature on the reference
square, with the kernel singularity removed analytically before any number
is computed.  Four cases arise for an element pair:

* identical:  after symmetrization and the substitution y -> x*y, the
  integrand becomes dd_v(x, xy) * dd_w(x, xy) against the Jacobi weights
  x^(2-2s) and (1-y)^(1-2s), where dd denotes the divided difference of a
  reference shape function.  The quadrature is exact once n >= p.
* adjacent:   splitting at the diagonal through the shared node and
  applying the same substitution in each half gives two tensor rules,
  Jacobi x Legendre and Legendre x Jacobi, acting on regularized
  difference quotients; continuity across the shared node removes the
  1/x terms for conforming inputs.
* separated:  the integrand is smooth; plain Legendre x Legendre applies
  with kernel ((1-x) h_T + dist + y h_T')^(-1-2s).
* complement: the outer integral over the exterior of (-1, 1) is done in
  closed form, leaving one-dimensional rules; elements touching an
  endpoint get a Jacobi rule absorbing the boundary singularity.

`assemble_stiffness` walks element pairs in lexicographic order and builds
whole local blocks at once from tables computed a single time per
assembly; the separated case, which dominates asymptotically, is further
contracted in two stages so the kernel matrix of a pair is touched once.
Setting naive=True switches to the direct implementation instead: every
local matrix entry is computed independently, rebuilding its shape
evaluations, divided-difference tables, kernel values, and quadrature
weights from scratch with no reuse across entries or pairs.  Both modes
produce the same matrix up to roundoff; only the operation count differs.

An OpCounter tallies kernel evaluations (evaluations of the power-law
kernel or its one-dimensional reductions) and multiply-adds (floating
multiply/add operations actually executed: weighting, contraction,
scaling, scatter, and polynomial recurrences).  Recurrence tables are
charged per tabulated point: a divided-difference table to degree k costs
13k + 4 operations per point, a shape-value table 7k + 3.  In naive mode
the same conventions apply, but the tables are rebuilt per entry — and for
the separated case per quadrature point, exactly as the doubly-indexed sum
would execute with nothing hoisted out of the inner loop.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import COMPLEMENT, PairClass, pair_class
from .polynomials import shape_divided_differences, shape_values
from .quadrature import gauss_jacobi, gauss_legendre
from .special import kernel_constant

__all__ = [
    "OpCounter",
    "StiffnessMatrix",
    "q_identical",
    "q_adjacent",
    "q_separated",
    "q_complement",
    "assemble_load",
    "assemble_stiffness",
]


@dataclass
class OpCounter:
    """Operation tally for one assembly; fields only ever increase."""

    kernel_evals: int = 0
    multiply_adds: int = 0


def _charge_dd(ctr, k, npts):
    """Cost of a divided-difference table to degree k at npts points."""
    ctr.multiply_adds += (13 * k + 4) * npts


def _charge_vals(ctr, k, npts):
    """Cost of a shape-value table to degree k at npts points."""
    ctr.multiply_adds += (7 * k + 3) * npts


@dataclass
class StiffnessMatrix:
    """Dense symmetric Galerkin matrix of the quadrature bilinear form."""

    entries: np.ndarray = field(repr=False)
    quad_order: int
    s: float
    space: object = None

    @property
    def n_dim(self):
        return self.entries.shape[0]


def _as_coeffs(local, min_len=1):
    if local is None:
        return np.zeros(min_len)
    arr = np.asarray(local, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("local coefficients must be a nonempty 1d sequence")
    return arr


def _pair_coeffs(local):
    """Normalize a two-element local description (on_T, on_T2)."""
    if local is None:
        return np.zeros(1), np.zeros(1)
    if not isinstance(local, (tuple, list)) or len(local) != 2:
        raise ValueError("two-element locals must be a pair (on_T, on_T2)")
    return _as_coeffs(local[0]), _as_coeffs(local[1])


def _padded(vecs, length):
    out = []
    for v in vecs:
        w = np.zeros(length)
        w[: len(v)] = v
        out.append(w)
    return out


def q_identical(T, local_v, local_w, n, s):
    """Quadrature value of the pair integral over T x T.

    local_v, local_w are coefficient vectors in the reference basis
    [1-s, s, bubbles...]; the divided-difference form of the integrand is
    used throughout, so the removable singularity never enters.
    """
    v = _as_coeffs(local_v)
    w = _as_coeffs(local_w)
    pe = max(len(v), len(w)) - 1
    v, w = _padded((v, w), pe + 1)
    rx = gauss_jacobi(n, 0.0, 2.0 - 2.0 * s)
    ry = gauss_jacobi(n, 1.0 - 2.0 * s, 0.0)
    x = rx.nodes[:, None]
    dd = shape_divided_differences(pe, x, x * ry.nodes[None, :])
    dv = np.tensordot(v, dd, axes=1)
    dw = np.tensordot(w, dd, axes=1)
    acc = float(np.einsum("i,j,ij,ij->", rx.weights, ry.weights, dv, dw))
    return 2.0 * T.h ** (1.0 - 2.0 * s) * acc


def q_adjacent(T, T2, local_v, local_w, n, s):
    """Quadrature value of the pair integral over T x T2 for neighbors.

    T must be the left neighbor of T2.  local_v and local_w are pairs
    (coeffs on T, coeffs on T2); either entry may be None.  For inputs that
    are discontinuous across the shared node the jump term is kept
    explicitly (divided by the quadrature node, which never vanishes).
    """
    if T.index + 1 != T2.index:
        raise ValueError("q_adjacent expects T to be the left neighbor of T2")
    va, vb = _pair_coeffs(local_v)
    wa, wb = _pair_coeffs(local_w)
    pe = max(len(va), len(vb), len(wa), len(wb)) - 1
    va, vb, wa, wb = _padded((va, vb, wa, wb), pe + 1)
    jump_v = (va[1] if pe >= 1 else 0.0) - vb[0]
    jump_w = (wa[1] if pe >= 1 else 0.0) - wb[0]

    gj = gauss_jacobi(n, 0.0, 2.0 - 2.0 * s)
    gl = gauss_legendre(n)
    u = gj.nodes
    t = gl.nodes
    expo = -(1.0 + 2.0 * s)

    # Half with the T-variable farther from the shared node.
    dd_left = shape_divided_differences(pe, 1.0 - u, 1.0)         # (pe+1, n)
    dd_cross = shape_divided_differences(pe, u[:, None] * t[None, :], 0.0)
    Uv = (-(va @ dd_left))[:, None] - np.tensordot(vb, dd_cross, axes=1) * t[None, :]
    Uw = (-(wa @ dd_left))[:, None] - np.tensordot(wb, dd_cross, axes=1) * t[None, :]
    if jump_v != 0.0:
        Uv = Uv + jump_v / u[:, None]
    if jump_w != 0.0:
        Uw = Uw + jump_w / u[:, None]
    kern1 = (T.h + T2.h * t) ** expo
    term1 = float(np.einsum("i,j,ij,ij->", gj.weights, gl.weights * kern1, Uv, Uw))

    # Mirrored half.
    dd_cross2 = shape_divided_differences(pe, 1.0 - t[:, None] * u[None, :], 1.0)
    dd_right = shape_divided_differences(pe, u, 0.0)              # (pe+1, n)
    Vv = -np.tensordot(va, dd_cross2, axes=1) * t[:, None] - (vb @ dd_right)[None, :]
    Vw = -np.tensordot(wa, dd_cross2, axes=1) * t[:, None] - (wb @ dd_right)[None, :]
    if jump_v != 0.0:
        Vv = Vv + jump_v / u[None, :]
    if jump_w != 0.0:
        Vw = Vw + jump_w / u[None, :]
    kern2 = (T.h * t + T2.h) ** expo
    term2 = float(np.einsum("i,j,ij,ij->", gl.weights * kern2, gj.weights, Vv, Vw))

    return T.h * T2.h * (term1 + term2)


def q_separated(T, T2, local_v, local_w, n, s):
    """Quadrature value of the pair integral over T x T2 with a gap between."""
    if T.index > T2.index:
        T, T2 = T2, T
        local_v = (local_v[1], local_v[0]) if local_v is not None else None
        local_w = (local_w[1], local_w[0]) if local_w is not None else None
    if T2.index - T.index < 2:
        raise ValueError("q_separated expects elements with a gap between them")
    va, vb = _pair_coeffs(local_v)
    wa, wb = _pair_coeffs(local_w)
    pe = max(len(va), len(vb), len(wa), len(wb)) - 1
    va, vb, wa, wb = _padded((va, vb, wa, wb), pe + 1)
    dist = T2.x_left - T.x_right

    gl = gauss_legendre(n)
    x = gl.nodes
    sv = shape_values(pe, x)
    fa = va @ sv
    fb = vb @ sv
    ga = wa @ sv
    gb = wb @ sv
    kern = ((1.0 - x)[:, None] * T.h + dist + (x * T2.h)[None, :]) ** (-(1.0 + 2.0 * s))
    dv = fa[:, None] - fb[None, :]
    dw = ga[:, None] - gb[None, :]
    acc = float(np.einsum("i,j,ij,ij->", gl.weights, gl.weights, dv * dw, kern))
    return T.h * T2.h * acc


def q_complement(T, local_v, local_w, n, s):
    """Quadrature value of the integral of v w against the exterior kernel.

    The exterior integral is available in closed form, leaving the factor
    (dist_left + x h)^(-2s) + (dist_right + (1-x) h)^(-2s) under a single
    one-dimensional integral over T.  Sides touching an endpoint of (-1, 1)
    use a Jacobi rule with the boundary singularity moved into the weight;
    values of v, w at the touching endpoint are kept explicitly so that
    inputs that do not vanish there remain integrable in the quadrature
    sense.
    """
    v = _as_coeffs(local_v)
    w = _as_coeffs(local_w)
    pe = max(len(v), len(w)) - 1
    v, w = _padded((v, w), pe + 1)
    h = T.h
    d_left = T.x_left + 1.0
    d_right = 1.0 - T.x_right
    gl = gauss_legendre(n)
    total = 0.0

    if d_left == 0.0:
        gj = gauss_jacobi(n, 0.0, 2.0 - 2.0 * s)
        x = gj.nodes
        dd0 = shape_divided_differences(pe, x, 0.0)
        fv = v @ dd0 + v[0] / x
        fw = w @ dd0 + w[0] / x
        total += h ** (1.0 - 2.0 * s) / (2.0 * s) * float(np.sum(gj.weights * fv * fw))
    else:
        x = gl.nodes
        sv = shape_values(pe, x)
        kern = (d_left + x * h) ** (-2.0 * s)
        total += h / (2.0 * s) * float(np.sum(gl.weights * (v @ sv) * (w @ sv) * kern))

    if d_right == 0.0:
        gj = gauss_jacobi(n, 2.0 - 2.0 * s, 0.0)
        x = gj.nodes
        dd1 = shape_divided_differences(pe, x, 1.0)
        atone_v = v[1] if pe >= 1 else 0.0
        atone_w = w[1] if pe >= 1 else 0.0
        fv = -(v @ dd1) + atone_v / (1.0 - x)
        fw = -(w @ dd1) + atone_w / (1.0 - x)
        total += h ** (1.0 - 2.0 * s) / (2.0 * s) * float(np.sum(gj.weights * fv * fw))
    else:
        x = gl.nodes
        sv = shape_values(pe, x)
        kern = (d_right + (1.0 - x) * h) ** (-2.0 * s)
        total += h / (2.0 * s) * float(np.sum(gl.weights * (v @ sv) * (w @ sv) * kern))

    return total


def assemble_load(space, f, n):
    """Load vector b_i = sum_T h_T GL_n(shape_i * f on T)."""
    gl = gauss_legendre(n)
    sv = shape_values(space.p, gl.nodes)
    svw = sv * gl.weights
    b = np.zeros(space.N)
    for T in space.mesh.elements:
        xs = T.x_left + gl.nodes * T.h
        try:
            fx = np.asarray(f(xs), dtype=float)
        except (TypeError, ValueError):
            fx = np.array([float(f(x)) for x in xs])
        if fx.shape != xs.shape:
            fx = np.array([float(f(x)) for x in xs])
        contrib = T.h * (svw @ fx)
        idx = space.local_to_global[T.index]
        keep = idx >= 0
        np.add.at(b, idx[keep], contrib[keep])
    return b


class _Tables:
    """Element-independent reference tables for one assembly (fixed p, n, s)."""

    def __init__(self, p, n, s, ctr):
        self.p = p
        self.n = n
        expo = -(1.0 + 2.0 * s)
        self.expo = expo
        self.gj = gauss_jacobi(n, 0.0, 2.0 - 2.0 * s)
        self.gjy = gauss_jacobi(n, 1.0 - 2.0 * s, 0.0)
        self.gl = gauss_legendre(n)
        self.gjr = gauss_jacobi(n, 2.0 - 2.0 * s, 0.0)
        u = self.gj.nodes
        t = self.gl.nodes
        nsq = n * n
        q = p + 1

        # identical case: divided differences at (x_i, x_i y_j) and the
        # element-independent pair matrix.
        dd = shape_divided_differences(p, u[:, None], u[:, None] * self.gjy.nodes[None, :])
        wflat = np.outer(self.gj.weights, self.gjy.weights).reshape(-1)
        ddf = dd.reshape(q, nsq)
        self.g_ident = (ddf * wflat) @ ddf.T
        _charge_dd(ctr, p, nsq)
        ctr.multiply_adds += 2 * nsq + q * nsq + q * q * nsq

        # adjacent case: one-dimensional and two-dimensional parts of the
        # regularized difference quotients, per reference shape.
        self.adj_a1 = -shape_divided_differences(p, 1.0 - u, 1.0)          # (q, n)
        self.adj_b1 = -(shape_divided_differences(p, u[:, None] * t[None, :], 0.0)
                        * t[None, :])                                       # (q, u, t)
        self.adj_b2 = np.ascontiguousarray(
            -(shape_divided_differences(p, 1.0 - t[:, None] * u[None, :], 1.0)
              * t[:, None]).transpose(0, 2, 1))                             # (q, u, t)
        self.adj_a2 = -shape_divided_differences(p, u, 0.0)                 # (q, n)
        _charge_dd(ctr, p, n)
        _charge_dd(ctr, p, n)
        _charge_dd(ctr, p, nsq)
        _charge_dd(ctr, p, nsq)
        ctr.multiply_adds += 2 * (2 * q * nsq + nsq) + 2 * q * n

        # separated case: shape values at Legendre nodes, plain and weighted.
        self.sep_v = shape_values(p, t)
        self.sep_vw = self.sep_v * self.gl.weights
        _charge_vals(ctr, p, n)
        ctr.multiply_adds += q * n

        # complement case: boundary-side tables with the endpoint value kept.
        c0 = shape_divided_differences(p, u, 0.0)
        c0[0] += 1.0 / u
        self.comp_left = c0                                                 # (q, n)
        ur = self.gjr.nodes
        c1 = -shape_divided_differences(p, ur, 1.0)
        if p >= 1:
            c1[1] += 1.0 / (1.0 - ur)
        self.comp_right = c1                                                # (q, n)
        self.comp_mid = self.sep_v
        _charge_dd(ctr, p, n)
        _charge_dd(ctr, p, n)
        ctr.multiply_adds += 2 * n + q * n

        # conforming pair-function layout for adjacent blocks: function
        # indices [left hat, shared hat, right hat, T bubbles, T2 bubbles];
        # the one-sided atomic shapes 0..p of either element map onto these
        # positions (the shared hat appears in both lists).
        self.adj_t_funcs = np.array([0, 1] + list(range(3, p + 2)), dtype=int)
        self.adj_t2_funcs = np.array([1, 2] + list(range(p + 2, 2 * p + 1)), dtype=int)


def _identical_block(T, tab, s, ctr):
    scale = 2.0 * T.h ** (1.0 - 2.0 * s)
    block = scale * tab.g_ident
    ctr.multiply_adds += block.size
    return block


def _adjacent_halfblock(P, Q, w_p, m, ctr):
    """Contract one half of the adjacent-pair integrand.

    P: (q, n) one-dimensional parts against weights w_p; Q: (q, n, n)
    two-dimensional parts whose second axis carries the weights m (which
    include the one-dimensional kernel factor).  Returns the four atomic
    pair matrices (PP, PQ, QQ) of the expansion (P + Q)(P + Q).
    """
    q, n = P.shape
    S = float(np.sum(m))
    Pw = P * w_p
    PP = S * (Pw @ P.T)
    C = Q @ m                         # (q, n)
    PQ = Pw @ C.T
    Qw = Q * (w_p[:, None] * m[None, :])
    QQ = Qw.reshape(q, n * n) @ Q.reshape(q, n * n).T
    ctr.multiply_adds += (n + q * n + q * q * n) + (q * n * n + q * q * n) \
        + (n + q * n * n + q * q * n * n)
    return PP, PQ, QQ


def _adjacent_block(T, T2, tab, s, ctr):
    """Local matrix over the 2p+1 conforming functions on T union T2."""
    p = tab.p
    n = tab.n
    m1 = tab.gl.weights * (T.h + T2.h * tab.gl.nodes) ** tab.expo
    m2 = tab.gl.weights * (T.h * tab.gl.nodes + T2.h) ** tab.expo
    ctr.kernel_evals += 2 * n
    ctr.multiply_adds += 4 * n

    # Half 1: one-dimensional part lives on the T side (Jacobi axis).
    PP1, PQ1, QQ1 = _adjacent_halfblock(tab.adj_a1, tab.adj_b1, tab.gj.weights, m1, ctr)
    # Half 2: one-dimensional part lives on the T2 side.
    PP2, PQ2, QQ2 = _adjacent_halfblock(tab.adj_a2, tab.adj_b2, tab.gj.weights, m2, ctr)

    nf = 2 * p + 1
    block = np.zeros((nf, nf))
    tf = tab.adj_t_funcs
    t2f = tab.adj_t2_funcs
    block[np.ix_(tf, tf)] += PP1
    block[np.ix_(tf, t2f)] += PQ1
    block[np.ix_(t2f, tf)] += PQ1.T
    block[np.ix_(t2f, t2f)] += QQ1
    block[np.ix_(t2f, t2f)] += PP2
    block[np.ix_(t2f, tf)] += PQ2
    block[np.ix_(tf, t2f)] += PQ2.T
    block[np.ix_(tf, tf)] += QQ2
    block *= T.h * T2.h
    ctr.multiply_adds += 9 * block.size
    return block


def _separated_block(T, T2, tab, s, ctr):
    """Local matrix over the 2(p+1) one-sided functions, two-stage form."""
    n = tab.n
    q = tab.p + 1
    x = tab.gl.nodes
    w = tab.gl.weights
    kern = ((1.0 - x)[:, None] * T.h + (T2.x_left - T.x_right)
            + (x * T2.h)[None, :]) ** tab.expo
    ctr.kernel_evals += n * n
    ctr.multiply_adds += n * n + 2 * n

    r = kern @ w
    c = kern.T @ w
    B = tab.sep_vw @ kern
    cross = -(B @ tab.sep_vw.T)
    same_t = (tab.sep_v * (w * r)) @ tab.sep_v.T
    same_t2 = (tab.sep_v * (w * c)) @ tab.sep_v.T
    ctr.multiply_adds += 2 * n * n + q * n * n + q * q * n \
        + 2 * (2 * n + q * n + q * q * n)

    block = np.empty((2 * q, 2 * q))
    block[:q, :q] = same_t
    block[:q, q:] = cross
    block[q:, :q] = cross.T
    block[q:, q:] = same_t2
    block *= T.h * T2.h
    ctr.multiply_adds += block.size
    return block


def _identical_block_naive(T, tab, s, ctr):
    """Identical-pair block, one entry at a time with per-entry tables."""
    n = tab.n
    q = tab.p + 1
    u = tab.gj.nodes
    y = tab.gjy.nodes
    scale = 2.0 * T.h ** (1.0 - 2.0 * s)
    block = np.empty((q, q))
    for fi in range(q):
        for gi in range(q):
            k = max(fi, gi)
            dd = shape_divided_differences(k, u[:, None], u[:, None] * y[None, :])
            w2 = np.outer(tab.gj.weights, tab.gjy.weights)
            block[fi, gi] = scale * float(np.sum(w2 * dd[fi] * dd[gi]))
            _charge_dd(ctr, k, n * n)
            ctr.multiply_adds += 5 * n * n + 1
    return block


# Adjacent-pair conforming functions as (shape on T, shape on T2); either
# side may be absent.  Order: left hat, shared hat, right hat, T bubbles,
# T2 bubbles — matching the blockwise layout.
def _adjacent_functions(p):
    funcs = [(0, None), (1, 0), (None, 1)]
    funcs += [(i, None) for i in range(2, p + 1)]
    funcs += [(None, i) for i in range(2, p + 1)]
    return funcs


def _adjacent_entry_naive(T, T2, f, g, tab, s, ctr):
    """One conforming-pair entry of the adjacent block, no shared tables."""
    n = tab.n
    u = tab.gj.nodes
    t = tab.gl.nodes
    expo = -(1.0 + 2.0 * s)

    def first_half(func):
        a, b = func
        vals = np.zeros((n, n))
        if a is not None:
            vals += (-shape_divided_differences(a, 1.0 - u, 1.0)[a])[:, None]
            _charge_dd(ctr, a, n)
            ctr.multiply_adds += 2 * n + n * n
        if b is not None:
            dd = shape_divided_differences(b, u[:, None] * t[None, :], 0.0)[b]
            vals -= dd * t[None, :]
            _charge_dd(ctr, b, n * n)
            ctr.multiply_adds += 3 * n * n
        return vals

    def second_half(func):
        a, b = func
        vals = np.zeros((n, n))
        if a is not None:
            dd = shape_divided_differences(a, 1.0 - t[:, None] * u[None, :], 1.0)[a]
            vals -= dd * t[:, None]
            _charge_dd(ctr, a, n * n)
            ctr.multiply_adds += 3 * n * n
        if b is not None:
            vals += (-shape_divided_differences(b, u, 0.0)[b])[None, :]
            _charge_dd(ctr, b, n)
            ctr.multiply_adds += 2 * n + n * n
        return vals

    kern1 = (T.h + T2.h * t) ** expo
    ctr.kernel_evals += n
    w1 = np.outer(tab.gj.weights, tab.gl.weights * kern1)
    term1 = float(np.sum(w1 * first_half(f) * first_half(g)))
    ctr.multiply_adds += 2 * n + n * n + 3 * n * n

    kern2 = (T.h * t + T2.h) ** expo
    ctr.kernel_evals += n
    w2 = np.outer(tab.gl.weights * kern2, tab.gj.weights)
    term2 = float(np.sum(w2 * second_half(f) * second_half(g)))
    ctr.multiply_adds += 2 * n + n * n + 3 * n * n

    ctr.multiply_adds += 2
    return T.h * T2.h * (term1 + term2)


def _adjacent_block_naive(T, T2, tab, s, ctr):
    funcs = _adjacent_functions(tab.p)
    nf = len(funcs)
    block = np.empty((nf, nf))
    for fi in range(nf):
        for gi in range(nf):
            block[fi, gi] = _adjacent_entry_naive(
                T, T2, funcs[fi], funcs[gi], tab, s, ctr)
    return block


def _separated_block_naive(T, T2, tab, s, ctr):
    """Separated-pair block as the doubly-indexed sum would execute.

    The quadrature points of an entry form an n-by-n grid; nothing is
    hoisted out of the inner loop, so the kernel argument, the weights, and
    the shape values of both basis functions are evaluated afresh at every
    grid point (the recurrences run on broadcast n-by-n arrays, performing
    exactly the per-point work of the scalar double loop)."""
    n = tab.n
    q = tab.p + 1
    x = tab.gl.nodes
    w = tab.gl.weights
    dist = T2.x_left - T.x_right
    X = np.broadcast_to(x[:, None], (n, n))
    Y = np.broadcast_to(x[None, :], (n, n))
    block = np.empty((2 * q, 2 * q))
    for fi in range(2 * q):
        for gi in range(2 * q):
            ki = fi if fi < q else fi - q
            kj = gi if gi < q else gi - q
            dv = shape_values(ki, X if fi < q else Y)[ki]
            dw = shape_values(kj, X if gi < q else Y)[kj]
            _charge_vals(ctr, ki, n * n)
            _charge_vals(ctr, kj, n * n)
            sign = 1.0 if (fi < q) == (gi < q) else -1.0
            arg = (1.0 - X) * T.h + dist + Y * T2.h
            kern = arg ** tab.expo
            w2 = np.outer(w, w)
            block[fi, gi] = sign * T.h * T2.h * float(np.sum(w2 * dv * dw * kern))
            ctr.kernel_evals += n * n
            ctr.multiply_adds += 10 * n * n + 2
    return block


def _complement_block_naive(T, tab, s, ctr):
    """Complement block, one entry at a time with per-entry tables."""
    n = tab.n
    q = tab.p + 1
    h = T.h
    d_left = T.x_left + 1.0
    d_right = 1.0 - T.x_right
    block = np.empty((q, q))
    for fi in range(q):
        for gi in range(q):
            k = max(fi, gi)
            acc = 0.0
            if d_left == 0.0:
                x = tab.gj.nodes
                dd = shape_divided_differences(k, x, 0.0)
                fv = dd[fi] + (1.0 / x if fi == 0 else 0.0)
                gv = dd[gi] + (1.0 / x if gi == 0 else 0.0)
                acc += h ** (1.0 - 2.0 * s) / (2.0 * s) \
                    * float(np.sum(tab.gj.weights * fv * gv))
                ctr.multiply_adds += 6 * (k + 1) * n + 5 * n
            else:
                x = tab.gl.nodes
                sv = shape_values(k, x)
                kern = (d_left + x * h) ** (-2.0 * s)
                acc += h / (2.0 * s) * float(
                    np.sum(tab.gl.weights * sv[fi] * sv[gi] * kern))
                ctr.multiply_adds += 2 * (k + 1) * n + 5 * n
            ctr.kernel_evals += n
            if d_right == 0.0:
                x = tab.gjr.nodes
                dd = shape_divided_differences(k, x, 1.0)
                fv = -dd[fi] + (1.0 / (1.0 - x) if fi == 1 else 0.0)
                gv = -dd[gi] + (1.0 / (1.0 - x) if gi == 1 else 0.0)
                acc += h ** (1.0 - 2.0 * s) / (2.0 * s) \
                    * float(np.sum(tab.gjr.weights * fv * gv))
                ctr.multiply_adds += 6 * (k + 1) * n + 5 * n
            else:
                x = tab.gl.nodes
                sv = shape_values(k, x)
                kern = (d_right + (1.0 - x) * h) ** (-2.0 * s)
                acc += h / (2.0 * s) * float(
                    np.sum(tab.gl.weights * sv[fi] * sv[gi] * kern))
                ctr.multiply_adds += 2 * (k + 1) * n + 6 * n
            ctr.kernel_evals += n
            block[fi, gi] = acc
    return block


def _complement_block(T, tab, s, ctr):
    n = tab.n
    q = tab.p + 1
    h = T.h
    d_left = T.x_left + 1.0
    d_right = 1.0 - T.x_right

    if d_left == 0.0:
        vals = tab.comp_left
        wk = tab.gj.weights
        pref = h ** (1.0 - 2.0 * s) / (2.0 * s)
    else:
        vals = tab.comp_mid
        wk = tab.gl.weights * (d_left + tab.gl.nodes * h) ** (-2.0 * s)
        pref = h / (2.0 * s)
        ctr.multiply_adds += n
    ctr.kernel_evals += n
    block = pref * ((vals * wk) @ vals.T)
    ctr.multiply_adds += q * n + q * q * n + q * q

    if d_right == 0.0:
        vals = tab.comp_right
        wk = tab.gjr.weights
        pref = h ** (1.0 - 2.0 * s) / (2.0 * s)
    else:
        vals = tab.comp_mid
        wk = tab.gl.weights * (d_right + (1.0 - tab.gl.nodes) * h) ** (-2.0 * s)
        pref = h / (2.0 * s)
        ctr.multiply_adds += 2 * n
    ctr.kernel_evals += n
    block = block + pref * ((vals * wk) @ vals.T)
    ctr.multiply_adds += q * n + q * q * n + 2 * q * q
    return block


def _scatter(A, block, rows, fac, ctr):
    keep = rows >= 0
    if not np.all(keep):
        block = block[np.ix_(keep, keep)]
        rows = rows[keep]
    A[np.ix_(rows, rows)] += fac * block
    ctr.multiply_adds += 2 * block.size


def assemble_stiffness(space, s, n, counter=None, naive=False):
    """Assemble the dense Galerkin matrix of the quadrature bilinear form.

    Element pairs are visited in lexicographic order and whole local blocks
    are scattered at once; the summation order is fixed, so repeated runs
    produce bit-identical matrices.  The returned matrix is mirrored from
    its upper triangle, making it exactly symmetric.  With naive=True the
    separated-pair kernel reuse is turned off (see module docstring).
    """
    if n < 1:
        raise ValueError("quadrature order must be at least 1, got %r" % (n,))
    ctr = counter if counter is not None else OpCounter()
    p = space.p
    mesh = space.mesh
    M = mesh.num_elements
    l2g = space.local_to_global
    A = np.zeros((space.N, space.N))
    tab = _Tables(p, n, float(s), ctr)

    ident = _identical_block_naive if naive else _identical_block
    adjac = _adjacent_block_naive if naive else _adjacent_block
    separ = _separated_block_naive if naive else _separated_block
    compl_ = _complement_block_naive if naive else _complement_block

    for e in range(M):
        T = mesh.elements[e]
        _scatter(A, ident(T, tab, s, ctr), l2g[e], 1.0, ctr)
        for e2 in range(e + 1, M):
            T2 = mesh.elements[e2]
            if e2 == e + 1:
                rows = np.concatenate((
                    [l2g[e, 0]], [l2g[e, 1]], [l2g[e2, 1]],
                    l2g[e, 2:], l2g[e2, 2:],
                )).astype(int)
                _scatter(A, adjac(T, T2, tab, s, ctr), rows, 2.0, ctr)
            else:
                rows = np.concatenate((l2g[e], l2g[e2]))
                _scatter(A, separ(T, T2, tab, s, ctr), rows, 2.0, ctr)
        _scatter(A, compl_(T, tab, s, ctr), l2g[e], 2.0, ctr)

    A *= kernel_constant(s) / 2.0
    ctr.multiply_adds += A.size
    A = np.triu(A) + np.triu(A, 1).T
    return StiffnessMatrix(entries=A, quad_order=int(n), s=float(s), space=space)
