"""Meshes of (-1, 1), the geometrically graded mesh, and basis enumeration.

A mesh is a strictly increasing node sequence from -1 to 1.  The
geometrically graded mesh refines toward both endpoints with grading
factor sigma: for L layers it has 2L + 3 nodes

    x_0 = -1,  x_i = -1 + sigma^(L - i + 1)  (i = 1..L),
    x_{i+1} = 1 - sigma^(i - L)  (i = L..2L),  x_{2L+2} = 1,

hence 2L + 2 elements, symmetric about 0.

The degree-p space with zero boundary values is spanned by the interior
hat functions (one per interior node) followed by the element bubbles in
(element, degree) order.  Pair classification between elements — needed to
pick the right singular-quadrature scheme — goes by element index, never
by floating-point coordinate comparison.  The exterior of (-1, 1) is
represented by the COMPLEMENT marker, not by an element.
"""

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "Element",
    "Mesh1D",
    "mesh_from_nodes",
    "geometric_mesh",
    "shape_regularity",
    "element_map",
    "Hat",
    "Bubble",
    "Space",
    "build_space",
    "PairClass",
    "pair_class",
    "COMPLEMENT",
]


class Element(NamedTuple):
    index: int
    x_left: float
    x_right: float
    h: float


class _ComplementMarker:
    """Marker object standing for the exterior of (-1, 1)."""

    def __repr__(self):
        return "COMPLEMENT"


COMPLEMENT = _ComplementMarker()


@dataclass(frozen=True)
class Mesh1D:
    """Partition of (-1, 1) into M elements."""

    nodes: np.ndarray = field(repr=False)
    elements: tuple

    @property
    def num_elements(self):
        return len(self.elements)


def mesh_from_nodes(nodes):
    """Build a mesh from a strictly increasing node sequence spanning [-1, 1]."""
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or len(nodes) < 2:
        raise ValueError("need at least two nodes")
    if nodes[0] != -1.0 or nodes[-1] != 1.0:
        raise ValueError("mesh must span [-1, 1]")
    if not np.all(np.diff(nodes) > 0.0):
        raise ValueError("nodes must be strictly increasing")
    elements = tuple(
        Element(i, float(nodes[i]), float(nodes[i + 1]),
                float(nodes[i + 1]) - float(nodes[i]))
        for i in range(len(nodes) - 1)
    )
    nodes.setflags(write=False)
    return Mesh1D(nodes=nodes, elements=elements)


def geometric_mesh(L, sigma):
    """Geometrically graded mesh with L layers and grading factor sigma."""
    L = int(L)
    if L < 1:
        raise ValueError("layer count must be at least 1, got %r" % (L,))
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise ValueError("grading factor must lie in (0, 1), got %r" % (sigma,))
    nodes = np.empty(2 * L + 3)
    nodes[0] = -1.0
    for i in range(1, L + 1):
        nodes[i] = -1.0 + sigma ** (L - i + 1)
    for i in range(L, 2 * L + 1):
        nodes[i + 1] = 1.0 - sigma ** (i - L)
    nodes[2 * L + 2] = 1.0
    return mesh_from_nodes(nodes)


def shape_regularity(mesh):
    """Largest gamma in (0, 1] with gamma * h_i <= h_j for all neighbors."""
    hs = [T.h for T in mesh.elements]
    gamma = 1.0
    for a, b in zip(hs[:-1], hs[1:]):
        gamma = min(gamma, a / b, b / a)
    return gamma


def element_map(T, s_hat):
    """Affine map from the reference element (0, 1) onto T."""
    return T.x_left + np.asarray(s_hat, dtype=float) * T.h


class Hat(NamedTuple):
    node: int           # interior node index, 1..M-1


class Bubble(NamedTuple):
    element: int        # element index, 0..M-1
    degree: int         # local degree, 2..p


@dataclass(frozen=True)
class Space:
    """Degree-p spline space with zero boundary values on a mesh.

    basis lists the N global functions, all hats (by node index) first and
    then bubbles in (element, degree) order.  local_to_global maps
    (element, local shape index) to the global index, with -1 marking the
    two boundary hats that are excluded from the space; local shapes are
    ordered [left hat, right hat, bubble 2, ..., bubble p].
    """

    mesh: Mesh1D
    p: int
    basis: tuple
    local_to_global: np.ndarray = field(repr=False)

    @property
    def N(self):
        return len(self.basis)


def build_space(mesh, p):
    """Enumerate the basis of the degree-p zero-trace space on the mesh."""
    p = int(p)
    if p < 1:
        raise ValueError("degree must be at least 1, got %r" % (p,))
    M = mesh.num_elements
    basis = [Hat(i) for i in range(1, M)]
    basis += [Bubble(k, i) for k in range(M) for i in range(2, p + 1)]
    l2g = np.full((M, p + 1), -1, dtype=int)
    for k in range(M):
        if k >= 1:
            l2g[k, 0] = k - 1            # hat at node k
        if k + 1 <= M - 1:
            l2g[k, 1] = k                # hat at node k + 1
        for i in range(2, p + 1):
            l2g[k, i] = (M - 1) + k * (p - 1) + (i - 2)
    l2g.setflags(write=False)
    return Space(mesh=mesh, p=p, basis=tuple(basis), local_to_global=l2g)


class PairClass(enum.Enum):
    IDENTICAL = "identical"
    ADJACENT_LEFT_RIGHT = "adjacent_left_right"
    ADJACENT_RIGHT_LEFT = "adjacent_right_left"
    SEPARATED = "separated"
    COMPLEMENT = "complement"


def pair_class(T, T2):
    """Classify an element pair (or element against COMPLEMENT) by index."""
    if T2 is COMPLEMENT:
        return PairClass.COMPLEMENT
    if T.index == T2.index:
        return PairClass.IDENTICAL
    if T.index + 1 == T2.index:
        return PairClass.ADJACENT_LEFT_RIGHT
    if T.index - 1 == T2.index:
        return PairClass.ADJACENT_RIGHT_LEFT
    return PairClass.SEPARATED
