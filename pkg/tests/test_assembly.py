import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hpfrac.assembly import (
    OpCounter,
    StiffnessMatrix,
    assemble_load,
    assemble_stiffness,
    q_adjacent,
    q_complement,
    q_identical,
    q_separated,
)
from hpfrac.mesh import (
    COMPLEMENT,
    Element,
    PairClass,
    build_space,
    geometric_mesh,
    mesh_from_nodes,
    pair_class,
)
from hpfrac.special import kernel_constant

from oracle_values import ORACLE


def elem(x_left, x_right, index=0):
    return Element(index, x_left, x_right, x_right - x_left)


# ---------------------------------------------------------------------------
# single pair integrals against the frozen references
# ---------------------------------------------------------------------------

def test_identical_against_reference():
    cases = [
        ("ident_h0.25_s0.25", 0.25, 0.25,
         [0.5, -1.0, 0.75, 0.25], [-0.25, 0.5, 1.0, -0.5]),
        ("ident_h0.0625_s0.75", 0.0625, 0.75,
         [1.0, 0.5, -0.75, 0.25, 0.5], [0.0, -1.0, 0.5, 0.75, -0.25]),
        ("ident_h1_s0.5_sym", 1.0, 0.5, [0.0, 1.0, 0.5], [0.0, 1.0, 0.5]),
    ]
    for key, h, s, v, w in cases:
        T = elem(0.0, h)
        p = len(v) - 1
        got = q_identical(T, np.array(v), np.array(w), p, s)
        assert got == pytest.approx(ORACLE[key], rel=1e-13), key


def test_identical_is_exact_at_n_equals_p():
    """The rule built for degree p integrates the degree-p pair integral
    exactly, so raising n further must not move the value."""
    rng = np.random.default_rng(3)
    for p in (1, 3, 5):
        v = rng.uniform(-1.0, 1.0, size=p + 1)
        w = rng.uniform(-1.0, 1.0, size=p + 1)
        T = elem(-0.25, 0.5)
        base = q_identical(T, v, w, p, 0.4)
        finer = q_identical(T, v, w, p + 6, 0.4)
        assert base == pytest.approx(finer, rel=1e-12)


def test_adjacent_against_reference():
    hat_r = np.array([0.0, 1.0])     # rises to the shared node
    hat_l = np.array([1.0, 0.0])     # falls from the shared node
    T = elem(-0.5, 0.0, index=0)
    T2 = elem(0.0, 0.5, index=1)
    got = q_adjacent(T, T2, (hat_r, hat_l), (hat_r, hat_l), 40, 0.5)
    assert got == pytest.approx(ORACLE["adj_hats_s0.5"], rel=1e-12)

    T = elem(-0.75, -0.5, index=0)
    T2 = elem(-0.5, 0.0, index=1)
    b2 = np.array([0.0, 0.0, 1.0])
    got = q_adjacent(T, T2, (b2, None), (hat_r, hat_l), 40, 0.25)
    assert got == pytest.approx(ORACLE["adj_bubble_hat_s0.25"], rel=1e-12)

    b3 = np.array([0.0, 0.0, 0.0, 1.0])
    got = q_adjacent(T, T2, (b3, None), (None, b2), 40, 0.75)
    assert got == pytest.approx(ORACLE["adj_bubbles_s0.75"], rel=1e-12)


def test_adjacent_first_pair_of_graded_mesh():
    m = geometric_mesh(2, 0.5)
    v = np.zeros(7); v[6] = 1.0
    w = np.zeros(9); w[8] = 1.0
    got = q_adjacent(m.elements[0], m.elements[1], (v, None), (None, w),
                     50, 0.5)
    assert got == pytest.approx(ORACLE["adj74_sigma0.5_s0.5"], rel=1e-12)


def test_separated_against_reference():
    ones = np.array([1.0, 1.0])
    got = q_separated(elem(-1.0, -0.5, 0), elem(0.5, 1.0, 3),
                      (ones, None), (ones, None), 30, 0.5)
    assert got == pytest.approx(ORACLE["sep_consts_s0.5"], rel=1e-12)
    assert got == pytest.approx(math.log(9.0 / 8.0), rel=1e-12)

    hat_r = np.array([0.0, 1.0])
    b2 = np.array([0.0, 0.0, 1.0])
    got = q_separated(elem(-1.0, -0.5, 0), elem(0.5, 1.0, 3),
                      (hat_r, None), (None, b2), 30, 0.25)
    assert got == pytest.approx(ORACLE["sep_hat_bubble_s0.25"], rel=1e-12)

    m = geometric_mesh(2, 0.5)
    v = np.zeros(7); v[6] = 1.0
    w = np.zeros(9); w[8] = 1.0
    got = q_separated(m.elements[0], m.elements[2], (v, None), (None, w),
                      50, 0.5)
    assert got == pytest.approx(ORACLE["sep74_sigma0.5_s0.5"], rel=1e-11)


def test_separated_order_invariance():
    """Evaluating the pair in either element order gives the same value."""
    hat_r = np.array([0.0, 1.0])
    b2 = np.array([0.0, 0.0, 1.0])
    A = elem(-1.0, -0.5, 0)
    B = elem(0.5, 1.0, 3)
    ab = q_separated(A, B, (hat_r, None), (None, b2), 25, 0.3)
    ba = q_separated(B, A, (None, hat_r), (b2, None), 25, 0.3)
    assert ab == pytest.approx(ba, rel=1e-13)


def test_complement_against_reference():
    hat_r = np.array([0.0, 1.0])
    hat_l = np.array([1.0, 0.0])
    b2 = np.array([0.0, 0.0, 1.0])
    got = q_complement(elem(-1.0, -0.75), hat_r, hat_r, 40, 0.5)
    assert got == pytest.approx(ORACLE["comp_left_hat_s0.5"], rel=1e-12)
    assert got == pytest.approx(64.0 * math.log(8.0 / 7.0) - 8.0, rel=1e-12)
    got = q_complement(elem(-0.5, 0.0), b2, b2, 40, 0.25)
    assert got == pytest.approx(ORACLE["comp_interior_bubble_s0.25"], rel=1e-12)
    got = q_complement(elem(0.75, 1.0), hat_l, hat_l, 40, 0.75)
    assert got == pytest.approx(ORACLE["comp_right_hat_s0.75"], rel=1e-12)


def test_pair_argument_validation():
    T = elem(-0.5, 0.0, index=0)
    T2 = elem(0.0, 0.5, index=1)
    T4 = elem(0.6, 0.8, index=4)
    hat = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        q_adjacent(T, T4, (hat, None), (hat, None), 5, 0.5)
    with pytest.raises(ValueError):
        q_separated(T, T2, (hat, None), (hat, None), 5, 0.5)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-1.0, max_value=1.0),
                min_size=2, max_size=5),
       st.lists(st.floats(min_value=-1.0, max_value=1.0),
                min_size=2, max_size=5))
def test_identical_is_symmetric_bilinear(v, w):
    T = elem(-0.3, 0.4)
    p = max(len(v), len(w)) - 1
    vw = q_identical(T, np.array(v), np.array(w), p, 0.6)
    wv = q_identical(T, np.array(w), np.array(v), p, 0.6)
    assert vw == pytest.approx(wv, rel=1e-12, abs=1e-14)


# ---------------------------------------------------------------------------
# global assembly
# ---------------------------------------------------------------------------

def local_coeff_vectors(space, j):
    """Coefficients of global basis function j on every element."""
    M = space.mesh.num_elements
    p = space.p
    out = []
    for k in range(M):
        c = np.zeros(p + 1)
        for i in range(p + 1):
            if space.local_to_global[k, i] == j:
                c[i] = 1.0
        out.append(c if np.any(c) else None)
    return out


def reference_stiffness(space, s, n):
    """Direct evaluation of the bilinear form, pair by pair, through the
    public single-pair routines; quadratic in N and slow, but independent
    of the blockwise bookkeeping."""
    N = space.N
    elements = space.mesh.elements
    A = np.zeros((N, N))
    locs = [local_coeff_vectors(space, j) for j in range(N)]
    for i in range(N):
        for j in range(i, N):
            acc = 0.0
            for T in elements:
                vi, wj = locs[i][T.index], locs[j][T.index]
                if vi is not None and wj is not None:
                    acc += q_identical(T, vi, wj, n, s)
                for T2 in elements:
                    if T2.index <= T.index:
                        continue
                    lv = (locs[i][T.index], locs[i][T2.index])
                    lw = (locs[j][T.index], locs[j][T2.index])
                    if (lv[0] is None and lv[1] is None) or \
                            (lw[0] is None and lw[1] is None):
                        continue
                    cls = pair_class(T, T2)
                    if cls is PairClass.ADJACENT_LEFT_RIGHT:
                        acc += 2.0 * q_adjacent(T, T2, lv, lw, n, s)
                    else:
                        acc += 2.0 * q_separated(T, T2, lv, lw, n, s)
                if locs[i][T.index] is not None and locs[j][T.index] is not None:
                    acc += 2.0 * q_complement(T, locs[i][T.index],
                                              locs[j][T.index], n, s)
            A[i, j] = A[j, i] = 0.5 * kernel_constant(s) * acc
    return A


def test_assembled_matrix_matches_pairwise_reference():
    space = build_space(geometric_mesh(2, 0.3), 3)
    got = assemble_stiffness(space, 0.35, 6).entries
    ref = reference_stiffness(space, 0.35, 6)
    scale = np.max(np.abs(ref))
    assert np.max(np.abs(got - ref)) <= 1e-13 * scale


def test_assembled_matrix_is_exactly_symmetric():
    for L, sigma, p in [(2, 0.25, 2), (3, 0.5, 4)]:
        space = build_space(geometric_mesh(L, sigma), p)
        A = assemble_stiffness(space, 0.5, p + 1).entries
        assert np.array_equal(A, A.T)


def test_naive_mode_matches_blockwise():
    for L, sigma, p, n, s in [(1, 0.5, 2, 3, 0.5), (2, 0.25, 4, 5, 0.5),
                              (2, 0.172, 3, 4, 0.5)]:
        space = build_space(geometric_mesh(L, sigma), p)
        fast = assemble_stiffness(space, s, n).entries
        slow = assemble_stiffness(space, s, n, naive=True).entries
        scale = np.max(np.abs(fast))
        assert np.max(np.abs(fast - slow)) <= 1e-14 * scale


def test_stiffness_metadata():
    space = build_space(geometric_mesh(1, 0.5), 2)
    A = assemble_stiffness(space, 0.5, 3)
    assert isinstance(A, StiffnessMatrix)
    assert A.quad_order == 3
    assert A.s == 0.5
    assert A.n_dim == space.N
    assert A.entries.shape == (space.N, space.N)
    with pytest.raises(ValueError):
        assemble_stiffness(space, 0.5, 0)


def test_operation_counter():
    space = build_space(geometric_mesh(2, 0.25), 3)
    fast = OpCounter()
    assemble_stiffness(space, 0.5, 4, counter=fast)
    slow = OpCounter()
    assemble_stiffness(space, 0.5, 4, counter=slow, naive=True)
    assert fast.kernel_evals > 0 and fast.multiply_adds > 0
    assert slow.kernel_evals >= fast.kernel_evals
    assert slow.multiply_adds > fast.multiply_adds


# ---------------------------------------------------------------------------
# load vector
# ---------------------------------------------------------------------------

def test_load_vector_constant_rhs():
    """For f == 1: a hat integrates to the average of its two element
    widths, the degree-2 bubble to -h/3, higher bubbles to zero."""
    mesh = mesh_from_nodes([-1.0, -0.4, 0.1, 1.0])
    space = build_space(mesh, 4)
    b = assemble_load(space, lambda x: np.ones_like(x), 5)
    hs = [T.h for T in mesh.elements]
    assert b[0] == pytest.approx((hs[0] + hs[1]) / 2.0, rel=1e-14)
    assert b[1] == pytest.approx((hs[1] + hs[2]) / 2.0, rel=1e-14)
    for k in range(3):
        base = 2 + k * 3
        assert b[base + 0] == pytest.approx(-hs[k] / 3.0, rel=1e-14)
        assert b[base + 1] == pytest.approx(0.0, abs=1e-15)
        assert b[base + 2] == pytest.approx(0.0, abs=1e-15)


def test_load_vector_scalar_callable():
    """A plain scalar function must give the same vector as a vectorized
    one; the assembler has to cope with either."""
    space = build_space(geometric_mesh(2, 0.4), 3)
    vec = assemble_load(space, np.exp, 8)
    scal = assemble_load(space, lambda x: math.exp(x), 8)
    assert np.allclose(vec, scal, rtol=1e-15, atol=0.0)
    assert vec.shape == (space.N,)
