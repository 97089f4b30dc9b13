import math

import pytest
from hypothesis import given, strategies as st

from hpfrac.special import gamma, kernel_constant, exact_solution, exact_energy

from oracle_values import ORACLE


def test_gamma_matches_stdlib():
    # stdlib gamma is the obvious cross-check; ours must agree to ~1e-13
    for x in [0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.7, 9.99,
              -0.25, -0.5, -0.75, -1.5, -2.3]:
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-13)


def test_gamma_integers_and_half_integers():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(1.5) == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-14)


def test_gamma_rejects_poles():
    for x in [0.0, -1.0, -2.0, -7.0]:
        with pytest.raises(ValueError):
            gamma(x)


@given(st.floats(min_value=0.05, max_value=8.0))
def test_gamma_recurrence(x):
    """Gamma(x + 1) = x Gamma(x) pins the Lanczos fit everywhere at once."""
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


def test_kernel_constant_closed_form():
    # C(1/2) = 1/pi
    assert kernel_constant(0.5) == pytest.approx(1.0 / math.pi, rel=1e-13)
    for s in (0.25, 0.5, 0.75):
        key = "kernel_constant_%s" % s
        assert kernel_constant(s) == pytest.approx(ORACLE[key], rel=1e-13)
        assert kernel_constant(s) > 0.0


def test_exact_energy_values():
    assert exact_energy(0.5) == pytest.approx(math.pi / 2.0, rel=1e-13)
    for s in (0.25, 0.5, 0.75):
        assert exact_energy(s) == pytest.approx(ORACLE["exact_energy_%s" % s],
                                                rel=1e-13)


def test_exact_solution_values():
    assert exact_solution(0.5, 0.0) == pytest.approx(1.0, rel=1e-13)
    assert exact_solution(0.25, 0.3) == pytest.approx(
        ORACLE["exact_solution_0.25_0.3"], rel=1e-13)
    # boundary values vanish for every order
    for s in (0.1, 0.5, 0.9):
        assert exact_solution(s, 1.0) == 0.0
        assert exact_solution(s, -1.0) == 0.0


def test_domain_validation():
    for bad in (0.0, 1.0, -0.3, 2.0):
        with pytest.raises(ValueError):
            kernel_constant(bad)
        with pytest.raises(ValueError):
            exact_energy(bad)
    with pytest.raises(ValueError):
        exact_solution(0.5, 1.5)
