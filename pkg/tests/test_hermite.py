import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import hermite as nph

from relosc.hermite import gauss_hermite, hermite_coefficients, hermite_H, phi, phi_norm_sq

# textbook table, lowest power first
TABLE = {
    0: (1,),
    1: (0, 2),
    2: (-2, 0, 4),
    3: (0, -12, 0, 8),
    4: (12, 0, -48, 0, 16),
    5: (0, 120, 0, -160, 0, 32),
}


@pytest.mark.parametrize("j", sorted(TABLE))
def test_coefficient_table(j):
    assert hermite_coefficients(j) == TABLE[j]


@pytest.mark.parametrize("j", [0, 1, 4, 9, 20])
def test_recurrence_matches_numpy(j):
    x = np.linspace(-3, 3, 31)
    ref = nph.hermval(x, [0] * j + [1])
    np.testing.assert_allclose(hermite_H(j, x), ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))


def test_derivative_identity_by_finite_difference():
    # H_j' = 2 j H_{j-1}
    x, h = np.linspace(-2, 2, 9), 1e-5
    for j in range(1, 7):
        fd = (hermite_H(j, x + h) - hermite_H(j, x - h)) / (2 * h)
        np.testing.assert_allclose(fd, 2 * j * hermite_H(j - 1, x), rtol=1e-7, atol=1e-6)


def test_order_guards():
    with pytest.raises(ValueError):
        hermite_H(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_H(65, 0.0)
    with pytest.raises(ValueError):
        gauss_hermite(0)


def test_two_point_rule_closed_form():
    rule = gauss_hermite(2)
    np.testing.assert_allclose(rule.nodes, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
    np.testing.assert_allclose(rule.weights, [math.sqrt(math.pi) / 2] * 2, rtol=1e-14)


@pytest.mark.parametrize("order", [3, 10, 40, 80])
def test_rule_matches_numpy(order):
    x, w = nph.hermgauss(order)
    rule = gauss_hermite(order)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-12)
    np.testing.assert_allclose(rule.weights, w, rtol=1e-9, atol=1e-300)


@pytest.mark.parametrize("order", [5, 20, 40])
def test_exact_up_to_degree(order):
    rule = gauss_hermite(order)
    for k in range(0, 2 * order, 2):
        exact = math.gamma((k + 1) / 2)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-12)


def test_inexact_beyond_degree():
    rule = gauss_hermite(3)
    assert abs(rule.integrate(lambda x: x**6) - math.gamma(3.5)) > 1e-2


def test_orthogonality_of_basis_factors():
    Omega = 2 / 3
    x = np.linspace(-20, 20, 8001)
    for j in range(5):
        for k in range(5):
            val = np.trapezoid(phi(j, x, Omega) * phi(k, x, Omega), x)
            ref = phi_norm_sq(j, Omega) if j == k else 0.0
            assert val == pytest.approx(ref, abs=1e-9 * phi_norm_sq(max(j, k), Omega))


@given(j=st.integers(0, 12), x=st.floats(-4, 4))
def test_parity(j, x):
    assert hermite_H(j, -x) == pytest.approx((-1) ** j * hermite_H(j, x), rel=1e-12, abs=1e-9)
