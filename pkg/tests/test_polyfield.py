import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relosc.core import FourVector
from relosc.polyfield import (
    R1,
    R3,
    TAU,
    Envelope,
    instant_overlap,
    poly_add,
    poly_der,
    poly_eval,
    poly_monomial,
    poly_mul,
    random_poly_field,
)


def test_poly_mul_matches_pointwise(rng):
    a = rng.normal(size=(2, 3, 2, 3))
    b = rng.normal(size=(3, 1, 2, 2))
    pts = rng.normal(size=(4, 10))
    np.testing.assert_allclose(poly_eval(poly_mul(a, b), *pts), poly_eval(a, *pts) * poly_eval(b, *pts), rtol=1e-12)


def test_poly_add_pads_shapes():
    c = poly_add(poly_monomial((0, 2, 0, 0)), poly_monomial((1, 0, 0, 1), 3.0))
    assert poly_eval(c, 2.0, 3.0, 0.0, 5.0) == pytest.approx(9.0 + 30.0)


def test_poly_der():
    c = poly_monomial((0, 3, 0, 0), 2.0)
    assert poly_eval(poly_der(c, R1), 0, 2.0, 0, 0) == pytest.approx(24.0)


@pytest.mark.parametrize("axis", [TAU, R1, 2, R3])
def test_partial_matches_finite_difference(rng, axis):
    env = Envelope(2 / 3, 0.6)
    f = random_poly_field(rng, env, max_degree=4)
    pts = rng.uniform(-2, 2, size=(4, 12))
    h = 1e-5
    shift = np.zeros((4, 1))
    shift[axis] = h
    fd = (f(*(pts + shift)) - f(*(pts - shift))) / (2 * h)
    np.testing.assert_allclose(f.partial(axis)(*pts), fd, rtol=1e-6, atol=1e-7 * np.max(np.abs(fd)))


def test_envelope_log_grad_consistent(rng):
    env = Envelope(0.8, 0.5)
    pts = rng.uniform(-1, 1, size=(4, 5))
    h = 1e-6
    for axis in range(4):
        shift = np.zeros((4, 1))
        shift[axis] = h
        fd = (np.log(env(*(pts + shift))) - np.log(env(*(pts - shift)))) / (2 * h)
        np.testing.assert_allclose(poly_eval(env.log_grad(axis), *pts).real, fd, atol=1e-7)


def test_fields_on_different_envelopes_refuse_to_mix(rng):
    a = random_poly_field(rng, Envelope(1.0, 0.0))
    b = random_poly_field(rng, Envelope(1.0, 0.5))
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        instant_overlap(a, b, 10)


def test_overlap_gaussian_integral():
    # integral of exp(-(Omega/2)(x^2 + y^2 + gamma^2 z^2)) = (2 pi / Omega)^(3/2) / gamma
    env = Envelope(0.5, 0.8)
    one = random_poly_field(np.random.default_rng(0), env, max_degree=0, n_terms=1)
    one = one * (1.0 / one.coeffs[0, 0, 0, 0])
    ref = (2 * np.pi / 0.5) ** 1.5 / env.gamma
    assert instant_overlap(one, one, 4).real == pytest.approx(ref, rel=1e-13)


def test_phase_is_unimodular():
    env = Envelope(1.0, 0.3)
    f = random_poly_field(np.random.default_rng(1), env, momentum=FourVector((2.0, 0, 0, 0.6)))
    g = f.with_reference(1.3, -0.4)
    assert abs(g.phase()) == pytest.approx(1.0)
    assert instant_overlap(g, g, 20).real == pytest.approx(instant_overlap(f, f, 20).real, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), beta=st.floats(0.0, 0.95))
def test_overlap_is_hermitian(seed, beta):
    rng = np.random.default_rng(seed)
    env = Envelope(2 / 3, beta)
    a = random_poly_field(rng, env, max_degree=3)
    b = random_poly_field(rng, env, max_degree=3)
    ab = instant_overlap(a, b, 12)
    ba = instant_overlap(b, a, 12)
    assert ab == pytest.approx(np.conj(ba), rel=1e-10, abs=1e-12)
