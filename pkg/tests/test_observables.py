import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relosc.bispinor import build_bispinor, spin_matrix
from relosc.core import OscillatorConfig, kinematics
from relosc.observables import (
    critical_oam_fraction,
    critical_sam_fraction,
    default_beta_grid,
    expect,
    oam_closed_form,
    oam_expect,
    phase_surface,
    sam_closed_form,
    sam_expect,
    spin_composition_sweep,
    tam_expect,
)
from relosc.operators import oam_op
from relosc.polyfield import poly_eval
from relosc.scalar_field import build_psi


def test_bispinor_normalised(critical):
    res = expect(build_bispinor(critical, "+"))
    assert res.value == pytest.approx(1.0, abs=1e-13)
    assert res.quad_error < 1e-12


def test_matrix_shape_checked(critical):
    with pytest.raises(ValueError):
        expect(build_bispinor(critical, "+"), np.eye(2))


def test_mixed_bra_ket_rejected(critical):
    with pytest.raises(ValueError):
        expect(build_bispinor(critical, "+"), None, build_psi(critical))


def test_excited_state_decomposition_refused():
    bs = build_bispinor(OscillatorConfig.critical(qn=(1, 0, 0)), "+")
    with pytest.raises(ValueError):
        sam_expect(bs)


def test_rest_frame_split(critical):
    bs = build_bispinor(critical, "+", 0.5)
    assert sam_expect(bs) / 0.5 == pytest.approx(1 / 3, abs=1e-12)
    assert oam_expect(bs) / 0.5 == pytest.approx(2 / 3, abs=1e-12)


def test_spec_row_at_beta_06():
    row = spin_composition_sweep(beta_grid=[0.6])[0]
    assert row.sam == pytest.approx(2.08 / 3.36, abs=1e-12)
    assert row.oam == pytest.approx(1.28 / 3.36, abs=1e-12)


@pytest.mark.parametrize("sign", ["+", "-"])
@pytest.mark.parametrize("s", [0.5, -0.5])
@pytest.mark.parametrize("beta", [0.0, 0.3, 0.6, 0.9])
def test_total_angular_momentum(sign, s, beta):
    bs = build_bispinor(OscillatorConfig.critical(beta=beta), sign, s)
    assert tam_expect(bs) == pytest.approx(s, abs=1e-9)


def test_lowering_branch_has_no_orbital_part():
    bs = build_bispinor(OscillatorConfig.critical(beta=0.5), "-", 0.5)
    assert oam_expect(bs) == pytest.approx(0.0, abs=1e-13)
    assert sam_closed_form(bs.cfg, "-") == 0.5
    assert oam_closed_form(bs.cfg, "-") == 0.0


@settings(max_examples=15, deadline=None)
@given(ratio=st.floats(0.05, 2 / 3), beta=st.floats(0.0, 0.95), s=st.sampled_from([0.5, -0.5]))
def test_general_closed_forms(ratio, beta, s):
    cfg = OscillatorConfig(m=1.0, Omega=ratio, beta=beta)
    bs = build_bispinor(cfg, "+", s)
    assert sam_expect(bs) == pytest.approx(sam_closed_form(cfg, "+", s), abs=1e-10)
    assert oam_expect(bs) == pytest.approx(oam_closed_form(cfg, "+", s), abs=1e-10)


def test_fractions_sum_to_one():
    b = np.linspace(0, 0.99, 50)
    np.testing.assert_allclose(critical_sam_fraction(b) + critical_oam_fraction(b), 1.0, atol=1e-15)


def test_quad_error_bounds_true_error():
    rows = spin_composition_sweep(beta_grid=default_beta_grid(11))
    for r in rows:
        assert r.abs_err_sam <= r.sam_quad_error
        assert r.abs_err_oam <= r.oam_quad_error


def test_quad_error_flags_low_order(critical):
    bs = build_bispinor(critical.replace(beta=0.9), "+")
    res = expect(bs, oam_op(), order=2)
    true = abs(res.real - oam_closed_form(bs.cfg, "+"))
    assert res.quad_error >= true


def test_expect_accepts_matrix_and_operator(critical):
    bs = build_bispinor(critical, "+")
    assert expect(bs, spin_matrix()).operator == "matrix"
    assert expect(bs, oam_op()).state["sign"] == "+"


@pytest.mark.parametrize("s, winding", [(0.5, 1), (-0.5, -1)])
def test_helicoid(s, winding):
    bs = build_bispinor(OscillatorConfig.critical(beta=0.6), "+", s)
    surf = phase_surface(bs, R=1.0)
    assert surf.kind == "helicoid"
    assert surf.winding == winding
    assert surf.longitudinal_axis == "x3"
    # one wavelength, one turn: x3 spans [0, lambda)
    assert surf.points[:, 2].min() >= 0
    assert surf.points[:, 2].max() < surf.wavelength
    assert surf.wavelength == pytest.approx(2 * math.pi / kinematics(bs.cfg).p3)


def test_helicoid_points_sit_on_isophase(critical):
    bs = build_bispinor(critical.replace(beta=0.6), "+", 0.5)
    surf = phase_surface(bs, R=1.0, level=0.3)
    comp = bs.components[surf.component]
    x1, x2, x3 = surf.points.T
    arg = np.angle(poly_eval(comp.coeffs, 0.0, x1, x2, 0.0))
    k = kinematics(bs.cfg).p3
    total = np.angle(np.exp(1j * (arg + k * x3 - 0.3)))
    np.testing.assert_allclose(total, 0.0, atol=1e-12)


def test_planar_and_null_components(critical):
    bs = build_bispinor(critical, "+", 0.5)
    assert phase_surface(bs, 0).kind == "planar"
    assert phase_surface(bs, 0).longitudinal_axis == "t"
    null = phase_surface(bs, 1)
    assert null.kind == "null"
    assert null.points.shape == (0, 3)


def test_zero_radius_gives_empty_surface(critical):
    surf = phase_surface(build_bispinor(critical, "+"), R=0.0)
    assert surf.points.shape == (0, 3)
    assert surf.kind == "helicoid"


def test_lowering_branch_wavefront_refused(critical):
    with pytest.raises(ValueError):
        phase_surface(build_bispinor(critical, "-"))
