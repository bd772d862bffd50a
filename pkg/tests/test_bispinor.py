import math

import numpy as np
import pytest

from relosc.bispinor import (
    GammaSet,
    build_bispinor,
    chi,
    closed_form_norm,
    dirac_residual,
    eq24_row,
    factorization_check,
    literal_dirac_residual,
    mass_for_branch,
    spin_matrix,
)
from relosc.core import ConfigError, OscillatorConfig, kinematics
from relosc.operators import probe_points, random_corpus
from relosc.polyfield import Envelope


@pytest.mark.parametrize("gammas", [GammaSet.dirac(), GammaSet.chiral()])
def test_clifford_algebra(gammas):
    assert gammas.anticommutator_defect() <= 1e-15


def test_spin_matrix_and_spinors():
    S = spin_matrix()
    np.testing.assert_allclose(S @ S, 0.25 * np.eye(4))
    assert chi(0.5) @ chi(-0.5) == 0
    with pytest.raises(ValueError):
        chi(1.0)


def test_branch_masses(critical):
    assert mass_for_branch(critical, "+") == 0.0
    assert mass_for_branch(critical, "-") == pytest.approx(math.sqrt(2.0))
    with pytest.raises(ConfigError):
        mass_for_branch(OscillatorConfig(m=1.0, Omega=1.0), "+")


def test_norm_spot_values(critical):
    assert closed_form_norm(critical, "-") == pytest.approx(1 / math.sqrt(8), rel=1e-15)
    assert closed_form_norm(critical, "+") == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("beta", [0.0, 0.6])
@pytest.mark.parametrize("sign", ["+", "-"])
@pytest.mark.parametrize("s", [0.5, -0.5])
def test_measured_norm_matches_closed_form(beta, sign, s):
    cfg = OscillatorConfig.critical(beta=beta)
    bs = build_bispinor(cfg, sign, s)
    assert bs.norm == pytest.approx(closed_form_norm(cfg, sign), rel=1e-10)


@pytest.mark.parametrize("Omega", [0.1, 0.4])
def test_norm_off_critical(Omega):
    cfg = OscillatorConfig(m=1.0, Omega=Omega, beta=0.7)
    for sign in ("+", "-"):
        assert build_bispinor(cfg, sign).norm == pytest.approx(closed_form_norm(cfg, sign), rel=1e-10)


@pytest.mark.parametrize("beta", [0.0, 0.5, 0.9])
@pytest.mark.parametrize("s", [0.5, -0.5])
def test_lowering_branch_solves_dirac(beta, s):
    bs = build_bispinor(OscillatorConfig.critical(beta=beta), "-", s)
    assert dirac_residual(bs) <= 1e-9
    assert dirac_residual(bs, GammaSet.dirac()) == pytest.approx(dirac_residual(bs))


@pytest.mark.parametrize("s", [0.5, -0.5])
@pytest.mark.parametrize("Omega", [2 / 3, 0.3])
def test_raising_branch_solves_dirac_at_rest(s, Omega):
    bs = build_bispinor(OscillatorConfig(m=1.0, Omega=Omega), "+", s)
    assert dirac_residual(bs) <= 1e-9


def test_literal_single_ladder_form_for_lowering_branch():
    cfg = OscillatorConfig.critical(beta=0.5)
    bs = build_bispinor(cfg, "-")
    assert literal_dirac_residual(bs, "-", mass_for_branch(cfg, "-")) <= 1e-9


def test_wrong_mass_is_detected():
    cfg = OscillatorConfig.critical(beta=0.5)
    bs = build_bispinor(cfg, "-")
    assert literal_dirac_residual(bs, "-", 1.01 * mass_for_branch(cfg, "-")) > 1e-4


@pytest.mark.parametrize("sign", ["+", "-"])
@pytest.mark.parametrize("beta", [0.0, 0.6])
def test_shifted_momentum_factorisation(sign, beta):
    cfg = OscillatorConfig.critical(beta=beta)
    corpus = random_corpus(Envelope(cfg.Omega, beta), size=5, momentum=kinematics(cfg).P)
    assert max(factorization_check(cfg, sign, f) for f in corpus) <= 1e-10


@pytest.mark.parametrize("s", [0.5, -0.5])
def test_conjugate_row_is_componentwise_conjugate(s):
    bs = build_bispinor(OscillatorConfig.critical(beta=0.6), "+", s)
    pts = probe_points(bs.cfg.length_scale, per_axis=3)
    for row, ket in zip(eq24_row(bs), bs.components):
        np.testing.assert_allclose(row(*pts), np.conj(ket(*pts)), atol=1e-14)


def test_spin_down_flips_upper_slot(critical):
    up = build_bispinor(critical, "+", 0.5)
    down = build_bispinor(critical, "+", -0.5)
    pts = probe_points(critical.length_scale, per_axis=3)
    assert np.max(np.abs(up.components[1](*pts))) == 0
    assert np.max(np.abs(down.components[0](*pts))) == 0
    np.testing.assert_allclose(np.abs(up.components[0](*pts)), np.abs(down.components[1](*pts)))
