"""Klein-Gordon product solutions of the relativistic 3-D oscillator.

Psi_n(X, R) = N_K Phi_u(r1) Phi_v(r2) Phi_w(gamma (r3 - beta tau)) exp(-i (E t - p3 x3))
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .core import OscillatorConfig, kinematics
from .hermite import hermite_coefficients, phi_norm_sq
from .operators import (
    PP_op,
    PQ_op,
    kg_operator,
    normalized_max,
    probe_points,
)
from .polyfield import (
    Envelope,
    ScalarField,
    instant_overlap,
    poly_add,
    poly_const,
    poly_monomial,
    poly_mul,
)

DEFAULT_ORDER = 40


def _hermite_of_poly(j: int, lin: np.ndarray) -> np.ndarray:
    """H_j applied to the polynomial ``lin``."""
    out = poly_const(0.0)
    power = poly_const(1.0)
    for k, c in enumerate(hermite_coefficients(j)):
        if k:
            power = poly_mul(power, lin)
        if c:
            out = poly_add(out, c * power)
    return out


def psi_norm_constant(cfg: OscillatorConfig) -> float:
    """N_K such that the instant-form norm of Psi_n is 1.

    Each Cartesian factor contributes sqrt(2/Omega) 2^j j! sqrt(pi); the
    contracted third axis contributes an extra 1/gamma.
    """
    u, v, w = cfg.qn.as_tuple()
    inv = phi_norm_sq(u, cfg.Omega) * phi_norm_sq(v, cfg.Omega) * phi_norm_sq(w, cfg.Omega) / cfg.gamma
    return 1.0 / math.sqrt(inv)


def build_psi(cfg: OscillatorConfig, x_ref: tuple[float, float] = (0.0, 0.0)) -> ScalarField:
    """Normalised Klein-Gordon state Psi_n for ``cfg`` with plane wave at X = (t, 0, 0, x3)."""
    kin = kinematics(cfg)
    env = Envelope(cfg.Omega, cfg.beta)
    k = math.sqrt(cfg.Omega / 2.0)
    u, v, w = cfg.qn.as_tuple()
    p1 = _hermite_of_poly(u, poly_monomial((0, 1, 0, 0), k))
    p2 = _hermite_of_poly(v, poly_monomial((0, 0, 1, 0), k))
    p3 = _hermite_of_poly(w, (k * cfg.gamma) * env.boosted_r3())
    coeffs = psi_norm_constant(cfg) * poly_mul(poly_mul(p1, p2), p3)
    label = f"Psi_{u}{v}{w}"
    return ScalarField(coeffs, env, kin.P, tuple(map(float, x_ref)), label)


def density(field: ScalarField, r) -> np.ndarray:
    """Instant-form probability density |Psi(tau=0, r)|^2."""
    r = np.asarray(r, dtype=float)
    val = field(0.0, r[..., 0], r[..., 1], r[..., 2])
    return np.abs(val) ** 2


def ground_density_closed_form(cfg: OscillatorConfig, r) -> np.ndarray:
    """N_K^2 exp[-(Omega/2)(r1^2 + r2^2 + gamma^2 r3^2)] for n = 0."""
    r = np.asarray(r, dtype=float)
    NK = psi_norm_constant(cfg.replace(qn=(0, 0, 0)))
    g2 = cfg.gamma**2
    return NK**2 * np.exp(-0.5 * cfg.Omega * (r[..., 0] ** 2 + r[..., 1] ** 2 + g2 * r[..., 2] ** 2))


def norm(field: ScalarField, order: int = DEFAULT_ORDER) -> float:
    return instant_overlap(field, field, order).real


def second_moment(field: ScalarField, axis: int, order: int = DEFAULT_ORDER) -> float:
    """<r_axis^2> in the instant form (axis 1..3)."""
    return instant_overlap(field, field.times_coord(axis).times_coord(axis), order).real


def kge_residual(
    field: ScalarField,
    cfg: OscillatorConfig,
    points=None,
    seed: int = 0,
    Omega_potential: float | None = None,
) -> float:
    """Normalised max of [P.P + Q.Q + U - m^2] Psi over the probe grid.

    ``Omega_potential`` replaces the spring constant inside U only, which is
    how a mis-tuned potential is detected.
    """
    pts = probe_points(cfg.length_scale, seed) if points is None else points
    M2 = kinematics(cfg).M ** 2
    res = kg_operator(cfg, Omega_potential)(field)
    return normalized_max(res, field, pts, M2)


def constraint_residuals(field: ScalarField, cfg: OscillatorConfig, points=None, seed: int = 0) -> dict:
    """Normalised residuals of P.P = M^2 (``pp``) and P.Q = 0 (``pq``)."""
    pts = probe_points(cfg.length_scale, seed) if points is None else points
    M2 = kinematics(cfg).M ** 2
    pp = PP_op()(field) - field * M2
    # P.Q uses the numeric 4-momentum, independent of whether the field carries the phase.
    P = kinematics(cfg).P
    probe = field if field.momentum is not None else ScalarField(field.coeffs, field.envelope, P, field.x_ref)
    pq = PQ_op()(probe)
    return {"pp": normalized_max(pp, field, pts, M2), "pq": normalized_max(pq, probe, pts, M2)}


def nonrelativistic_energy(cfg: OscillatorConfig) -> float:
    """E_O = omega (3/2 + n) with omega = Omega / 2m."""
    if cfg.m == 0:
        raise ValueError("the non-relativistic limit needs m > 0")
    if cfg.Omega > 0.1 * cfg.m * cfg.m:
        warnings.warn("Omega is not small against m^2; the non-relativistic energy is a poor approximation")
    omega = cfg.Omega / (2.0 * cfg.m)
    return omega * (1.5 + cfg.n)


def binding_energy(cfg: OscillatorConfig) -> float:
    """M - m, written to avoid cancellation: Omega (3/2 + n) / (M + m)."""
    M = kinematics(cfg).M
    return cfg.Omega * (1.5 + cfg.n) / (M + cfg.m)
