"""Gamma matrices, two-component spinors and the oscillator bispinors.

The bispinor with ladder sign ``sign`` (+ raising, - lowering) is::

    Psi^sign = N [ (E + m_(-sign) + alpha_0^sign) chi(s)                          ]
                 [ sigma . (p + alpha^sign) chi(s)                                ] Psi_n

where sigma . v chi(s) = 2s v3 chi(s) + (v1 + 2is v2) chi(-s). The lowering
branch carries mass m_+ and the raising branch m_-.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, OscillatorConfig, kinematics
from .operators import (
    ETA,
    _sign,
    kg_operator,
    ladder,
    normalized_max,
    P_op,
    other,
    probe_points,
)
from .polyfield import ScalarField, instant_overlap
from .scalar_field import DEFAULT_ORDER, build_psi

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class GammaSet:
    """Four 4x4 matrices gamma^0..gamma^3 (upper index)."""

    matrices: tuple
    name: str = "custom"

    @classmethod
    def dirac(cls) -> "GammaSet":
        I2, Z = np.eye(2), np.zeros((2, 2))
        g0 = np.block([[I2, Z], [Z, -I2]]).astype(complex)
        gs = [np.block([[Z, SIGMA[k]], [-SIGMA[k], Z]]) for k in (1, 2, 3)]
        return cls((g0, *gs), "dirac")

    @classmethod
    def chiral(cls) -> "GammaSet":
        I2, Z = np.eye(2), np.zeros((2, 2))
        g0 = np.block([[Z, I2], [I2, Z]]).astype(complex)
        gs = [np.block([[Z, SIGMA[k]], [-SIGMA[k], Z]]) for k in (1, 2, 3)]
        return cls((g0, *gs), "chiral")

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.matrices[mu]

    def lower(self, mu: int) -> np.ndarray:
        return ETA[mu] * self.matrices[mu]

    def anticommutator_defect(self) -> float:
        """max |{g^mu, g^nu} - 2 eta^{mu nu} I|."""
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                ac = self[mu] @ self[nu] + self[nu] @ self[mu]
                target = 2.0 * (ETA[mu] if mu == nu else 0.0) * np.eye(4)
                worst = max(worst, float(np.max(np.abs(ac - target))))
        return worst


def spin_matrix() -> np.ndarray:
    """S3 = (1/2) diag(sigma3, sigma3)."""
    return 0.5 * np.diag([1.0, -1.0, 1.0, -1.0]).astype(complex)


def chi(s: float) -> np.ndarray:
    """Two-component spin state: (1, 0) for s=+1/2, (0, 1) for s=-1/2."""
    if s == 0.5:
        return np.array([1.0, 0.0], dtype=complex)
    if s == -0.5:
        return np.array([0.0, 1.0], dtype=complex)
    raise ValueError(f"s must be +1/2 or -1/2, got {s!r}")


def mass_for_branch(cfg: OscillatorConfig, sign: str) -> float:
    """m_- for the raising branch, m_+ for the lowering branch."""
    if _sign(sign) > 0:
        if cfg.m_minus_sq < 0:
            raise ConfigError(
                f"raising-branch bispinor needs m_minus^2 >= 0, got {cfg.m_minus_sq:.6g}"
            )
        return math.sqrt(cfg.m_minus_sq)
    return math.sqrt(cfg.m_plus_sq)


def _sigma_dot(v1: ScalarField, v2: ScalarField, v3: ScalarField, s: float):
    """Components of sigma . v chi(s) as a 2-list of fields."""
    if s > 0:
        return [v3, v1 + v2 * 1j]
    return [v1 - v2 * 1j, -v3]


def _unnormalized_components(cfg: OscillatorConfig, sign: str, s: float, psi: ScalarField):
    kin = kinematics(cfg)
    mass = mass_for_branch(cfg, sign)
    a = [ladder(mu, sign, cfg) for mu in range(4)]
    up = psi * (kin.E + mass) + a[0](psi)
    v1, v2 = a[1](psi), a[2](psi)
    v3 = psi * kin.p3 + a[3](psi)
    zero = psi.zero_like()
    upper = [up, zero] if s > 0 else [zero, up]
    return upper + _sigma_dot(v1, v2, v3, s)


@dataclass(frozen=True, eq=False)
class BispinorField:
    sign: str
    s: float
    cfg: OscillatorConfig
    components: tuple
    norm: float
    psi: ScalarField = field(repr=False)

    def __call__(self, tau, r1, r2, r3) -> np.ndarray:
        """Stack of the four components evaluated at the given points."""
        return np.stack([c(tau, r1, r2, r3) for c in self.components])

    @property
    def label(self) -> str:
        return f"Psi_{self.cfg.n},{'+' if self.s > 0 else '-'}1/2^{self.sign}"

    def conjugate(self) -> tuple:
        """Component-wise complex conjugates (the row form), as fields."""
        return tuple(conjugate_field(c) for c in self.components)


def conjugate_field(f: ScalarField) -> ScalarField:
    mom = None
    if f.momentum is not None:
        from .core import FourVector

        mom = FourVector(tuple(-x for x in f.momentum))
    return ScalarField(np.conj(f.coeffs), f.envelope, mom, f.x_ref, f.label + "*")


def build_bispinor(
    cfg: OscillatorConfig, sign: str, s: float | None = None, order: int = DEFAULT_ORDER
) -> BispinorField:
    """Normalised bispinor for ladder sign ``sign`` and spin ``s`` (defaults to cfg.s).

    The normalisation constant is measured by instant-form quadrature.
    Excited states (n > 0) are constructible but no observable statement
    is made for them.
    """
    sign = "+" if _sign(sign) > 0 else "-"
    s = cfg.s if s is None else s
    cfg = cfg.replace(s=s)
    psi = build_psi(cfg)
    comps = _unnormalized_components(cfg, sign, s, psi)
    total = sum(instant_overlap(c, c, order).real for c in comps)
    N = 1.0 / math.sqrt(total)
    comps = tuple(c * N for c in comps)
    return BispinorField(sign, s, cfg, comps, N, psi)


def closed_form_norm(cfg: OscillatorConfig, sign: str) -> float:
    """Ground-state N_+ or N_- in natural units.

    N_- = 1 / sqrt((E + m_+)^2 + p3^2)
    N_+ = 1 / sqrt((E + m_-)^2 + p3^2 + Omega (gamma^2 + beta^2 gamma^2 + 2))
    """
    kin = kinematics(cfg)
    g2, b2 = cfg.gamma**2, cfg.beta**2
    if _sign(sign) < 0:
        return 1.0 / math.sqrt((kin.E + kin.m_plus) ** 2 + kin.p3**2)
    m_minus = mass_for_branch(cfg, "+")
    return 1.0 / math.sqrt((kin.E + m_minus) ** 2 + kin.p3**2 + cfg.Omega * (g2 + b2 * g2 + 2.0))


def eq24_row(bs: BispinorField) -> tuple:
    """Conjugate row built from conj(Psi_n) with i -> -i.

    The ladder operators are real, so the ladder acting on conj(Psi_n)
    reproduces the complex conjugate of the ket components; written as
    acting to the left this is the adjoint ladder of opposite sign.
    """
    cfg = bs.cfg
    kin = kinematics(cfg)
    mass = mass_for_branch(cfg, bs.sign)
    pc = conjugate_field(bs.psi)
    a = [ladder(mu, bs.sign, cfg) for mu in range(4)]
    up = pc * (kin.E + mass) + a[0](pc)
    v1, v2 = a[1](pc), a[2](pc)
    v3 = pc * kin.p3 + a[3](pc)
    zero = pc.zero_like()
    if bs.s > 0:
        comps = [up, zero, v3, v1 - v2 * 1j]
    else:
        comps = [zero, up, v1 + v2 * 1j, -v3]
    return tuple(c * bs.norm for c in comps)


# -- Dirac operator

def dirac_apply(
    cfg: OscillatorConfig,
    comps,
    sign: str,
    mass: float,
    gammas: GammaSet | None = None,
) -> list:
    """Apply the ladder-paired Dirac operator to four component fields.

    The operator is gamma_mu X^mu - mass with X^0 = E + alpha_0 and
    X^i = p^i + alpha_i. Ladder signs are paired with the spinor block the
    operator acts on: derivatives of the upper (large) components use
    ``alpha^sign`` in the spatial directions, everything else uses the
    lowering ladder. For ``sign='-'`` this is gamma_mu (P^mu + alpha^-mu) - m.
    """
    gammas = gammas or GammaSet.dirac()
    kin = kinematics(cfg)
    Pup = (kin.E, 0.0, 0.0, kin.p3)

    def X(mu, col, f):
        use = sign if (mu > 0 and col < 2) else "-"
        return f * Pup[mu] + ladder(mu, use, cfg)(f)

    out = [c * (-mass) for c in comps]
    for mu in range(4):
        g = gammas.lower(mu)
        for col in range(4):
            if not np.any(g[:, col]):
                continue
            xf = X(mu, col, comps[col])
            for row in range(4):
                if g[row, col] != 0:
                    out[row] = out[row] + xf * g[row, col]
    return out


def dirac_residual(bs: BispinorField, gammas: GammaSet | None = None, points=None, seed: int = 0) -> float:
    """Normalised max of the Dirac-operator action on ``bs`` over the probe grid.

    Normalised by M times the largest component magnitude.
    """
    cfg = bs.cfg
    pts = probe_points(cfg.length_scale, seed) if points is None else points
    mass = mass_for_branch(cfg, bs.sign)
    out = dirac_apply(cfg, bs.components, bs.sign, mass, gammas)
    M = kinematics(cfg).M
    ref = max(float(np.max(np.abs(c(*pts)))) for c in bs.components)
    return max(float(np.max(np.abs(o(*pts)))) for o in out) / (M * ref)


def literal_dirac_residual(bs: BispinorField, ladder_sign: str, mass: float, points=None, seed: int = 0) -> float:
    """Residual of gamma_mu (P^mu + alpha^(ladder_sign) mu) - mass with one ladder sign throughout."""
    cfg = bs.cfg
    pts = probe_points(cfg.length_scale, seed) if points is None else points
    kin = kinematics(cfg)
    Pup = (kin.E, 0.0, 0.0, kin.p3)
    gammas = GammaSet.dirac()
    out = [c * (-mass) for c in bs.components]
    for mu in range(4):
        g = gammas.lower(mu)
        for col in range(4):
            if not np.any(g[:, col]):
                continue
            xf = bs.components[col] * Pup[mu] + ladder(mu, ladder_sign, cfg)(bs.components[col])
            for row in range(4):
                if g[row, col] != 0:
                    out[row] = out[row] + xf * g[row, col]
    ref = max(float(np.max(np.abs(c(*pts)))) for c in bs.components)
    return max(float(np.max(np.abs(o(*pts)))) for o in out) / (kin.M * ref)


def factorization_check(cfg: OscillatorConfig, sign: str, testfield: ScalarField, points=None, seed: int = 0) -> float:
    """Compare [(P + alpha^-s).(P + alpha^s) - m_(-s)^2] f with the Klein-Gordon operator on f."""
    pts = probe_points(cfg.length_scale, seed) if points is None else points
    osign = other(sign)

    def shifted(mu, sg, f):
        return P_op(mu)(f) + ladder(mu, sg, cfg)(f)

    lhs = testfield.zero_like()
    for mu in range(4):
        lhs = lhs + shifted(mu, osign, shifted(mu, sign, testfield)) * ETA[mu]
    mass_sq = cfg.m * cfg.m - _sign(sign) * 1.5 * cfg.Omega
    lhs = lhs - testfield * mass_sq
    rhs = kg_operator(cfg)(testfield)
    M2 = kinematics(cfg).M ** 2
    return normalized_max(lhs - rhs, testfield, pts, M2)
