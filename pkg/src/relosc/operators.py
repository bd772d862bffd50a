"""Linear differential operators on :class:`~relosc.polyfield.ScalarField`.

Index conventions (natural units):

* ``P_op(mu)`` is i d/dX^mu. It only sees the plane-wave factor, so on a
  field carrying momentum P it multiplies by the covariant component P_mu.
* ``Q_op(mu)`` is i d/dR^mu with R^mu = (tau, r1, r2, r3).
* The ladder operators carry a lower index. Their components are

  ====  ===========================================================
  mu    alpha_mu^(+/-)
  ====  ===========================================================
  0     -/+ d/dtau - (Omega/2) beta gamma^2 (r3 - beta tau)
  1, 2  -/+ d/dr_i + (Omega/2) r_i
  3     -/+ d/dr3  + (Omega/2) gamma^2 (r3 - beta tau)
  ====  ===========================================================

  and index raising uses diag(1, -1, -1, -1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import METRIC, OscillatorConfig, kinematics
from .polyfield import (
    R1,
    R2,
    R3,
    TAU,
    Envelope,
    ScalarField,
    poly_monomial,
    poly_mul,
    poly_add,
    random_poly_field,
)

ETA = np.diag(METRIC).copy()
SIGNS = ("+", "-")


def _sign(sign: str) -> int:
    if sign in ("+", +1, 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def other(sign: str) -> str:
    return "-" if _sign(sign) > 0 else "+"


class DiffOperator:
    """A named linear map ScalarField -> ScalarField.

    Supports ``A + B``, ``A - B``, ``k * A`` and composition ``A @ B``
    (B acts first).
    """

    def __init__(self, name: str, fn: Callable[[ScalarField], ScalarField]):
        self.name = name
        self._fn = fn

    def __call__(self, f: ScalarField) -> ScalarField:
        return self._fn(f)

    apply = __call__

    def __repr__(self):
        return f"DiffOperator({self.name!r})"

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(f"({self.name} + {other.name})", lambda f: self(f) + other(f))

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(f"({self.name} - {other.name})", lambda f: self(f) - other(f))

    def __mul__(self, k) -> "DiffOperator":
        return DiffOperator(f"{k}*{self.name}", lambda f: self(f) * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(f"{self.name}{other.name}", lambda f: self(other(f)))


def identity_op() -> DiffOperator:
    return DiffOperator("1", lambda f: f)


def scalar_op(k: complex, name: str | None = None) -> DiffOperator:
    return DiffOperator(name or str(k), lambda f: f * k)


def multiplication_op(poly: np.ndarray, name: str) -> DiffOperator:
    return DiffOperator(name, lambda f: f.times_poly(poly))


def partial_op(axis: int) -> DiffOperator:
    return DiffOperator(f"d_{axis}", lambda f: f.partial(axis))


# -- momentum operators

def P_op(mu: int) -> DiffOperator:
    """Total momentum i d/dX^mu (lower index)."""

    def apply(f: ScalarField) -> ScalarField:
        if f.momentum is None:
            return f.zero_like()
        return f * f.momentum.lower()[mu]

    return DiffOperator(f"P_{mu}", apply)


def P_upper_op(mu: int) -> DiffOperator:
    return ETA[mu] * P_op(mu)


def Q_op(mu: int) -> DiffOperator:
    """Relative momentum i d/dR^mu (lower index)."""
    return DiffOperator(f"Q_{mu}", lambda f: f.partial(mu) * 1j)


def contract(a: Callable[[int], DiffOperator], b: Callable[[int], DiffOperator]) -> DiffOperator:
    """Minkowski contraction a_mu b^mu of two lower-index operator families."""

    def apply(f):
        out = f.zero_like()
        for mu in range(4):
            out = out + a(mu)(b(mu)(f)) * ETA[mu]
        return out

    return DiffOperator("contract", apply)


def PP_op() -> DiffOperator:
    return DiffOperator("P.P", contract(P_op, P_op))


def QQ_op() -> DiffOperator:
    return DiffOperator("Q.Q", contract(Q_op, Q_op))


def PQ_op() -> DiffOperator:
    """P^mu Q_mu, the relative-energy constraint operator."""

    def apply(f):
        out = f.zero_like()
        for mu in range(4):
            out = out + P_upper_op(mu)(Q_op(mu)(f))
        return out

    return DiffOperator("P.Q", apply)


# -- potential

def potential_poly(Omega: float, beta: float, Omega_potential: float | None = None) -> np.ndarray:
    """U = -(Om^2/4) [r1^2 + r2^2 + gamma^2 (r3 - beta tau)^2] as polynomial."""
    Om = Omega if Omega_potential is None else Omega_potential
    env = Envelope(Omega, beta)
    z = env.boosted_r3()
    quad = poly_add(poly_monomial((0, 2, 0, 0)), poly_monomial((0, 0, 2, 0)))
    quad = poly_add(quad, env.gamma**2 * poly_mul(z, z))
    return -0.25 * Om * Om * quad


def potential_covariant_poly(Omega: float, beta: float) -> np.ndarray:
    """U = (Om^2/4) [R.R - (P.R / M)^2], built from the invariants directly."""
    g = 1.0 / np.sqrt(1.0 - beta * beta)
    RR = poly_add(poly_monomial((2, 0, 0, 0)), -(
        poly_add(poly_add(poly_monomial((0, 2, 0, 0)), poly_monomial((0, 0, 2, 0))), poly_monomial((0, 0, 0, 2)))
    ))
    # P.R / M = gamma (tau - beta r3)
    PR = poly_add(poly_monomial((1, 0, 0, 0), g), poly_monomial((0, 0, 0, 1), -g * beta))
    return 0.25 * Omega * Omega * poly_add(RR, -poly_mul(PR, PR))


def potential_op(cfg: OscillatorConfig, Omega_potential: float | None = None) -> DiffOperator:
    return multiplication_op(potential_poly(cfg.Omega, cfg.beta, Omega_potential), "U")


# -- ladder operators

@dataclass(frozen=True)
class LadderOperator:
    """Covariant raising (+) or lowering (-) operator alpha_mu, units of momentum."""

    mu: int
    sign: str
    Omega: float
    beta: float = 0.0

    def __post_init__(self):
        if self.mu not in (0, 1, 2, 3):
            raise ValueError(f"mu must be 0..3, got {self.mu}")
        object.__setattr__(self, "sign", "+" if _sign(self.sign) > 0 else "-")

    @classmethod
    def from_config(cls, mu: int, sign: str, cfg: OscillatorConfig) -> "LadderOperator":
        return cls(mu, sign, cfg.Omega, cfg.beta)

    @property
    def name(self) -> str:
        return f"alpha_{self.mu}^{self.sign}"

    def multiplier(self) -> np.ndarray:
        env = Envelope(self.Omega, self.beta)
        g2 = env.gamma**2
        half = 0.5 * self.Omega
        if self.mu == TAU:
            return -half * self.beta * g2 * env.boosted_r3()
        if self.mu in (R1, R2):
            powers = [0, 0, 0, 0]
            powers[self.mu] = 1
            return poly_monomial(powers, half)
        return half * g2 * env.boosted_r3()

    def __call__(self, f: ScalarField) -> ScalarField:
        return f.partial(self.mu) * (-_sign(self.sign)) + f.times_poly(self.multiplier())

    apply = __call__

    def as_op(self) -> DiffOperator:
        return DiffOperator(self.name, self)

    def scaled(self) -> DiffOperator:
        """Dimensionless a_mu = alpha_mu / sqrt(Omega)."""
        return DiffOperator(f"a_{self.mu}^{self.sign}", lambda f: self(f) * (1.0 / np.sqrt(self.Omega)))


def ladder(mu: int, sign: str, cfg: OscillatorConfig) -> LadderOperator:
    return LadderOperator.from_config(mu, sign, cfg)


def apply_ladder(op: LadderOperator, field: ScalarField) -> ScalarField:
    return op(field)


def oam_op() -> DiffOperator:
    """L3 = -i (r1 d/dr2 - r2 d/dr1)."""

    def apply(f):
        return (f.partial(R2).times_coord(R1) - f.partial(R1).times_coord(R2)) * (-1j)

    return DiffOperator("L3", apply)


def oam_apply(field: ScalarField) -> ScalarField:
    return oam_op()(field)


# -- probe grid and normalised residuals

def probe_points(length_scale: float, seed: int = 0, per_axis: int = 5, extent: float = 3.0, n_random: int = 20):
    """Tensor grid of ``per_axis``^4 points in [-extent, extent] length scales plus random points."""
    x = np.linspace(-extent, extent, per_axis) * length_scale
    grid = np.meshgrid(x, x, x, x, indexing="ij")
    pts = [g.ravel() for g in grid]
    rng = np.random.default_rng(seed)
    extra = rng.uniform(-extent, extent, size=(4, n_random)) * length_scale
    return tuple(np.concatenate([p, e]) for p, e in zip(pts, extra))


def field_scale(f: ScalarField, points) -> float:
    return float(np.max(np.abs(f(*points))))


def normalized_max(residual: ScalarField, reference: ScalarField, points, scale: float) -> float:
    """max |residual| / (scale * max |reference|) over ``points``."""
    ref = field_scale(reference, points)
    if ref == 0:
        raise ValueError("reference field vanishes on the probe grid")
    return float(np.max(np.abs(residual(*points)))) / (scale * ref)


# -- operator identities

def kg_operator(cfg: OscillatorConfig, Omega_potential: float | None = None) -> DiffOperator:
    """P.P + Q.Q + U - m^2."""
    m2 = cfg.m * cfg.m
    return PP_op() + QQ_op() + potential_op(cfg, Omega_potential) - scalar_op(m2, "m^2")


def ladder_sum_op(cfg: OscillatorConfig) -> DiffOperator:
    """P^mu (alpha_mu^+ + alpha_mu^-)."""

    def apply(f):
        out = f.zero_like()
        for mu in range(4):
            s = ladder(mu, "+", cfg)(f) + ladder(mu, "-", cfg)(f)
            out = out + P_upper_op(mu)(s)
        return out

    return DiffOperator("P.(a+ + a-)", apply)


def ladder_product_op(cfg: OscillatorConfig, sign: str) -> DiffOperator:
    """alpha_mu^(sign) alpha^(-sign) mu."""
    return contract(lambda mu: ladder(mu, sign, cfg).as_op(), lambda mu: ladder(mu, other(sign), cfg).as_op())


def _residual_points(cfg: OscillatorConfig, points, seed):
    return probe_points(cfg.length_scale, seed) if points is None else points


def identity_P_dot_alpha(cfg: OscillatorConfig, testfield: ScalarField, points=None, seed: int = 0) -> float:
    """Normalised max of P^mu (alpha_mu^+ + alpha_mu^-) f; vanishes identically."""
    pts = _residual_points(cfg, points, seed)
    M2 = kinematics(cfg).M ** 2
    return normalized_max(ladder_sum_op(cfg)(testfield), testfield, pts, M2)


def identity_product(cfg: OscillatorConfig, sign: str, testfield: ScalarField, points=None, seed: int = 0) -> float:
    """Normalised max of [alpha^s.alpha^-s - (Q.Q + U + s 3/2 Omega)] f."""
    pts = _residual_points(cfg, points, seed)
    lhs = ladder_product_op(cfg, sign)(testfield)
    rhs = QQ_op()(testfield) + potential_op(cfg)(testfield) + testfield * (_sign(sign) * 1.5 * cfg.Omega)
    M2 = kinematics(cfg).M ** 2
    return normalized_max(lhs - rhs, testfield, pts, M2)


def ground_state_couples(cfg: OscillatorConfig, order_points=None, seed: int = 0) -> dict:
    """Coefficients c_mu in alpha_mu^- alpha_mu^+ Psi_0 = c_mu Psi_0, extracted pointwise.

    Returns a dict with ``c0..c3``, their ``sum``, the closed-form values
    and ``spread``, the largest relative variation of the pointwise ratio.
    """
    from .scalar_field import build_psi

    if cfg.n != 0:
        raise ValueError("ground_state_couples requires n = 0")
    psi = build_psi(cfg)
    pts = _residual_points(cfg, order_points, seed)
    base = psi(*pts)
    keep = np.abs(base) > 1e-8 * np.max(np.abs(base))
    out = {}
    spread = 0.0
    for mu in range(4):
        f = ladder(mu, "-", cfg)(ladder(mu, "+", cfg)(psi))
        ratio = f(*pts)[keep] / base[keep]
        c = complex(np.median(ratio.real) + 1j * np.median(ratio.imag))
        scale = max(abs(c), cfg.Omega)
        spread = max(spread, float(np.max(np.abs(ratio - c))) / scale)
        out[f"c{mu}"] = c.real
    g2 = cfg.gamma**2
    Om, b2 = cfg.Omega, cfg.beta**2
    out["sum"] = out["c0"] + out["c1"] + out["c2"] + out["c3"]
    out["expected"] = {"c0": b2 * g2 * Om, "c1": Om, "c2": Om, "c3": g2 * Om, "sum": Om * (g2 + b2 * g2 + 2)}
    out["spread"] = spread
    out["constant_ratio"] = spread <= 1e-9
    return out


def first_moments_vanish(cfg: OscillatorConfig, order: int = 40) -> float:
    """max over mu and sign of |<Psi_0, alpha_mu^(+/-) Psi_0>| (instant form)."""
    from .polyfield import instant_overlap
    from .scalar_field import build_psi

    if cfg.n != 0:
        raise ValueError("first_moments_vanish requires n = 0")
    psi = build_psi(cfg)
    worst = 0.0
    for mu in range(4):
        for sign in SIGNS:
            val = instant_overlap(psi, ladder(mu, sign, cfg)(psi), order)
            worst = max(worst, abs(val))
    return worst


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return DiffOperator(f"[{a.name}, {b.name}]", lambda f: a(b(f)) - b(a(f)))


def random_corpus(envelope: Envelope, size: int = 20, seed: int = 12345, max_degree: int = 6, momentum=None):
    """Reproducible corpus of random polynomial-times-Gaussian fields."""
    rng = np.random.default_rng(seed)
    return [random_poly_field(rng, envelope, max_degree, momentum) for _ in range(size)]
