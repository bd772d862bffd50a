"""Instant-form expectation values and the spin/orbital decomposition."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .bispinor import BispinorField, build_bispinor, closed_form_norm, mass_for_branch, spin_matrix
from .core import ConfigError, OscillatorConfig, kinematics
from .operators import DiffOperator, _sign, oam_op
from .polyfield import ScalarField, instant_form_grid, instant_values, poly_eval
from .scalar_field import DEFAULT_ORDER

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ExpectationResult:
    value: complex
    quad_error: float
    operator: str
    state: dict = field(default_factory=dict)

    @property
    def real(self) -> float:
        return float(np.real(self.value))


def _state_descriptor(x) -> dict:
    if isinstance(x, BispinorField):
        c = x.cfg
        return {"sign": x.sign, "s": x.s, "n": c.n, "beta": c.beta, "Omega": c.Omega, "m": c.m}
    return {"field": getattr(x, "label", ""), "Omega": x.envelope.Omega, "beta": x.envelope.beta}


def _components(x) -> tuple:
    if isinstance(x, BispinorField):
        return x.components
    if isinstance(x, ScalarField):
        return (x,)
    raise TypeError(f"cannot take expectation in {type(x).__name__}")


def _check_compatible(bra, ket):
    if isinstance(bra, BispinorField) != isinstance(ket, BispinorField):
        raise ValueError("bra and ket must both be bispinors or both scalar fields")
    if isinstance(bra, BispinorField):
        a, b = bra.cfg, ket.cfg
        if (a.m, a.Omega, a.beta) != (b.m, b.Omega, b.beta):
            raise ValueError("bra and ket were built from different oscillator configurations")
    else:
        if not bra.compatible(ket):
            raise ValueError("bra and ket live on different envelopes or plane waves")


def _overlap_sum(bra_c, ket_c, matrix, order) -> tuple[complex, float]:
    grid = instant_form_grid(ket_c[0].envelope, order)
    bv = [instant_values(c, order) for c in bra_c]
    kv = [instant_values(c, order) for c in ket_c]
    total = np.zeros_like(grid.weights, dtype=complex)
    for a, b_ in enumerate(bv):
        for b, k_ in enumerate(kv):
            coef = matrix[a, b] if matrix is not None else (1.0 if a == b else 0.0)
            if coef != 0:
                total += coef * np.conj(b_) * k_
    terms = grid.weights * total
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def expect(bra, op=None, ket=None, order: int = DEFAULT_ORDER) -> ExpectationResult:
    """Instant-form expectation <bra| op |ket> by 3-D Gauss-Hermite quadrature.

    ``op`` may be ``None`` (overlap), a 4x4 matrix acting on bispinor
    components, or a :class:`DiffOperator` acting on each component.
    ``quad_error`` is |Q_N - Q_N/2| plus a round-off floor.
    """
    ket = bra if ket is None else ket
    _check_compatible(bra, ket)
    bra_c, ket_c = _components(bra), _components(ket)
    matrix = None
    name = "1"
    if op is None:
        pass
    elif isinstance(op, np.ndarray):
        if op.shape != (len(ket_c), len(ket_c)):
            raise ValueError(f"matrix operator shape {op.shape} does not match {len(ket_c)} components")
        matrix = op
        name = "matrix"
    elif isinstance(op, DiffOperator) or callable(op):
        ket_c = tuple(op(c) for c in ket_c)
        name = getattr(op, "name", "op")
    else:
        raise TypeError(f"unsupported operator {op!r}")
    val, mag = _overlap_sum(bra_c, ket_c, matrix, order)
    half = max(order // 2, 1)
    coarse, _ = _overlap_sum(bra_c, ket_c, matrix, half)
    err = abs(val - coarse) + 64 * EPS * mag
    return ExpectationResult(val, err, name, _state_descriptor(ket))


def _require_ground(bs: BispinorField):
    if bs.cfg.n != 0:
        raise ValueError("angular-momentum decomposition is only defined for n = 0")


def sam_expect(bs: BispinorField, order: int = DEFAULT_ORDER) -> float:
    _require_ground(bs)
    return expect(bs, spin_matrix(), order=order).real


def oam_expect(bs: BispinorField, order: int = DEFAULT_ORDER) -> float:
    _require_ground(bs)
    return expect(bs, oam_op(), order=order).real


def tam_expect(bs: BispinorField, order: int = DEFAULT_ORDER) -> float:
    return sam_expect(bs, order) + oam_expect(bs, order)


def sam_closed_form(cfg: OscillatorConfig, sign: str, s: float | None = None) -> float:
    """<S3> in closed form for the ground-state bispinor."""
    s = cfg.s if s is None else s
    if _sign(sign) < 0:
        return s
    kin = kinematics(cfg)
    g2, b2 = cfg.gamma**2, cfg.beta**2
    N = closed_form_norm(cfg, "+")
    m_minus = mass_for_branch(cfg, "+")
    return N * N * ((kin.E + m_minus) ** 2 + kin.p3**2 + cfg.Omega * (g2 + b2 * g2 - 2.0)) * s


def oam_closed_form(cfg: OscillatorConfig, sign: str, s: float | None = None) -> float:
    s = cfg.s if s is None else s
    if _sign(sign) < 0:
        return 0.0
    N = closed_form_norm(cfg, "+")
    return N * N * 4.0 * cfg.Omega * s


def critical_sam_fraction(beta):
    """<S3>/s = (1 + 3 beta^2) / (3 + beta^2) at Omega = 2 m^2 / 3."""
    b2 = np.asarray(beta, dtype=float) ** 2
    return (1.0 + 3.0 * b2) / (3.0 + b2)


def critical_oam_fraction(beta):
    """<L3>/s = (2 - 2 beta^2) / (3 + beta^2) at Omega = 2 m^2 / 3."""
    b2 = np.asarray(beta, dtype=float) ** 2
    return (2.0 - 2.0 * b2) / (3.0 + b2)


@dataclass(frozen=True)
class SpinCompositionRow:
    beta: float
    sam: float
    oam: float
    tam: float
    sam_closed: float
    oam_closed: float
    sam_quad_error: float = 0.0
    oam_quad_error: float = 0.0

    @property
    def abs_err_sam(self) -> float:
        return abs(self.sam - self.sam_closed)

    @property
    def abs_err_oam(self) -> float:
        return abs(self.oam - self.oam_closed)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["abs_err_sam"] = self.abs_err_sam
        d["abs_err_oam"] = self.abs_err_oam
        return d


def default_beta_grid(count: int = 101, stop: float = 0.99) -> np.ndarray:
    return np.linspace(0.0, stop, count)


def spin_composition_sweep(
    m: float = 1.0,
    Omega: float | str = "critical",
    beta_grid: Iterable[float] | None = None,
    s: float = 0.5,
    sign: str = "+",
    order: int = DEFAULT_ORDER,
) -> list[SpinCompositionRow]:
    """<S3>/s, <L3>/s and their sum for the ground-state bispinor at each beta.

    ``Omega='critical'`` uses 2 m^2 / 3, where the closed forms reduce to
    rational functions of beta; otherwise the general closed forms are
    reported alongside.
    """
    if isinstance(Omega, str):
        if Omega != "critical":
            raise ValueError(f"unknown Omega mode {Omega!r}")
        Om = 2.0 * m * m / 3.0
    else:
        Om = float(Omega)
    betas = default_beta_grid() if beta_grid is None else np.asarray(list(beta_grid), dtype=float)
    if np.any((betas < 0) | (betas >= 1)):
        raise ConfigError("beta values must lie in [0, 1)")
    rows = []
    for b in betas:
        cfg = OscillatorConfig(m=m, Omega=Om, beta=float(b), s=s)
        bs = build_bispinor(cfg, sign, s, order)
        S = expect(bs, spin_matrix(), order=order)
        L = expect(bs, oam_op(), order=order)
        rows.append(
            SpinCompositionRow(
                beta=float(b),
                sam=S.real / s,
                oam=L.real / s,
                tam=(S.real + L.real) / s,
                sam_closed=sam_closed_form(cfg, sign, s) / s,
                oam_closed=oam_closed_form(cfg, sign, s) / s,
                sam_quad_error=S.quad_error / abs(s),
                oam_quad_error=L.quad_error / abs(s),
            )
        )
    return rows


# -- wavefront geometry

@dataclass(frozen=True)
class PhaseSurface:
    """Iso-phase sheet of one bispinor component.

    ``points`` holds (x1, x2, x_long) rows, where the longitudinal
    coordinate is x3 for a moving oscillator and t at rest. ``kind`` is
    'helicoid', 'planar' or 'null'; ``winding`` is the phase winding
    number around the axis.
    """

    points: np.ndarray
    kind: str
    winding: int
    component: int
    longitudinal_axis: str
    wavelength: float


def winding_number(f: ScalarField, radius: float, n: int = 256) -> int:
    phi = np.linspace(-math.pi, math.pi, n, endpoint=False)
    vals = poly_eval(f.coeffs, 0.0, radius * np.cos(phi), radius * np.sin(phi), 0.0)
    if np.min(np.abs(vals)) == 0:
        return 0
    d = np.angle(np.roll(vals, -1) / vals)
    return int(round(np.sum(d) / (2 * math.pi)))


def oam_component_index(bs: BispinorField) -> int:
    """Index of the lower component generated by alpha_1 +/- 2is alpha_2."""
    return 3 if bs.s > 0 else 2


def phase_surface(
    bs: BispinorField,
    component_index: int | None = None,
    R: float = 1.0,
    level: float = 0.0,
    n_rho: int = 16,
    n_phi: int = 64,
) -> PhaseSurface:
    """Points within radius R where the total phase of a component equals ``level``.

    The total phase is arg(component) - P.X with the plane wave advancing
    along x3 (wavenumber p3) when beta > 0, or along t (frequency E) at
    rest. One wavelength is covered, so a component with winding +/-1
    traces a single-turn helicoid.
    """
    if _sign(bs.sign) < 0:
        raise ValueError("wavefronts are defined for the raising-branch bispinor")
    idx = oam_component_index(bs) if component_index is None else component_index
    comp = bs.components[idx]
    kin = kinematics(bs.cfg)
    if bs.cfg.beta > 0:
        axis, k = "x3", kin.p3
    else:
        axis, k = "t", kin.E
    lam = 2 * math.pi / k
    probe = np.max(np.abs(comp.coeffs)) if comp.coeffs.size else 0.0
    if probe == 0:
        return PhaseSurface(np.empty((0, 3)), "null", 0, idx, axis, lam)
    wind = winding_number(comp, max(R, 1e-3 * bs.cfg.length_scale) if R > 0 else bs.cfg.length_scale)
    kind = "helicoid" if wind != 0 else "planar"
    if R <= 0:
        return PhaseSurface(np.empty((0, 3)), kind, wind, idx, axis, lam)
    rho = np.linspace(R / n_rho, R, n_rho)
    phi = np.linspace(-math.pi, math.pi, n_phi, endpoint=False) + math.pi / n_phi
    RHO, PHI = np.meshgrid(rho, phi, indexing="ij")
    x1, x2 = RHO * np.cos(PHI), RHO * np.sin(PHI)
    vals = poly_eval(comp.coeffs, 0.0, x1, x2, 0.0)
    arg = np.angle(vals)
    # moving: p3 x3 + arg = level at t=0; at rest: -E t + arg = level at x3=0
    if axis == "x3":
        xl = np.mod(level - arg, 2 * math.pi) / k
    else:
        xl = np.mod(arg - level, 2 * math.pi) / k
    pts = np.column_stack([x1.ravel(), x2.ravel(), xl.ravel()])
    return PhaseSurface(pts, kind, wind, idx, axis, lam)
