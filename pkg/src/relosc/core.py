"""Units, Minkowski algebra and oscillator kinematics.

All numerics use natural units (hbar = c = 1). Boosts are along axis 3 only.
Four-vectors are stored with contravariant components in index order 0..3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# m_minus^2 within this (relative) distance of zero is treated as exactly zero;
# 2/3 is not representable, so the critical spring constant lands a few ulp off.
MASS_SQ_ZERO_TOL = 1e-12


class ConfigError(ValueError):
    """Raised for physically invalid oscillator parameters."""


class UnitConvention(str, Enum):
    NATURAL = "natural"


@dataclass(frozen=True)
class Units:
    """Unit convention record. Only natural units are supported."""

    convention: UnitConvention = UnitConvention.NATURAL
    length_scale: float = 1.0

    def __post_init__(self):
        if self.length_scale <= 0:
            raise ConfigError("length_scale must be positive")

    @classmethod
    def for_omega(cls, Omega: float) -> "Units":
        """Units whose reporting length is the oscillator width sqrt(2/Omega)."""
        return cls(length_scale=math.sqrt(2.0 / Omega))


@dataclass(frozen=True)
class FourVector:
    components: tuple[float, float, float, float]

    def __post_init__(self):
        c = tuple(float(x) for x in self.components)
        if len(c) != 4:
            raise ValueError("a four-vector needs exactly 4 components")
        object.__setattr__(self, "components", c)

    def __getitem__(self, mu: int) -> float:
        return self.components[mu]

    def __iter__(self):
        return iter(self.components)

    def lower(self) -> tuple[float, float, float, float]:
        """Covariant components (x^0, -x^1, -x^2, -x^3)."""
        c = self.components
        return (c[0], -c[1], -c[2], -c[3])

    def as_array(self) -> np.ndarray:
        return np.array(self.components)


def minkowski_dot(a, b) -> float:
    """Return a^0 b^0 - a^1 b^1 - a^2 b^2 - a^3 b^3."""
    a = np.asarray(tuple(a), dtype=float)
    b = np.asarray(tuple(b), dtype=float)
    return float(a @ METRIC @ b)


@dataclass(frozen=True)
class QuantumNumbers:
    """Cartesian oscillator quanta along r1, r2 and the boosted r3 axis."""

    u: int = 0
    v: int = 0
    w: int = 0

    def __post_init__(self):
        for name in ("u", "v", "w"):
            val = getattr(self, name)
            if int(val) != val or val < 0:
                raise ConfigError(f"quantum number {name}={val!r} must be a non-negative integer")
            object.__setattr__(self, name, int(val))

    @property
    def n(self) -> int:
        return self.u + self.v + self.w

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.u, self.v, self.w)


@dataclass(frozen=True)
class Kinematics:
    M: float
    E: float
    p3: float
    gamma: float
    m_plus_sq: float
    m_minus_sq: float

    @property
    def P(self) -> FourVector:
        """Contravariant total 4-momentum (E, 0, 0, p3)."""
        return FourVector((self.E, 0.0, 0.0, self.p3))

    @property
    def m_plus(self) -> float:
        return math.sqrt(self.m_plus_sq)

    @property
    def m_minus(self) -> float:
        if self.m_minus_sq < 0:
            raise ConfigError(
                f"m_minus^2 = {self.m_minus_sq:.6g} < 0: spring constant is over-critical"
            )
        return math.sqrt(self.m_minus_sq)


@dataclass(frozen=True)
class OscillatorConfig:
    """Physical parameters of the oscillator in natural units.

    Parameters
    ----------
    m : float
        Rest mass of the constituent particle.
    Omega : float
        Spring constant; must be positive.
    beta : float
        Velocity of the oscillator along axis 3, ``0 <= beta < 1``.
    qn : QuantumNumbers
        Oscillator quanta (u, v, w).
    s : float
        Spin projection, +1/2 or -1/2.
    """

    m: float = 1.0
    Omega: float = 2.0 / 3.0
    beta: float = 0.0
    qn: QuantumNumbers = field(default_factory=QuantumNumbers)
    s: float = 0.5

    def __post_init__(self):
        if not (self.m >= 0 and math.isfinite(self.m)):
            raise ConfigError(f"m must be a finite non-negative number, got {self.m!r}")
        if not (self.Omega > 0 and math.isfinite(self.Omega)):
            raise ConfigError(f"Omega must be positive, got {self.Omega!r}")
        if not (0.0 <= self.beta < 1.0):
            raise ConfigError(f"beta must lie in [0, 1), got {self.beta!r}")
        if self.s not in (0.5, -0.5):
            raise ConfigError(f"s must be +1/2 or -1/2, got {self.s!r}")
        if not isinstance(self.qn, QuantumNumbers):
            object.__setattr__(self, "qn", QuantumNumbers(*self.qn))

    @classmethod
    def critical(cls, m: float = 1.0, **kwargs) -> "OscillatorConfig":
        """Configuration at the spring constant 2 m^2 / 3 where m_minus = 0."""
        return cls(m=m, Omega=2.0 * m * m / 3.0, **kwargs)

    @property
    def n(self) -> int:
        return self.qn.n

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta * self.beta)

    @property
    def m_minus_sq(self) -> float:
        val = self.m * self.m - 1.5 * self.Omega
        if abs(val) <= MASS_SQ_ZERO_TOL * max(self.m * self.m, 1.5 * self.Omega):
            return 0.0
        return val

    @property
    def m_plus_sq(self) -> float:
        return self.m * self.m + 1.5 * self.Omega

    @property
    def over_critical(self) -> bool:
        """True when m_minus^2 < 0, i.e. no real mass for the lowering branch."""
        return self.m_minus_sq < 0

    @property
    def length_scale(self) -> float:
        return math.sqrt(2.0 / self.Omega)

    def replace(self, **changes) -> "OscillatorConfig":
        from dataclasses import replace

        return replace(self, **changes)


def rest_mass_sq(m: float, Omega: float, n: int) -> float:
    """M^2 = Omega (3/2 + n) + m^2."""
    return Omega * (1.5 + n) + m * m


def kinematics(cfg: OscillatorConfig) -> Kinematics:
    """Total mass, energy and momentum of the oscillator for ``cfg``."""
    if not (0.0 <= cfg.beta < 1.0):
        raise ConfigError(f"beta must lie in [0, 1), got {cfg.beta!r}")
    M = math.sqrt(rest_mass_sq(cfg.m, cfg.Omega, cfg.n))
    g = cfg.gamma
    return Kinematics(
        M=M,
        E=g * M,
        p3=g * cfg.beta * M,
        gamma=g,
        m_plus_sq=cfg.m_plus_sq,
        m_minus_sq=cfg.m_minus_sq,
    )


def degeneracy(n: int) -> int:
    """Number of (u, v, w) triples with u + v + w = n."""
    return (n + 1) * (n + 2) // 2
