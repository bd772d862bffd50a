"""Relativistic 3-D harmonic oscillator: Klein-Gordon and Dirac solutions,
ladder-operator identities and the spin/orbital angular-momentum split."""

__version__ = "0.1.0"

from .core import (
    ConfigError,
    FourVector,
    Kinematics,
    OscillatorConfig,
    QuantumNumbers,
    Units,
    degeneracy,
    kinematics,
    minkowski_dot,
    rest_mass_sq,
)
from .hermite import QuadratureRule, gauss_hermite, hermite_H, phi
from .polyfield import Envelope, ScalarField
from .scalar_field import build_psi, density, kge_residual, norm, second_moment
from .operators import LadderOperator, ladder, oam_op
from .bispinor import BispinorField, GammaSet, build_bispinor, closed_form_norm, dirac_residual
from .observables import (
    ExpectationResult,
    expect,
    oam_expect,
    phase_surface,
    sam_expect,
    spin_composition_sweep,
    tam_expect,
)

__all__ = [
    "BispinorField",
    "ConfigError",
    "Envelope",
    "ExpectationResult",
    "FourVector",
    "GammaSet",
    "Kinematics",
    "LadderOperator",
    "OscillatorConfig",
    "QuadratureRule",
    "QuantumNumbers",
    "ScalarField",
    "Units",
    "build_bispinor",
    "build_psi",
    "closed_form_norm",
    "degeneracy",
    "density",
    "dirac_residual",
    "expect",
    "gauss_hermite",
    "hermite_H",
    "kge_residual",
    "kinematics",
    "ladder",
    "minkowski_dot",
    "norm",
    "oam_expect",
    "oam_op",
    "phase_surface",
    "phi",
    "rest_mass_sq",
    "sam_expect",
    "second_moment",
    "spin_composition_sweep",
    "tam_expect",
]
