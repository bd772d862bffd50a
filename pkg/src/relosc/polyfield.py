"""Polynomial-times-Gaussian fields of the relative coordinates.

Every function handled by this package has the form::

    f(tau, r1, r2, r3) = poly(tau, r1, r2, r3) * G(tau, r) * exp(-i (E t - p3 x3))

with the boosted oscillator envelope
``G = exp(-(Omega/4) (r1^2 + r2^2 + gamma^2 (r3 - beta tau)^2))``.
Derivatives with respect to the relative coordinates stay in this class
(d log G is linear), so operator actions are exact polynomial arithmetic.
The plane-wave factor depends only on the centre-of-mass point X and is
evaluated at a stored reference point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import FourVector
from .hermite import gauss_hermite

TAU, R1, R2, R3 = 0, 1, 2, 3
AXIS_NAMES = ("tau", "r1", "r2", "r3")


# -- 4-variable polynomial helpers (dense coefficient arrays, axis k = power of coordinate k)

def poly_zero() -> np.ndarray:
    return np.zeros((1, 1, 1, 1), dtype=complex)


def poly_const(c: complex) -> np.ndarray:
    out = poly_zero()
    out[0, 0, 0, 0] = c
    return out


def poly_monomial(powers, coeff: complex = 1.0) -> np.ndarray:
    out = np.zeros(tuple(p + 1 for p in powers), dtype=complex)
    out[tuple(powers)] = coeff
    return out


def poly_pad(c: np.ndarray, shape) -> np.ndarray:
    if c.shape == tuple(shape):
        return c
    out = np.zeros(shape, dtype=complex)
    out[tuple(slice(0, s) for s in c.shape)] = c
    return out


def poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    return poly_pad(a, shape) + poly_pad(b, shape)


def poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size < b.size:
        a, b = b, a
    shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape, dtype=complex)
    for idx in zip(*np.nonzero(b)):
        out[tuple(slice(i, i + n) for i, n in zip(idx, a.shape))] += b[idx] * a
    return out


def poly_der(c: np.ndarray, axis: int) -> np.ndarray:
    n = c.shape[axis]
    if n == 1:
        return np.zeros(c.shape, dtype=complex)
    k = np.arange(1, n).reshape([-1 if ax == axis else 1 for ax in range(4)])
    return np.take(c, np.arange(1, n), axis=axis) * k


def poly_trim(c: np.ndarray) -> np.ndarray:
    """Drop trailing all-zero hyperplanes along every axis."""
    nz = np.nonzero(c)
    if len(nz[0]) == 0:
        return poly_zero()
    return c[tuple(slice(0, int(ix.max()) + 1) for ix in nz)]


def poly_eval(c: np.ndarray, tau, r1, r2, r3) -> np.ndarray:
    tau, r1, r2, r3 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (tau, r1, r2, r3)))
    shape = tau.shape
    pw = [np.vander(x.ravel(), n, increasing=True) for x, n in zip((tau, r1, r2, r3), c.shape)]
    val = np.einsum("abcd,na,nb,nc,nd->n", c, *pw, optimize=True)
    return val.reshape(shape)


def poly_degree(c: np.ndarray) -> int:
    nz = np.nonzero(c)
    if len(nz[0]) == 0:
        return 0
    return int(max(sum(ix) for ix in zip(*nz)))


@dataclass(frozen=True)
class Envelope:
    """Boosted Gaussian exp(-(Omega/4)(r1^2 + r2^2 + gamma^2 (r3 - beta tau)^2))."""

    Omega: float
    beta: float = 0.0

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta * self.beta)

    def __call__(self, tau, r1, r2, r3):
        g2 = self.gamma**2
        z = np.asarray(r3) - self.beta * np.asarray(tau)
        return np.exp(-0.25 * self.Omega * (np.asarray(r1) ** 2 + np.asarray(r2) ** 2 + g2 * z * z))

    def boosted_r3(self) -> np.ndarray:
        """Polynomial r3 - beta*tau."""
        out = np.zeros((2, 1, 1, 2), dtype=complex)
        out[0, 0, 0, 1] = 1.0
        out[1, 0, 0, 0] = -self.beta
        return out

    def log_grad(self, axis: int) -> np.ndarray:
        """Polynomial d(log G)/d(coordinate ``axis``)."""
        Om, g2 = self.Omega, self.gamma**2
        if axis == TAU:
            return 0.5 * Om * self.beta * g2 * self.boosted_r3()
        if axis in (R1, R2):
            powers = [0, 0, 0, 0]
            powers[axis] = 1
            return poly_monomial(powers, -0.5 * Om)
        if axis == R3:
            return -0.5 * Om * g2 * self.boosted_r3()
        raise ValueError(f"bad axis {axis}")


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Complex field ``poly * envelope * plane wave`` of (tau, r1, r2, r3).

    ``momentum`` is the contravariant 4-momentum of the plane-wave factor
    exp(-i P.X); ``None`` means the field carries no plane wave. The phase
    is evaluated at ``x_ref = (t, x3)``.
    """

    coeffs: np.ndarray
    envelope: Envelope
    momentum: FourVector | None = None
    x_ref: tuple[float, float] = (0.0, 0.0)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 4:
            raise ValueError("coefficient array must be 4-dimensional")
        object.__setattr__(self, "coeffs", c)

    # -- evaluation
    def phase(self) -> complex:
        if self.momentum is None:
            return 1.0 + 0.0j
        t, x3 = self.x_ref
        E, p3 = self.momentum[0], self.momentum[3]
        return complex(np.exp(-1j * (E * t - p3 * x3)))

    def __call__(self, tau, r1, r2, r3):
        return (
            poly_eval(self.coeffs, tau, r1, r2, r3)
            * self.envelope(tau, r1, r2, r3)
            * self.phase()
        )

    def polynomial(self, tau, r1, r2, r3):
        """Polynomial prefactor times the phase (envelope stripped)."""
        return poly_eval(self.coeffs, tau, r1, r2, r3) * self.phase()

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)

    # -- construction helpers
    def _new(self, coeffs, label="") -> "ScalarField":
        return ScalarField(poly_trim(coeffs), self.envelope, self.momentum, self.x_ref, label)

    def compatible(self, other: "ScalarField") -> bool:
        return (
            self.envelope == other.envelope
            and self.x_ref == other.x_ref
            and (
                (self.momentum is None and other.momentum is None)
                or (
                    self.momentum is not None
                    and other.momentum is not None
                    and self.momentum.components == other.momentum.components
                )
            )
        )

    def _check(self, other):
        if not self.compatible(other):
            raise ValueError("fields live on different envelopes or plane waves")

    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._check(other)
        return self._new(poly_add(self.coeffs, other.coeffs))

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        self._check(other)
        return self._new(poly_add(self.coeffs, -other.coeffs))

    def __mul__(self, k) -> "ScalarField":
        if isinstance(k, ScalarField):
            raise TypeError("use times_poly for field products")
        return self._new(self.coeffs * complex(k))

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return self * -1.0

    def times_poly(self, c: np.ndarray) -> "ScalarField":
        return self._new(poly_mul(self.coeffs, np.asarray(c, dtype=complex)))

    def times_coord(self, axis: int) -> "ScalarField":
        powers = [0, 0, 0, 0]
        powers[axis] = 1
        return self.times_poly(poly_monomial(powers))

    def zero_like(self) -> "ScalarField":
        return self._new(poly_zero())

    def partial(self, axis: int) -> "ScalarField":
        """Exact derivative with respect to relative coordinate ``axis``."""
        c = poly_add(poly_der(self.coeffs, axis), poly_mul(self.coeffs, self.envelope.log_grad(axis)))
        return self._new(c)

    def without_phase(self) -> "ScalarField":
        return ScalarField(self.coeffs, self.envelope, None, self.x_ref, self.label)

    def with_reference(self, t: float, x3: float) -> "ScalarField":
        return ScalarField(self.coeffs, self.envelope, self.momentum, (float(t), float(x3)), self.label)


@dataclass(frozen=True)
class InstantGrid:
    """Tensor-product quadrature grid on the tau = 0 slice.

    ``weights`` already include the Jacobian of the rest-shape variables and
    absorb |G|^2, so integrands are products of polynomial prefactors.
    """

    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray
    weights: np.ndarray  # shape (n, n, n)

    @property
    def points(self):
        X1, X2, X3 = np.meshgrid(self.x1, self.x2, self.x3, indexing="ij")
        return X1, X2, X3

    @property
    def r1(self):
        return self.points[0].ravel()

    @property
    def r2(self):
        return self.points[1].ravel()

    @property
    def r3(self):
        return self.points[2].ravel()


@lru_cache(maxsize=64)
def _instant_grid_cached(Omega: float, beta: float, order: int) -> InstantGrid:
    rule = gauss_hermite(order)
    g = Envelope(Omega, beta).gamma
    s = math.sqrt(2.0 / Omega)
    w = rule.weights
    W = w[:, None, None] * w[None, :, None] * w[None, None, :] * (s**3 / g)
    x1 = s * rule.nodes
    x3 = (s / g) * rule.nodes
    for arr in (x1, x3, W):
        arr.setflags(write=False)
    return InstantGrid(x1, x1, x3, W)


def instant_form_grid(envelope: Envelope, order: int) -> InstantGrid:
    return _instant_grid_cached(float(envelope.Omega), float(envelope.beta), int(order))


def poly_eval_tensor(c: np.ndarray, x1, x2, x3) -> np.ndarray:
    """Evaluate the tau = 0 slice of ``c`` on the tensor grid x1 (x) x2 (x) x3."""
    c0 = c[0]
    v1 = np.vander(np.asarray(x1, float), c0.shape[0], increasing=True)
    v2 = np.vander(np.asarray(x2, float), c0.shape[1], increasing=True)
    v3 = np.vander(np.asarray(x3, float), c0.shape[2], increasing=True)
    return np.einsum("bcd,ib,jc,kd->ijk", c0, v1, v2, v3, optimize=True)


def instant_values(f: ScalarField, order: int) -> np.ndarray:
    """Polynomial prefactor (with phase) of ``f`` on the instant-form grid."""
    grid = instant_form_grid(f.envelope, order)
    return poly_eval_tensor(f.coeffs, grid.x1, grid.x2, grid.x3) * f.phase()


def instant_overlap(bra: ScalarField, ket: ScalarField, order: int) -> complex:
    """Integral of conj(bra) * ket over 3-space at tau = 0.

    Both fields must share the envelope. Exact when the product of the two
    polynomial prefactors has degree <= 2*order - 1 in each variable.
    """
    if bra.envelope != ket.envelope:
        raise ValueError("instant-form overlap needs a common envelope")
    grid = instant_form_grid(ket.envelope, order)
    return complex(np.sum(grid.weights * np.conj(instant_values(bra, order)) * instant_values(ket, order)))


def field_from_poly(coeffs, envelope: Envelope, momentum=None, x_ref=(0.0, 0.0), label="") -> ScalarField:
    return ScalarField(np.asarray(coeffs, dtype=complex), envelope, momentum, tuple(x_ref), label)


def random_poly_field(
    rng: np.random.Generator,
    envelope: Envelope,
    max_degree: int = 6,
    momentum: FourVector | None = None,
    n_terms: int = 6,
) -> ScalarField:
    """Random complex polynomial (total degree <= max_degree) times the envelope."""
    c = np.zeros((max_degree + 1,) * 4, dtype=complex)
    for _ in range(n_terms):
        while True:
            p = rng.integers(0, max_degree + 1, size=4)
            if p.sum() <= max_degree:
                break
        c[tuple(p)] += rng.normal() + 1j * rng.normal()
    return ScalarField(poly_trim(c), envelope, momentum, label="random")
