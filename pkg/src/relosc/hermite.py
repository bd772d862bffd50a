"""Physicist's Hermite polynomials, oscillator basis factors and Gauss-Hermite rules."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

MAX_HERMITE_ORDER = 64
MAX_QUADRATURE_ORDER = 128


def hermite_H(j: int, x):
    """Physicist's Hermite polynomial H_j(x) by three-term recurrence.

    Works elementwise on arrays.
    """
    if j < 0 or int(j) != j:
        raise ValueError(f"Hermite order must be a non-negative integer, got {j!r}")
    if j > MAX_HERMITE_ORDER:
        raise ValueError(f"Hermite order {j} exceeds guard {MAX_HERMITE_ORDER}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if j == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, j):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


@lru_cache(maxsize=None)
def hermite_coefficients(j: int) -> tuple[int, ...]:
    """Integer monomial coefficients of H_j, lowest power first."""
    if j < 0 or j > MAX_HERMITE_ORDER:
        raise ValueError(f"Hermite order {j} out of range")
    prev, cur = [1], [0, 2]
    if j == 0:
        return tuple(prev)
    for k in range(1, j):
        nxt = [0] * (k + 2)
        for p, c in enumerate(cur):
            nxt[p + 1] += 2 * c
        for p, c in enumerate(prev):
            nxt[p] -= 2 * k * c
        prev, cur = cur, nxt
    return tuple(cur)


def phi(j: int, x, Omega: float):
    """Oscillator basis factor H_j(sqrt(Omega/2) x) exp(-Omega x^2 / 4)."""
    if Omega <= 0:
        raise ValueError("Omega must be positive")
    x = np.asarray(x, dtype=float)
    out = hermite_H(j, math.sqrt(Omega / 2.0) * x) * np.exp(-0.25 * Omega * x * x)
    return out if np.ndim(out) else float(out)


def phi_norm_sq(j: int, Omega: float) -> float:
    """Integral of phi(j, x, Omega)^2 over the real line."""
    return math.sqrt(2.0 / Omega) * 2.0**j * math.factorial(j) * math.sqrt(math.pi)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for integrals of f(x) exp(-x^2)."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    """Golub-Welsch Gauss-Hermite rule with ``order`` nodes.

    The Jacobi matrix of the weight exp(-x^2) has zero diagonal and
    off-diagonal sqrt(k/2); its eigenvalues are the nodes. Weights use the
    Christoffel function of the orthonormal Hermite polynomials.
    """
    if int(order) != order or not (1 <= order <= MAX_QUADRATURE_ORDER):
        raise ValueError(f"quadrature order must be in [1, {MAX_QUADRATURE_ORDER}], got {order!r}")
    order = int(order)
    if order == 1:
        nodes = np.zeros(1)
        weights = np.array([math.sqrt(math.pi)])
    else:
        off = np.sqrt(np.arange(1, order) / 2.0)
        nodes = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
        # Christoffel form 1 / sum_k p_k(x)^2 keeps tail weights that the
        # eigenvector route underflows to zero
        p_prev = np.zeros(order)
        p = np.full(order, math.pi**-0.25)
        total = p * p
        for k in range(order - 1):
            p_prev, p = p, (nodes * p - off[k - 1] * p_prev if k else nodes * p) / off[k]
            total += p * p
        weights = 1.0 / total
        # enforce exact symmetry about 0
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order, nodes, weights)
