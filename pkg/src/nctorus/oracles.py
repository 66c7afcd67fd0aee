"""Finite-dimensional oracle for the rational rotation algebra.

At theta = p/q the clock and shift matrices

    U = diag(w^k),  V e_k = e_{k+1 mod q},  w = e(p/q),

satisfy V U = e(-theta) U V, the same relation as the generators here, and
tau becomes the normalized matrix trace on monomials whose exponents are not
both multiples of q.  Products of elements with small support therefore map
exactly onto matrix products, with no aliasing.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, ConfigurationError, ThetaMatrix, Torus

__all__ = ["RationalTorus"]


class RationalTorus:
    """Matrix representation of the 2-torus at angle p/q."""

    def __init__(self, angle: Fraction):
        angle = Fraction(angle)
        if not 0 < angle < 1:
            raise ConfigurationError("angle must lie in (0, 1)")
        self.angle = angle
        self.q = angle.denominator
        k = np.arange(self.q)
        self.clock = np.diag(np.exp(2j * np.pi * float(angle) * k))
        self.shift = np.roll(np.eye(self.q, dtype=complex), 1, axis=0)
        self.torus = Torus(ThetaMatrix.two(float(angle)))

    def monomial(self, a: int, b: int) -> np.ndarray:
        """Matrix of the normal-ordered monomial U^a V^b."""
        return np.linalg.matrix_power(self.clock, a % self.q) @ np.linalg.matrix_power(self.shift, b % self.q)

    def matrix(self, x: AlgebraElement) -> np.ndarray:
        if x.n != 2:
            raise ConfigurationError("the oracle represents the 2-torus only")
        out = np.zeros((self.q, self.q), dtype=complex)
        for (a, b), c in x.terms().items():
            out += c * self.monomial(a, b)
        return out

    def trace(self, m: np.ndarray) -> complex:
        return complex(np.trace(m)) / self.q

    def aliasing_free(self, *elements: AlgebraElement) -> bool:
        """True when a product of the given elements cannot wrap around mod q."""
        reach = np.zeros(2, dtype=np.int64)
        for x in elements:
            if len(x):
                reach += np.abs(x.keys).max(axis=0)
        return bool((reach < self.q).all())
