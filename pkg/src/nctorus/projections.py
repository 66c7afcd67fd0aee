"""Test elements: Powers-Rieffel projections and self-adjoint elements commuting with their derivatives.

Powers-Rieffel.  With V g(U) = g(. - theta)(U) V, the element

    e = f0(U) + g(U) V + (g(U) V)*

is a projection when, on the circle [0, 1),

* f0 rises from 0 to 1 on [0, w], equals 1 on [w, theta],
  equals 1 - f0(x - theta) on [theta, theta + w] and vanishes afterwards;
* g = sqrt(f0 (1 - f0)) on [theta, theta + w] and 0 elsewhere;

for any width 0 < w < min(theta, 1 - theta).  Taking f0 = sin^2(pi/2 phi) for
a C-infinity step phi makes g = sin(pi phi)/2 smooth too.  Then tau(e) is
the integral of f0, which is theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, ConfigurationError, ThetaMatrix, Torus

__all__ = [
    "BumpSpec",
    "ProjectionError",
    "powers_rieffel",
    "commuting_family",
    "embed",
    "smooth_step",
]


class ProjectionError(ArithmeticError):
    """The truncated projection misses the idempotency tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved


def smooth_step(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u)."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)

    def h(v):
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = np.exp(-1.0 / v[pos])
        return out

    a, b = h(u), h(1.0 - u)
    return a / (a + b)


@dataclass(frozen=True)
class BumpSpec:
    theta: float
    fourier_cutoff: int = 96
    smoothing_width: float | None = None
    grid_size: int = 1 << 14
    tol_proj: float = 1e-8

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ConfigurationError("theta must lie in (0, 1)")
        if self.fourier_cutoff < 8:
            raise ConfigurationError("fourier_cutoff must be at least 8")
        if 2 * self.fourier_cutoff >= self.grid_size:
            raise ConfigurationError("grid too coarse for the requested cutoff")
        w = self.width
        if not 0.0 < w < min(self.theta, 1.0 - self.theta):
            raise ConfigurationError("smoothing width must lie in (0, min(theta, 1 - theta))")

    @property
    def width(self) -> float:
        if self.smoothing_width is None:
            return 0.95 * min(self.theta, 1.0 - self.theta)
        return self.smoothing_width

    def profiles(self) -> tuple[np.ndarray, np.ndarray]:
        """Samples of f0 and g on the uniform grid of [0, 1)."""
        x = np.arange(self.grid_size) / self.grid_size
        th, w = self.theta, self.width
        rise = smooth_step(x / w)
        fall = smooth_step((x - th) / w)
        f0 = np.where(
            x < w,
            np.sin(0.5 * np.pi * rise) ** 2,
            np.where(x < th, 1.0, np.where(x < th + w, np.cos(0.5 * np.pi * fall) ** 2, 0.0)),
        )
        g = np.where((x >= th) & (x < th + w), 0.5 * np.sin(np.pi * fall), 0.0)
        return f0, g


def _fourier(samples: np.ndarray, cutoff: int) -> dict[int, complex]:
    c = np.fft.fft(samples) / samples.size
    return {k: complex(c[k % samples.size]) for k in range(-cutoff, cutoff + 1)}


def powers_rieffel(spec: BumpSpec, torus: Torus | None = None) -> AlgebraElement:
    """The projection e = f0(U) + g(U) V + (g(U) V)* on the 2-torus with angle spec.theta."""
    if torus is None:
        torus = Torus(ThetaMatrix.two(spec.theta))
    if torus.n != 2 or not math.isclose(torus.theta.array()[0, 1], spec.theta, abs_tol=1e-15):
        raise ConfigurationError("torus must be the 2-torus with angle BumpSpec.theta")
    f0, g = spec.profiles()
    c0 = _fourier(f0, spec.fourier_cutoff)
    cg = _fourier(g, spec.fourier_cutoff)
    # the samples are real, so conjugate symmetry of the coefficients is exact up to rounding
    diag = torus.from_terms({(k, 0): v for k, v in c0.items() if v != 0}).real_part()
    gv = torus.from_terms({(k, 1): v for k, v in cg.items() if v != 0})
    e = diag + gv + gv.adjoint()
    residual = (e * e - e).coeff_norm1()
    if residual > spec.tol_proj:
        raise ProjectionError(f"cutoff {spec.fourier_cutoff} too small for the projection tolerance", residual)
    return e


def embed(x: AlgebraElement, target: Torus, axes: Sequence[int] = (0, 1)) -> AlgebraElement:
    """Place a 2-torus element on the chosen axes of a larger torus with matching angle."""
    axes = tuple(axes)
    if len(axes) != x.n:
        raise ConfigurationError("need one target axis per source axis")
    src = x.torus.theta.array()
    tgt = target.theta.array()
    for i, a in enumerate(axes):
        for j, b in enumerate(axes):
            if not math.isclose(src[i, j], tgt[a, b], abs_tol=1e-15):
                raise ConfigurationError(f"angle mismatch on axes {a}, {b}")
    if list(axes) != sorted(axes):
        raise ConfigurationError("axes must be increasing so that normal order is preserved")
    keys = np.zeros((len(x), target.n), dtype=np.int64)
    keys[:, list(axes)] = x.keys
    return AlgebraElement(target, keys, x.vals.copy(), x.dropped)


def commuting_family(
    torus: Torus,
    terms: Sequence[tuple[int, int, complex]],
    constant: float = 0.0,
) -> AlgebraElement:
    """f = constant + sum (a U^m V^n + (a U^m V^n)*) over terms (m, n, a).

    All exponent pairs must be collinear (m_i n_j = n_i m_j), which makes every
    monomial a function of one unitary, so f commutes with its derivatives.
    """
    if torus.n != 2:
        raise ConfigurationError("the commuting family lives on the 2-torus")
    for i, (m1, n1, _) in enumerate(terms):
        for m2, n2, _ in terms[i + 1 :]:
            if m1 * n2 != n1 * m2:
                raise ValueError(f"exponents ({m1}, {n1}) and ({m2}, {n2}) violate kn = ml")
    f = torus.scalar(constant)
    for m, n, a in terms:
        x = torus.monomial((m, n), a)
        f = f + x + x.adjoint()
    return f
