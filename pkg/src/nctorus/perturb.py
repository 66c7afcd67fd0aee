"""The diagonal-metric Gauss-Bonnet trace along the ray t f and its Taylor structure."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement, derive, precision, trace_product
from .funcalc import DEFAULT, FuncalcConfig, exp_element

__all__ = ["PerturbationProbe", "FitError", "omega", "order4_obstruction", "taylor_fit", "DEFAULT_SAMPLES"]

DEFAULT_SAMPLES = (-0.25, -0.2, -0.15, -0.1, -0.05, 0.05, 0.1, 0.15, 0.2, 0.25)
_AXIS = 1  # the derivation along V


class FitError(ValueError):
    """Sample design too ill-conditioned for the requested degree."""


def omega(f: AlgebraElement, t: float, cfg: FuncalcConfig = DEFAULT) -> complex:
    """1/2 tau((d e^{-tf/2})(d e^{tf}) + (d e^{tf/2})(d e^{tf}) e^{-tf}), d along V."""
    if t == 0:
        return 0j
    e_full = exp_element(f.scale(t), cfg)
    e_neg_full = exp_element(f.scale(-t), cfg)
    e_half = exp_element(f.scale(0.5 * t), cfg)
    e_neg_half = exp_element(f.scale(-0.5 * t), cfg)
    with precision(cfg.prune_tol):
        d_full = derive(e_full, _AXIS)
        first = trace_product(derive(e_neg_half, _AXIS), d_full)
        second = trace_product(derive(e_half, _AXIS) * d_full, e_neg_full)
        return 0.5 * (first + second)


def order4_obstruction(f: AlgebraElement) -> complex:
    """3 tau(f^2 (d f)^2 - f (d f) f (d f)), d along V; exact polynomial arithmetic."""
    df = derive(f, _AXIS)
    fdf = f * df
    return 3.0 * ((f * fdf * df).trace() - (fdf * fdf).trace())


@dataclass(frozen=True)
class PerturbationProbe:
    f: AlgebraElement
    t_samples: tuple[float, ...] = DEFAULT_SAMPLES
    fit_degree: int = 6
    max_condition: float = 1e8
    cfg: FuncalcConfig = field(default=DEFAULT)

    def __post_init__(self) -> None:
        ts = np.sort(np.asarray(self.t_samples, dtype=float))
        if not np.allclose(ts, -ts[::-1]):
            raise ValueError("t samples must be symmetric about 0")
        if np.abs(ts).max() > 0.5:
            raise ValueError("keep |t| <= 0.5 so the exponential tolerance holds")
        if len(ts) < self.fit_degree + 2:
            raise ValueError("need at least fit_degree + 2 samples")

    @classmethod
    def scaled(cls, f: AlgebraElement, **kwargs) -> "PerturbationProbe":
        """Default samples divided by max(1, ||f - tau(f)||_1), so t f stays in the
        regime where a degree-6 fit resolves the quartic term."""
        size = max(1.0, (f - f.trace()).norm1())
        return cls(f, tuple(t / size for t in DEFAULT_SAMPLES), **kwargs)


def taylor_fit(probe: PerturbationProbe) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares coefficients c_0..c_d of Omega_f(t) and the sampled values."""
    ts = np.asarray(probe.t_samples, dtype=float)
    values = np.array([omega(probe.f, t, probe.cfg) for t in ts])
    # fit in u = t / max|t| so conditioning does not depend on the sample scale
    span = np.abs(ts).max()
    vander = np.vander(ts / span, probe.fit_degree + 1, increasing=True)
    cond = np.linalg.cond(vander)
    if cond > probe.max_condition:
        raise FitError(f"Vandermonde condition number {cond:.3e} exceeds {probe.max_condition:.1e}")
    coeffs, *_ = np.linalg.lstsq(vander.astype(complex), values, rcond=None)
    return coeffs / span ** np.arange(probe.fit_degree + 1), values
