"""Numerical noncommutative tori: twisted Laurent series, curvature and modular calculus."""

from .algebra import (
    AlgebraElement,
    ConfigurationError,
    DerivationScale,
    ThetaMatrix,
    Torus,
    golden_theta,
    precision,
    trace_product,
)
from .funcalc import FuncalcConfig, FuncalcError, NonInvertibleError, exp_element, inverse_element

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "ConfigurationError",
    "DerivationScale",
    "FuncalcConfig",
    "FuncalcError",
    "NonInvertibleError",
    "ThetaMatrix",
    "Torus",
    "exp_element",
    "golden_theta",
    "inverse_element",
    "precision",
    "trace_product",
]
