"""Exponentials and inverses with certified l1 error bounds.

Everything here relies only on submultiplicativity of the l1 norm, so the
bounds hold in the Banach algebra of absolutely summable twisted series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import AlgebraElement, current_prune, precision

__all__ = ["FuncalcConfig", "FuncalcError", "NonInvertibleError", "exp_element", "inverse_element"]


class FuncalcError(ArithmeticError):
    """Requested tolerance could not be certified."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved bound {achieved:.3e})")
        self.achieved = achieved


class NonInvertibleError(FuncalcError):
    """Newton iteration for the inverse stopped contracting."""


@dataclass(frozen=True)
class FuncalcConfig:
    taylor_order_max: int = 40
    squaring_threshold: float = 0.5
    newton_max_iters: int = 60
    target_tol: float = 1e-12
    # product coefficients at or below this modulus are dropped (and booked)
    prune_tol: float = 1e-20
    self_adjoint_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if self.taylor_order_max < 4:
            raise ValueError("taylor_order_max must be at least 4")
        if not self.squaring_threshold > 0:
            raise ValueError("squaring_threshold must be positive")


DEFAULT = FuncalcConfig()


def _prune_level(cfg: FuncalcConfig) -> float:
    return max(cfg.prune_tol, current_prune())


def exp_element(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT, *, check_self_adjoint: bool = True) -> AlgebraElement:
    """exp(f) by scaling and squaring.

    The argument is halved until its l1 norm is below ``squaring_threshold``,
    the Taylor series is summed until the remainder bound
    ||g||^{K+1}/(K+1)! * e^{||g||} is small enough, and the result is squared
    back.  The remainder bound is added to ``dropped``.
    """
    if check_self_adjoint and f.self_adjoint_defect() > cfg.self_adjoint_tol * max(1.0, f.norm1()):
        raise ValueError("exp_element expects a self-adjoint argument")
    torus = f.torus
    if f.is_zero() and f.dropped == 0:
        return torus.one()
    norm = f.norm1()
    squarings = max(0, math.ceil(math.log2(norm / cfg.squaring_threshold))) if norm > cfg.squaring_threshold else 0
    g = f.scale(0.5 ** squarings)
    gnorm = g.norm1()
    # error in the base exponential is amplified by at most 2^s * e^{||f||}
    stage_tol = cfg.target_tol * 1e-3 / ((2 ** squarings) * math.exp(norm))

    with precision(_prune_level(cfg)):
        total = torus.one()
        term = torus.one()
        remainder = math.inf
        for k in range(1, cfg.taylor_order_max + 1):
            term = (term * g).scale(1.0 / k)
            total = total + term
            remainder = gnorm ** (k + 1) / math.factorial(k + 1) * math.exp(gnorm)
            if remainder <= stage_tol:
                break
        if remainder > stage_tol:
            raise FuncalcError(f"Taylor series did not reach tolerance within order {cfg.taylor_order_max}", remainder)
        result = total.with_dropped(total.dropped + remainder)
        for _ in range(squarings):
            result = result * result
    return result


def inverse_element(a: AlgebraElement, guess: AlgebraElement, cfg: FuncalcConfig = DEFAULT) -> AlgebraElement:
    """Newton iteration x <- x (2 - a x) seeded with ``guess``.

    Raises :class:`NonInvertibleError` when the residual ||a x - 1||_1 fails
    to halve for two consecutive steps.
    """
    one = a.torus.one()
    x = guess
    stalls = 0
    with precision(_prune_level(cfg)):
        residual = (a * x - one).coeff_norm1()
        for _ in range(cfg.newton_max_iters):
            if residual <= cfg.target_tol:
                return x
            x_next = x * (one.scale(2.0) - a * x)
            r_next = (a * x_next - one).coeff_norm1()
            if not r_next <= 0.5 * residual:
                stalls += 1
                if stalls >= 2 or not math.isfinite(r_next):
                    raise NonInvertibleError("Newton iteration for the inverse is not contracting", min(residual, r_next))
            else:
                stalls = 0
            x, residual = x_next, r_next
    if residual <= cfg.target_tol:
        return x
    raise NonInvertibleError(f"Newton iteration did not converge in {cfg.newton_max_iters} steps", residual)
