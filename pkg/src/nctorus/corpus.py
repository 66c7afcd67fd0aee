"""Seeded random self-adjoint elements used as test and scenario inputs."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, Torus

__all__ = ["random_self_adjoint", "random_corpus"]


def random_self_adjoint(
    torus: Torus,
    rng: np.random.Generator,
    *,
    terms: int | None = None,
    radius: int | None = None,
    norm: float = 1.0,
    constant: bool = True,
) -> AlgebraElement:
    """(x + x*)/2 for x a sum of a few Gaussian-weighted monomials, scaled to ||.||_1 = norm.

    Sizes default to something cheap enough to exponentiate and differentiate
    repeatedly: four terms within radius 2 on the 2-torus, three on the
    4-torus.
    """
    n = torus.n
    if terms is None:
        terms = 4 if n == 2 else 3
    if radius is None:
        radius = 2
    coeffs: dict[tuple[int, ...], complex] = {}
    while len(coeffs) < terms:
        k = tuple(int(v) for v in rng.integers(-radius, radius + 1, size=n))
        if not any(k):
            continue
        coeffs[k] = complex(rng.normal(), rng.normal())
    if constant:
        coeffs[(0,) * n] = complex(rng.normal())
    x = torus.from_terms(coeffs)
    f = x.real_part()
    return f.scale(norm / f.coeff_norm1())


def random_corpus(torus: Torus, seed: int, count: int, **kwargs) -> list[AlgebraElement]:
    rng = np.random.default_rng(seed)
    return [random_self_adjoint(torus, rng, **kwargs) for _ in range(count)]
