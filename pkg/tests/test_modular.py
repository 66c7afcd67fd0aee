import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorus import FuncalcConfig, exp_element, trace_product
from nctorus.algebra import GOLDEN
from nctorus.corpus import random_self_adjoint
from nctorus.modular import (
    EXP,
    G1,
    K,
    apply_fn,
    apply_fn2,
    build_ad,
    curvature_direct,
    curvature_modular,
    dilaton_coefficients,
    dilaton_coefficients_derived,
    dilaton_curvature,
    eh_omega,
    g1_scalar,
    g2_scalar,
    grad_eh,
    grad_eh_printed,
    h_cited,
    h_closed,
    h_defining,
    modular_identity_suite,
    projection_corners,
)
from nctorus.projections import BumpSpec, embed, powers_rieffel

CFG = FuncalcConfig(prune_tol=1e-15)
finite = st.floats(-2.5, 2.5).filter(lambda x: abs(x) > 1e-3)


@given(st.floats(-3, 3))
def test_g1_of_exponential_is_k(s):
    expected = 1.0 if s == 0 else math.expm1(s) / s
    assert g1_scalar(math.exp(s)) == pytest.approx(expected, rel=1e-12)


@given(finite, finite)
def test_g2_double_integral(s, t):
    # closed form of the simplex integral of e^{a s + b t}, away from s + t = 0
    if abs(s + t) < 1e-3:
        return
    closed = (math.expm1(s + t) / (s + t) - math.expm1(s) / s) / t
    assert g2_scalar(s, t) == pytest.approx(closed, rel=1e-10, abs=1e-12)


@given(finite, finite)
def test_h_closed_matches_definition(s, t):
    if abs(s + t) < 1e-3:
        return
    assert h_closed(s, t) == pytest.approx(h_defining(s, t), rel=1e-9, abs=1e-10)


@pytest.mark.parametrize("s", [0.25, 1.0, 3.0])
def test_cited_h_symmetric_combinations(s):
    assert h_cited(s, -s) + h_cited(-s, s) == pytest.approx(-5 * (math.exp(s) + math.exp(-s) - 2) / s**2, rel=1e-12)
    assert h_cited(-s, s) - h_cited(s, -s) == pytest.approx((4 * s - 4 * math.sinh(s)) / s**2, rel=1e-12)


def test_defining_h_symmetric_sum_differs():
    s = 1.0
    target = -5 * (math.exp(s) + math.exp(-s) - 2) / s**2
    assert abs(h_defining(s, -s) + h_defining(-s, s) - target) > 1.0


def test_nabla_is_minus_ad(t2, rng):
    f, x = random_self_adjoint(t2, rng), random_self_adjoint(t2, rng)
    op = build_ad(f)
    assert op.apply(x).distance(x * f - f * x) < 1e-14


def test_series_matches_eigendecomposition(t2, rng):
    f = random_self_adjoint(t2, rng, terms=2, radius=1, norm=0.5)
    x = random_self_adjoint(t2, rng, terms=2, radius=1)
    op = build_ad(f, 10)
    assert apply_fn(op, K, x).distance(apply_fn(op, K, x, method="spectral")) < 1e-7


def test_conjugation_and_exponential_derivative(t2, rng):
    f, h = random_self_adjoint(t2, rng, norm=0.8), random_self_adjoint(t2, rng, norm=0.5)
    op = build_ad(f)
    ef, emf = exp_element(f), exp_element(-f)
    assert apply_fn(op, EXP, h).distance(emf * h * ef) < 1e-10
    eps = 1e-4
    fd = (exp_element(f + h.scale(eps)) - exp_element(f - h.scale(eps))).scale(0.5 / eps)
    assert fd.distance(ef * apply_fn(op, K, h)) < 1e-8


def test_identity_suite_on_random_element(t2, rng):
    cfg = FuncalcConfig(prune_tol=1e-18)
    for key, val in modular_identity_suite(f=random_self_adjoint(t2, rng), cfg=cfg).items():
        assert val < 1e-7, key


@pytest.fixture(scope="module")
def projection(request):
    from nctorus import Torus, golden_theta

    return powers_rieffel(BumpSpec(GOLDEN, fourier_cutoff=64, tol_proj=1e-6), Torus(golden_theta(2)))


def test_projection_corner_eigenvalues(projection):
    s = 0.5
    lap = projection.derive(0).derive(0) + projection.derive(1).derive(1)
    corners = projection_corners(projection, lap)
    op = build_ad(projection.scale(s))
    assert op.apply(corners["pq"]).distance(corners["pq"].scale(-s)) < 1e-5
    assert op.apply(corners["qp"]).distance(corners["qp"].scale(s)) < 1e-5
    assert op.apply(corners["pp"]).coeff_norm1() < 1e-5


def test_modular_curvature_matches_direct(t4, rng):
    f = random_self_adjoint(t4, rng, terms=2, radius=1, norm=0.3)
    rd = curvature_direct(f, CFG)
    assert curvature_modular(f, CFG).distance(rd) < 1e-9 * rd.coeff_norm1()


def test_dilaton_coefficients(projection, t4):
    p = embed(projection, t4)
    s = 0.5
    rm = curvature_modular(p.scale(s), CFG)
    size = rm.coeff_norm1()
    derived = dilaton_curvature(p, s, CFG, tol=1e-5, coefficients=dilaton_coefficients_derived)
    assert derived.distance(rm) < 1e-4 * size
    tabulated = dilaton_curvature(p, s, CFG, tol=1e-5, coefficients=dilaton_coefficients)
    assert tabulated.distance(rm) > 0.1 * size


def test_dilaton_coefficients_small_s():
    # both coefficient sets vanish at s = 0, where the curvature does
    assert np.allclose(dilaton_coefficients_derived(1e-12), 0, atol=1e-10)


def test_gradient_matches_finite_difference(t4, rng):
    f = random_self_adjoint(t4, rng, terms=2, radius=1, norm=0.3)
    h = random_self_adjoint(t4, rng, terms=2, radius=1, norm=0.3)
    eps = 1e-4
    fd = (eh_omega(f + h.scale(eps), CFG) - eh_omega(f - h.scale(eps), CFG)) / (2 * eps)
    assert abs(trace_product(h, grad_eh(f, CFG)) - fd) < 1e-6 * abs(fd)
    printed = trace_product(h, grad_eh_printed(f, CFG))
    assert np.isfinite(printed)


def test_apply_fn2_on_commuting_input(t2):
    U = t2.gen(0)
    f = (U + U.adjoint()).scale(0.5)
    x = U.scale(0.3)
    from nctorus.modular import H

    # nabla vanishes on elements commuting with f, so H acts as H(0, 0) = -2 * 1/2 + 1/2 = -1/2
    assert apply_fn2(build_ad(f), H, x, x).distance((x * x).scale(-0.5)) < 1e-12
    assert apply_fn(build_ad(f), G1, x).distance(x) < 1e-14
