import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorus import FuncalcConfig, Torus, golden_theta
from nctorus.corpus import random_self_adjoint
from nctorus.oracles import RationalTorus
from nctorus.perturb import FitError, PerturbationProbe, omega, order4_obstruction, taylor_fit
from nctorus.projections import commuting_family

CFG = FuncalcConfig(prune_tol=1e-18)


def _uv(torus):
    U, V = torus.gen(0), torus.gen(1)
    return U + U.adjoint() + V + V.adjoint()


@given(st.floats(0.01, 0.99))
def test_obstruction_of_uv_closed_form(theta):
    torus = Torus(golden_theta(2, theta))
    value = order4_obstruction(_uv(torus))
    assert value == pytest.approx(12 - 12 * math.cos(2 * math.pi * theta), abs=1e-12)


def test_obstruction_matches_matrix_model():
    rat = RationalTorus(Fraction(3, 7))
    g = _uv(rat.torus)
    dg = g.derive(1)
    F, D = rat.matrix(g), rat.matrix(dg)
    brute = 3 * (rat.trace(F @ F @ D @ D) - rat.trace(F @ D @ F @ D))
    assert abs(order4_obstruction(g) - brute) < 1e-12


def test_obstruction_nonnegative(t2, rng):
    for _ in range(5):
        f = random_self_adjoint(t2, rng, radius=3)
        value = order4_obstruction(f)
        assert abs(value.imag) < 1e-12
        assert value.real >= -1e-12


def test_omega_vanishes_on_commuting_elements(t2):
    V = t2.gen(1)
    for f in ((V + V.adjoint()).scale(2.0), commuting_family(t2, [(2, 3, 0.3j), (4, 6, 0.1)])):
        for t in (-0.1, 0.05, 0.2):
            assert abs(omega(f, t, CFG)) < 1e-12


def test_omega_is_even_at_fourth_order(t2):
    f = _uv(t2).scale(0.25)
    a, b = omega(f, 0.05, CFG), omega(f, -0.05, CFG)
    assert abs(a - b) < 1e-6 * abs(a)
    assert omega(f, 0.0) == 0


def test_fit_isolates_quartic_term(t2, rng):
    ratios = []
    for f in (_uv(t2), random_self_adjoint(t2, rng, radius=3)):
        coeffs, _ = taylor_fit(PerturbationProbe.scaled(f, fit_degree=8, cfg=CFG))
        assert np.abs(coeffs[:4]).max() < 1e-8
        ratios.append(coeffs[4] / order4_obstruction(f))
    assert ratios[0] == pytest.approx(1 / 48, rel=1e-6)
    assert ratios[1] == pytest.approx(ratios[0], rel=1e-3)


def test_probe_validation(t2):
    f = _uv(t2)
    with pytest.raises(ValueError):
        PerturbationProbe(f, (0.1, 0.2, 0.3))
    with pytest.raises(ValueError):
        PerturbationProbe(f, tuple(np.linspace(-0.8, 0.8, 10)))
    with pytest.raises(ValueError):
        PerturbationProbe(f, (-0.1, 0.1), fit_degree=6)


def test_fit_refuses_ill_conditioned_design(t2):
    probe = PerturbationProbe(_uv(t2), fit_degree=6, max_condition=10.0)
    with pytest.raises(FitError):
        taylor_fit(probe)
