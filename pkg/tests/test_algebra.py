import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorus import AlgebraElement, ConfigurationError, DerivationScale, ThetaMatrix, Torus, golden_theta, precision, trace_product
from nctorus.algebra import GOLDEN, commutator, trace_product_bound
from nctorus.oracles import RationalTorus


def brute_product(x, y):
    lower = x.torus.theta.lower()
    out = {}
    for ka, va in x.terms().items():
        for kb, vb in y.terms().items():
            phase = np.exp(2j * np.pi * (np.array(ka) @ lower @ np.array(kb)))
            k = tuple(int(v) for v in np.add(ka, kb))
            out[k] = out.get(k, 0) + va * vb * phase
    return x.torus.from_terms(out)


def random_element(torus, rng, terms=12, radius=2):
    coeffs = {}
    for _ in range(terms):
        k = tuple(int(v) for v in rng.integers(-radius, radius + 1, torus.n))
        coeffs[k] = complex(rng.normal(), rng.normal())
    return torus.from_terms(coeffs)


terms_2d = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=6,
)
TORUS = Torus(golden_theta(2))


def test_commutation_relation(t2):
    U, V = t2.gen(0), t2.gen(1)
    assert (V * U).distance((U * V).scale(np.exp(-2j * np.pi * GOLDEN))) < 1e-15
    assert (U * V).coeff((1, 1)) == 1


def test_single_generator_powers_commute(t2):
    U = t2.gen(0)
    x = U + U.adjoint()
    assert (x * x).distance(t2.gen(0, 2) + t2.scalar(2) + t2.gen(0, -2)) < 1e-15


def test_pairwise_relations_4d(t4):
    theta = t4.theta.array()
    for j in range(4):
        for k in range(4):
            a, b = t4.gen(j), t4.gen(k)
            expected = (b * a).scale(np.exp(2j * np.pi * theta[j, k]))
            assert (a * b).distance(expected) < 1e-14


@pytest.mark.parametrize("seed", range(4))
def test_product_matches_brute_force_2d(t2, seed):
    rng = np.random.default_rng(seed)
    a, b = random_element(t2, rng, 30, 4), random_element(t2, rng, 25, 3)
    assert (a * b).distance(brute_product(a, b)) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_product_matches_brute_force_4d(t4, seed):
    rng = np.random.default_rng(seed)
    a, b = random_element(t4, rng, 40, 2), random_element(t4, rng, int(rng.integers(1, 50)), int(rng.integers(1, 4)))
    for x, y in ((a, b), (b, a)):
        ref = brute_product(x, y)
        assert (x * y).distance(ref) <= 1e-14 * x.coeff_norm1() * y.coeff_norm1()


def test_matrix_oracle_200_products():
    rat = RationalTorus(Fraction(3, 7))
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        a = rat.torus.monomial(tuple(int(v) for v in rng.integers(-3, 4, 2)), complex(rng.normal(), rng.normal()))
        b = rat.torus.monomial(tuple(int(v) for v in rng.integers(-3, 4, 2)), complex(rng.normal(), rng.normal()))
        assert rat.aliasing_free(a, b)
        worst = max(worst, float(np.abs(rat.matrix(a * b) - rat.matrix(a) @ rat.matrix(b)).max()))
    assert worst < 1e-12


def test_matrix_oracle_trace_and_adjoint():
    rat = RationalTorus(Fraction(3, 7))
    x = random_element(rat.torus, np.random.default_rng(3), 8, 2)
    m = rat.matrix(x)
    assert abs(rat.trace(m) - x.trace()) < 1e-14
    assert np.abs(rat.matrix(x.adjoint()) - m.conj().T).max() < 1e-13


@given(terms_2d, terms_2d, terms_2d)
def test_associativity(ta, tb, tc):
    a, b, c = (TORUS.from_terms(t) for t in (ta, tb, tc))
    scale = max(1.0, a.coeff_norm1() * b.coeff_norm1() * c.coeff_norm1())
    assert ((a * b) * c).distance(a * (b * c)) <= 1e-13 * scale


@given(terms_2d, terms_2d)
def test_adjoint_reverses_products(ta, tb):
    a, b = TORUS.from_terms(ta), TORUS.from_terms(tb)
    scale = max(1.0, a.coeff_norm1() * b.coeff_norm1())
    assert (a * b).adjoint().distance(b.adjoint() * a.adjoint()) <= 1e-13 * scale
    assert a.adjoint().adjoint().distance(a) <= 1e-14 * max(1.0, a.coeff_norm1())


@given(terms_2d, terms_2d, st.integers(0, 1))
def test_leibniz(ta, tb, j):
    a, b = TORUS.from_terms(ta), TORUS.from_terms(tb)
    lhs = (a * b).derive(j)
    rhs = a.derive(j) * b + a * b.derive(j)
    assert lhs.distance(rhs) <= 1e-12 * max(1.0, a.coeff_norm1() * b.coeff_norm1())


@given(terms_2d, terms_2d)
def test_trace_is_tracial_and_kills_derivatives(ta, tb):
    a, b = TORUS.from_terms(ta), TORUS.from_terms(tb)
    scale = max(1.0, a.coeff_norm1() * b.coeff_norm1())
    assert abs((a * b).trace() - (b * a).trace()) <= 1e-13 * scale
    assert abs(trace_product(a, b) - (a * b).trace()) <= 1e-13 * scale
    assert a.derive(0).trace() == 0 and a.derive(1).trace() == 0


@given(terms_2d)
def test_trace_positive(ta):
    a = TORUS.from_terms(ta)
    value = (a * a.adjoint()).trace()
    assert abs(value.imag) < 1e-12 * max(1.0, a.coeff_norm1() ** 2)
    assert value.real >= -1e-14


def test_derivation_scales():
    V = Torus(golden_theta(2)).gen(1)
    f = (V + V.adjoint()).scale(2.0)
    assert f.derive(1).distance((V - V.adjoint()).scale(2j)) < 1e-15
    t2pi = Torus(golden_theta(2), DerivationScale.two_pi())
    g = t2pi.from_terms(f.terms())
    assert g.derive(1).coeff((0, 1)) == pytest.approx(2 * 2j * np.pi)


def test_pruning_books_dropped_mass(t2):
    a = t2.from_terms({(0, 0): 1.0, (1, 0): 1e-9})
    with precision(1e-12):
        sq = a * a
    assert sq.coeff((2, 0)) == 0
    assert sq.dropped == pytest.approx(1e-18)
    b = sq * a
    assert b.dropped >= sq.dropped * a.coeff_norm1()
    assert trace_product_bound(sq, a) >= sq.dropped


def test_commutator_of_generators(t2):
    U, V = t2.gen(0), t2.gen(1)
    c = commutator(U, V)
    # UV - VU = (1 - e(-theta)) UV
    assert c.coeff((1, 1)) == pytest.approx(1 - np.exp(-2j * np.pi * GOLDEN))
    assert len(c) == 1


def test_json_round_trip(t2, rng):
    x = random_element(t2, rng).with_dropped(1e-9)
    y = AlgebraElement.from_json(x.to_json())
    assert y.distance(x) == 0 and y.dropped == x.dropped


def test_theta_validation():
    with pytest.raises(ConfigurationError):
        golden_theta(2, base=1.5)
    th = ThetaMatrix.two(0.25)
    assert np.allclose(th.array(), [[0, 0.25], [-0.25, 0]])
    assert golden_theta(4).array()[0, 1] == pytest.approx(GOLDEN)
    assert math.isclose(golden_theta(4).array()[1, 0], -GOLDEN)
