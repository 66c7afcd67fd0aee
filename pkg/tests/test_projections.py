import numpy as np
import pytest

from nctorus import ConfigurationError, Torus, golden_theta
from nctorus.algebra import GOLDEN
from nctorus.perturb import order4_obstruction
from nctorus.projections import BumpSpec, ProjectionError, commuting_family, embed, powers_rieffel, smooth_step


@pytest.fixture(scope="module")
def projection():
    return powers_rieffel(BumpSpec(GOLDEN), Torus(golden_theta(2)))


def test_smooth_step():
    u = np.linspace(-0.5, 1.5, 41)
    s = smooth_step(u)
    assert (s[u <= 0] == 0).all() and (s[u >= 1] == 1).all()
    assert (np.diff(s) >= 0).all()
    assert smooth_step(np.array([0.5]))[0] == pytest.approx(0.5)


def test_projection_properties(projection):
    p = projection
    assert (p * p - p).coeff_norm1() < 1e-9
    assert p.self_adjoint_defect() < 1e-14
    assert p.trace().real == pytest.approx(GOLDEN, abs=1e-12)
    assert abs(p.trace().imag) < 1e-15


def test_projection_does_not_commute_with_derivative(projection):
    dp = projection.derive(1)
    assert (projection * dp - dp * projection).coeff_norm1() > 1e-2
    assert order4_obstruction(projection).real > 1e-3


def test_projection_cutoff_too_small():
    with pytest.raises(ProjectionError) as info:
        powers_rieffel(BumpSpec(GOLDEN, fourier_cutoff=16), Torus(golden_theta(2)))
    assert info.value.achieved > 1e-8


def test_bump_validation(t2):
    with pytest.raises(ConfigurationError):
        BumpSpec(1.2)
    with pytest.raises(ConfigurationError):
        BumpSpec(0.3, smoothing_width=0.5)
    with pytest.raises(ConfigurationError):
        powers_rieffel(BumpSpec(0.3), t2)


def test_commuting_family(t2):
    f = commuting_family(t2, [(2, 3, 0.3 + 0.1j), (4, 6, -0.2j)], 0.5)
    assert f.self_adjoint_defect() < 1e-15
    df = f.derive(1)
    assert (f * df - df * f).coeff_norm1() < 1e-14
    # twisted phases are floating point, so "zero" means roundoff
    assert abs(order4_obstruction(f)) < 1e-12
    diag = commuting_family(t2, [(1, 1, 0.4), (2, 2, 0.1j)])
    assert (diag * diag.derive(0) - diag.derive(0) * diag).coeff_norm1() < 1e-14


def test_commuting_family_rejects_independent_exponents(t2):
    with pytest.raises(ValueError):
        commuting_family(t2, [(1, 0, 1.0), (0, 1, 1.0)])


def test_embed_preserves_products(t2, t4):
    U, V = t2.gen(0), t2.gen(1)
    x, y = U + V.scale(0.5j), V.adjoint() + U * V
    lhs = embed(x * y, t4)
    assert lhs.distance(embed(x, t4) * embed(y, t4)) < 1e-14
