import numpy as np
import pytest

from nctorus.corpus import random_corpus, random_self_adjoint


@pytest.mark.parametrize("n, radius", [(2, 3), (4, 2)])
def test_corpus_shape(n, radius, t2, t4):
    torus = t2 if n == 2 else t4
    for f in random_corpus(torus, seed=3, count=5, radius=radius):
        assert f.self_adjoint_defect() < 1e-15
        assert f.coeff_norm1() == pytest.approx(1.0)
        assert np.abs(f.keys).max() <= radius
        assert abs(f.trace().imag) < 1e-15


def test_corpus_is_seeded(t2):
    a = random_corpus(t2, seed=9, count=3)
    b = random_corpus(t2, seed=9, count=3)
    assert all(x.distance(y) == 0 for x, y in zip(a, b))
    assert a[0].distance(random_corpus(t2, seed=10, count=1)[0]) > 0


def test_norm_and_constant_switch(t2, rng):
    f = random_self_adjoint(t2, rng, norm=0.25, constant=False)
    assert f.coeff_norm1() == pytest.approx(0.25)
    assert f.coeff((0, 0)) == 0
