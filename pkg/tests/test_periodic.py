import numpy as np
import pytest

from grassmannian.errors import NotBijective
from grassmannian.periodic import LiftedCircleMap, PeriodicInterpolant, circular_direction, grid


def test_interpolant_reproduces_trig_polynomial(rng):
    # any trig polynomial of degree < m/2 is reproduced exactly, with derivatives
    t = grid(32)
    f = lambda s: 0.3 + np.cos(3 * s) - 0.5 * np.sin(7 * s)
    df = lambda s: -3 * np.sin(3 * s) - 3.5 * np.cos(7 * s)
    p = PeriodicInterpolant(f(t))
    s = rng.uniform(0, 2 * np.pi, 50)
    np.testing.assert_allclose(p(s), f(s), atol=1e-13)
    np.testing.assert_allclose(p(s, 1), df(s), atol=1e-12)
    v, d1, d2 = p.jet(s)
    np.testing.assert_allclose(d2, -9 * np.cos(3 * s) + 24.5 * np.sin(7 * s), atol=1e-11)


def test_circular_direction():
    t = grid(20)
    assert circular_direction(t)[0] == 1
    assert circular_direction((-t) % (2 * np.pi))[0] == -1
    assert circular_direction((t + 0.3) % (2 * np.pi))[0] == 1
    with pytest.raises(NotBijective):
        circular_direction((2 * t) % (2 * np.pi))


def test_lifted_map_inverse():
    t = grid(64)
    vals = t + 0.5 + 0.2 * np.sin(t)
    f = LiftedCircleMap(vals, 1)
    y = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    x = f.inverse_at(y)
    np.testing.assert_allclose((f(x) - y + np.pi) % (2 * np.pi) - np.pi, 0, atol=1e-12)
