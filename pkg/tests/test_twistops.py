import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twisted_splines.quad import QuadConfig, Rectangle
from twisted_splines.splines import phi2_closed, spline_function
from twisted_splines.twistops import (LatticePoint, PlanarFunction, compose_translations, dilate, inner,
                                      lambda_twisted_translate, linear_combination, norm, scale,
                                      twisted_convolve, twisted_translate)

PHI1 = spline_function(1)
CFG = QuadConfig()


def bump(cx=0.0, cy=0.0, w=1.0, c=1.0):
    """Smooth-ish polynomial bump with a complex phase, for adjoint/unitarity checks."""
    def ev(x, y):
        u, v = (x - cx) / w, (y - cy) / w
        return c * (u * (1 - u)) ** 2 * (v * (1 - v)) * np.exp(1j * (u + 2 * v))
    return PlanarFunction(ev, Rectangle(cx, cx + w, cy, cy + w), name="bump")


def test_identity_translation():
    assert twisted_translate(PHI1, (0, 0)) is PHI1


def test_translate_example():
    g = twisted_translate(PHI1, (1, 0))
    assert abs(g(1.5, 0.5) - (-1j)) < 1e-15
    assert g(0.5, 0.5) == 0
    assert g.support == Rectangle(1, 2, 0, 1)


def test_support_invariant():
    f = PlanarFunction(lambda x, y: np.ones_like(x, dtype=complex), Rectangle(0, 1, 0, 1))
    assert f(3.0, 0.5) == 0 and f(0.5, 0.5) == 1


def test_compose_examples():
    assert compose_translations((1, 0), (0, 1)) == (-1, LatticePoint(1, 1))
    assert compose_translations((3, -2), (-3, 2)) == (1, LatticePoint(0, 0))
    assert compose_translations((2, 3), (4, 6)) == (1, LatticePoint(6, 9))


@given(st.tuples(*[st.integers(-3, 3)] * 4))
@settings(max_examples=40, deadline=None)
def test_composition_law(k):
    p1, p2 = k[:2], k[2:]
    phase, p = compose_translations(p1, p2)
    lhs = twisted_translate(twisted_translate(PHI1, p2), p1)
    rhs = twisted_translate(PHI1, p)
    xs, ys = np.meshgrid(np.linspace(-4, 4, 23), np.linspace(-4, 4, 23))
    assert np.max(np.abs(lhs(xs, ys) - phase * rhs(xs, ys))) < 1e-13


def test_lambda_one_reduces():
    a = lambda_twisted_translate(PHI1, 1.0, (2, -1))
    b = twisted_translate(PHI1, (2, -1))
    xs, ys = np.meshgrid(np.linspace(1, 3, 9), np.linspace(-1, 1, 9))
    assert np.allclose(a(xs, ys), b(xs, ys), atol=1e-15)
    with pytest.raises(ValueError):
        lambda_twisted_translate(PHI1, 0.0, (1, 1))


def test_lambda_translate_unitary():
    g = lambda_twisted_translate(bump(), 4.0, (0.25, -0.5))
    assert abs(norm(g) - norm(bump())) < 1e-12


def test_dilation():
    f = bump()
    xs, ys = np.meshgrid(np.linspace(0, 1, 7), np.linspace(0, 1, 7))
    assert np.allclose(dilate(f, 1.0)(xs, ys), f(xs, ys))
    assert np.allclose(dilate(dilate(f, 0.5), 2.0)(xs, ys), f(xs, ys), atol=1e-15)
    for a in (0.25, 0.7, 3.0):
        assert abs(norm(dilate(f, a)) - norm(f)) < 1e-12
    with pytest.raises(ValueError):
        dilate(f, 0.0)


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=15, deadline=None)
def test_unitarity(k, l):
    f = bump(0.2, -0.3, 1.3)
    assert abs(norm(twisted_translate(f, (k, l))) - norm(f)) < 1e-12


@given(st.integers(-1, 1), st.integers(-1, 1))
@settings(max_examples=9, deadline=None)
def test_adjoint(k, l):
    f = bump(0.0, 0.0, 1.5)
    g = bump(0.4, -0.2, 1.2, c=1 - 0.5j)
    lhs = inner(twisted_translate(f, (k, l)), g)
    rhs = inner(f, twisted_translate(g, (-k, -l)))
    assert abs(lhs - rhs) < 1e-10


def test_linear_combination_and_scale():
    h = linear_combination([(2.0, PHI1), (1j, twisted_translate(PHI1, (1, 0)))])
    assert abs(h(0.5, 0.5) - 2) < 1e-15 and abs(h(1.5, 0.5) - 1) < 1e-15
    assert scale(PHI1, 3j)(0.2, 0.2) == 3j
    with pytest.raises(ValueError):
        linear_combination([])


def test_convolution_matches_closed_form():
    conv = twisted_convolve(PHI1, PHI1, CFG)
    assert abs(conv(1.0, 1.0) - 4 / np.pi ** 2) < 1e-12
    xs, ys = np.meshgrid(np.linspace(0, 2, 17), np.linspace(0, 2, 17))
    assert np.max(np.abs(conv(xs, ys) - phi2_closed(xs, ys))) < 10 * CFG.tolerance
    assert conv.support == Rectangle(0, 2, 0, 2)


def test_non_commutative_witness():
    t = twisted_translate(PHI1, (1, 0))
    a = twisted_convolve(PHI1, t)(1.5, 0.5)
    b = twisted_convolve(t, PHI1)(1.5, 0.5)
    assert abs(a - b) > 1e-3


def test_triple_support():
    phi3 = twisted_convolve(twisted_convolve(PHI1, PHI1), PHI1)
    s = phi3.support
    assert (s.x_lo, s.x_hi, s.y_lo, s.y_hi) == (0, 3, 0, 3)
    assert phi3(3.2, 1.0) == 0
