import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from twisted_splines.mra import (MAX_LEVEL, RIESZ_LOWER, RIESZ_UPPER, ExpPiece, MRALevel, basis_fn,
                                 basis_fn_compositional, basis_fn_grid, build_psi, cancellation_sum, card_A,
                                 card_B1, exp_integral_1d, haar_coefficient, haar_coefficients, haar_phi1_exact,
                                 index_set_A, index_set_B1, inner_Nj, inner_Nj_integral, nesting_residual,
                                 phi1_v1_residual, piece_inner, quadratic_form_S, riesz_check,
                                 v0_not_in_v1_residual)
from twisted_splines.quad import Rectangle
from twisted_splines.splines import spline_function
from twisted_splines.twistops import dilate, inner, linear_combination, norm, twisted_translate

PI = np.pi
PHI1 = spline_function(1)


def test_level_bounds():
    MRALevel(MAX_LEVEL)
    with pytest.raises(ValueError):
        MRALevel(MAX_LEVEL + 1)
    with pytest.raises(ValueError):
        basis_fn(-9, 0, 0)


def test_basis_examples():
    xs, ys = np.meshgrid(np.linspace(-0.5, 1.5, 41), np.linspace(-0.5, 1.5, 41))
    assert np.array_equal(basis_fn(0, 0, 0)(xs, ys), PHI1(xs, ys))
    f = basis_fn(1, 1, 2)
    assert abs(f(1.2, 2.3) - 2 * np.exp(1j * PI * (2 * 1.2 - 2.3))) < 1e-14
    assert f(1.6, 2.3) == 0 and f(1.2, 2.6) == 0


@given(st.integers(-3, 2), st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 2 ** 31))
@settings(max_examples=40, deadline=None)
def test_compositional_matches_closed(j, k, l, seed):
    rng = np.random.default_rng(seed)
    s = 2.0 ** (-j)
    x = rng.uniform(k - 0.2 * s, k + 1.2 * s, 30)
    y = rng.uniform(l - 0.2 * s, l + 1.2 * s, 30)
    a = basis_fn(j, k, l)(x, y)
    b = basis_fn_compositional(j, k, l)(x, y)
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("j", [-2, -1, 0, 1, 2])
def test_basis_unit_norm(j):
    p = ExpPiece(2.0 ** j, 1.0, -3.0, Rectangle(3, 3 + 2.0 ** (-j), 1, 1 + 2.0 ** (-j)))
    assert abs(piece_inner(p, p) - 1) < 1e-14
    assert abs(norm(basis_fn(j, 3, 1)) - 1) < 1e-12


def test_exp_integral():
    assert exp_integral_1d(0, 0, 2) == 2
    assert abs(exp_integral_1d(2, 0, 1)) < 1e-15
    assert exp_integral_1d(1, 1, 0) == 0


def test_inner_examples():
    assert abs(inner_Nj(1, 1, -1) - 1 / PI ** 2) < 1e-15
    for j in (-3, -2, -1, 0, 2):
        assert inner_Nj(2, 1, j) == 0
        assert inner_Nj(0, 0, j) == 1
    for j in (0, 1, 3):
        assert inner_Nj(1, 1, j) == 0 and inner_Nj(1, 0, j) == 0


@pytest.mark.parametrize("j", [-1, -2, -3])
def test_inner_closed_vs_integral(j):
    L = 2 ** (-j)
    for r in range(-L + 1, L):
        for s in range(-L + 1, L):
            assert abs(inner_Nj(r, s, j) - inner_Nj_integral(r, s, j)) < 1e-9


@pytest.mark.parametrize("j", [-1, -2])
def test_inner_vs_scipy_window_integral(j):
    L = 2.0 ** (-j)
    for r, s in [(1, 1), (1, -1), (-1, 3 if j == -2 else 1), (0, 1)]:
        def part(f):
            g = lambda y, x: f(4.0 ** j * np.exp(1j * PI * (s * x - r * y)))  # noqa: E731
            return integrate.dblquad(g, max(0, -r), min(L, L - r), max(0, -s), min(L, L - s), epsabs=1e-13)[0]
        assert abs(inner_Nj(r, s, j) - complex(part(np.real), part(np.imag))) < 1e-9


def test_inner_vs_operator_quadrature():
    j = -1
    nj = dilate(PHI1, 2.0 ** j)
    for r, s in [(1, 1), (1, -1), (1, 0)]:
        assert abs(inner_Nj(r, s, j) - inner(twisted_translate(nj, (r, s)), nj)) < 1e-10


@pytest.mark.parametrize("j", [-1, -2, -3, -4])
def test_magnitude_bound(j):
    for r, s in index_set_A(j):
        assert abs(inner_Nj(r, s, j)) <= 2.0 ** (2 * j + 1) / PI + 1e-15


@pytest.mark.parametrize("j", [-1, -2, -3, -4])
def test_cardinalities(j):
    assert len(index_set_A(j)) == card_A(j) == 2 ** (-j + 2) * (2 ** (-j) - 1)
    assert len(index_set_B1(j)) == card_B1(j) == 2 ** (-2 * j - 1)


def test_quadratic_form_orthonormal_levels():
    rng = np.random.default_rng(0)
    for j in (0, 1):
        a = {(k, l): complex(*rng.standard_normal(2)) for k in range(-2, 3) for l in range(-2, 3)}
        assert abs(quadratic_form_S(a, j) - sum(abs(v) ** 2 for v in a.values())) < 1e-12


def test_quadratic_form_against_direct_norm():
    j = -1
    a = {(0, 0): 1.0, (1, 1): 0.5 - 0.2j, (1, -1): 0.3j, (2, 1): -0.4}
    nj = dilate(PHI1, 2.0 ** j)
    f = linear_combination([(v, twisted_translate(nj, p)) for p, v in a.items()])
    assert abs(quadratic_form_S(a, j) - norm(f) ** 2) < 1e-10


@pytest.mark.parametrize("j", [-1, -2, -3])
def test_riesz_sandwich(j):
    res = riesz_check(j, trials=500, seed=j + 10)
    assert res.passed
    assert RIESZ_LOWER <= res.observed_min <= res.observed_max <= RIESZ_UPPER
    assert "status = PASS" in res.to_text()


def test_v0_not_in_v1():
    r = v0_not_in_v1_residual(4)
    assert r > 0.01
    assert r == v0_not_in_v1_residual(6)
    assert abs(phi1_v1_residual(4) - (1 - 0.25 - 2 / PI ** 2 - 4 / PI ** 4)) < 1e-12
    with pytest.raises(ValueError):
        v0_not_in_v1_residual(1)


def test_nesting_residuals():
    # the V_{j+1} system does not contain basis_fn(j, .): residuals are positive
    h = 1 - 0.25 - 2 / PI ** 2 - 4 / PI ** 4
    assert abs(nesting_residual(-1, 0, 0) - h) < 1e-12
    assert abs(nesting_residual(0, 0, 0) - 0.75) < 1e-12
    assert abs(nesting_residual(1, 0, 0) - 0.75) < 1e-12


def test_haar_coefficients_phi1():
    c = haar_coefficients()
    exact = haar_phi1_exact()
    assert set(c) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    for key, v in exact.items():
        assert abs(c[key] - v) < 1e-12
    for key in [(-1, 0), (2, 0), (0, 2), (-1, -1), (2, 1)]:
        assert haar_coefficient(PHI1, *key) == 0
    with pytest.raises(ValueError):
        haar_coefficients(twisted_translate(PHI1, (1, 0)))


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_cancellation_symbolic(vals):
    c = dict(zip([(0, 0), (0, 1), (1, 0), (1, 1)], vals))
    assert abs(cancellation_sum(c)) <= 1e-12 * (1 + max(abs(v) for v in vals)) ** 2


def test_wavelet_properties():
    c = haar_coefficients()
    assert abs(cancellation_sum(c)) < 1e-12
    w = build_psi(c)
    assert not w.hypothesis_holds
    assert abs(w.hypothesis_residual - (1 - sum(abs(v) ** 2 for v in c.values()))) < 1e-12
    psi = w.psi
    assert abs(inner(PHI1, psi)) < 1e-9
    assert abs(norm(psi) ** 2 - sum(abs(v) ** 2 for v in c.values())) < 1e-10
    for k, l in [(1, 0), (0, 1), (-1, 0), (1, 1), (2, -1)]:
        assert abs(inner(psi, twisted_translate(PHI1, (k, l)))) < 1e-9


def test_grid_export():
    g = basis_fn_grid(1, 1, 2, (0.5, 2.0), (1.5, 3.0), samples=31)
    assert g.shape == (31 * 31, 5)
    nz = g[g[:, 2] > 0]
    assert np.all((nz[:, 0] >= 1) & (nz[:, 0] < 1.5) & (nz[:, 1] >= 2) & (nz[:, 1] < 2.5))
    assert np.allclose(nz[:, 2], 2.0)
    with pytest.raises(ValueError):
        basis_fn_grid(0, 0, 0, (0, 1), (0, 1), samples=1)
