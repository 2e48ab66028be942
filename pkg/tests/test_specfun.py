import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from twisted_splines import specfun

# frozen from mpmath at 30 digits
SI_PI = 1.85193705198246617036
CI_PI = 0.07366791204642548599
SI_73, CI_73 = 1.48643644506316801520, 0.10378866643202761562


def test_constants():
    assert 0.5772156 < specfun.CONSTANTS.euler_gamma < 0.5772157
    assert specfun.CONSTANTS.pi == math.pi


def test_si_ci_reference_values():
    assert specfun.si(0.0) == 0.0
    assert abs(specfun.si(math.pi) - SI_PI) < 1e-14
    assert abs(specfun.ci(math.pi) - CI_PI) < 1e-14
    assert abs(specfun.si(7.3) - SI_73) < 1e-14
    assert abs(specfun.ci(7.3) - CI_73) < 1e-14


def test_large_argument():
    assert abs(specfun.si(1e6) - math.pi / 2) < 1e-6
    assert abs(specfun.ci(1e6)) <= 2e-6


def test_domain_errors():
    with pytest.raises(ValueError):
        specfun.si(-1.0)
    with pytest.raises(ValueError):
        specfun.ci(0.0)
    with pytest.raises(ValueError):
        specfun.ci(float("nan"))
    with pytest.raises(ValueError):
        specfun.ei_imag(0.0)


def test_against_scipy_on_wide_range():
    x = np.concatenate([np.linspace(1e-6, 5, 400), np.geomspace(5, 1e7, 400)])
    s_ref, c_ref = special.sici(x)
    assert np.max(np.abs(specfun.si(x) - s_ref)) < 1e-13
    assert np.max(np.abs(specfun.ci(x) - c_ref)) < 1e-13


def test_quadrature_oracle_random_points():
    rng = np.random.default_rng(5)
    for x in rng.uniform(0.01, 50, 50):
        s = integrate.quad(lambda t: np.sinc(t / np.pi), 0, x, limit=400, epsabs=1e-13)[0]
        cin = integrate.quad(lambda t: (np.cos(t) - 1) / t, 0, x, limit=400, epsabs=1e-13)[0]
        assert abs(specfun.si(x) - s) < 1e-9
        assert abs(specfun.ci(x) - (specfun.EULER_GAMMA + math.log(x) + cin)) < 1e-9


def test_ci_where_cosine_vanishes():
    x = 2.5 * math.pi
    cin = integrate.quad(lambda t: (np.cos(t) - 1) / t, 0, x, epsabs=1e-14)[0]
    assert abs(specfun.ci(x) - (specfun.EULER_GAMMA + math.log(x) + cin)) < 1e-10


def test_trig_integral_pair():
    p = specfun.trig_integrals(math.pi)
    assert p.argument == math.pi
    assert abs(p.si - SI_PI) < 1e-14 and abs(p.ci - CI_PI) < 1e-14


def test_ei_imag_identity_and_conjugation():
    for x in (0.5, math.pi, 7.3):
        e = specfun.ei_imag(x)
        assert e == complex(specfun.ci(x), specfun.si(x) - math.pi / 2)
        em = specfun.ei_imag(-x)
        assert em.real == e.real and em.imag == -e.imag


def test_ei_imag_two_pi_oracle():
    x = 2 * math.pi
    re = integrate.quad(lambda t: (np.cos(t) - 1) / t, 0, x, epsabs=1e-14)[0]
    im = integrate.quad(lambda t: np.sin(t) / t, 0, x, epsabs=1e-14)[0]
    expect = complex(re + specfun.EULER_GAMMA + math.log(x), im - math.pi / 2)
    assert abs(specfun.ei_imag(x) - expect) < 1e-12


def test_ein_relation_to_ei():
    for x in (0.3, 2.0, 9.0, 55.0, -4.0):
        lhs = specfun.ein_imag(x)
        rhs = specfun.ei_imag(x) + 1j * np.sign(x) * math.pi / 2 - specfun.EULER_GAMMA - math.log(abs(x))
        assert abs(lhs - rhs) < 1e-13
    assert specfun.ein_imag(0.0) == 0


def test_sinc_variants():
    assert specfun.sinc_half(0.0) == 1.0
    assert abs(specfun.sinc_half(1.0)) < 1e-16
    assert abs(specfun.sinc_half(0.5) - 2 / math.pi) < 1e-15
    assert specfun.sinc_unnormalized(0.0) == 1.0
    assert abs(specfun.sinc_unnormalized(math.pi / 2) - 2 / math.pi) < 1e-15


def test_regime_consistency_band():
    # exact-rational series against the auxiliary-function route
    for x in np.linspace(15, 25, 11):
        c1, s1 = specfun.ci_si_series_exact(x)
        c2, s2 = specfun.ci_si_auxiliary(x)
        assert abs(c1 - c2) < 1e-9 and abs(s1 - s2) < 1e-9


def test_pq_partial_sums_recomputable():
    pq = specfun.asymptotic_pq(30.0, 3)
    p = 1 - 2 / 30 ** 2 + 24 / 30 ** 4 - 720 / 30 ** 6
    q = 1 / 30 - 6 / 30 ** 3 + 120 / 30 ** 5 - 5040 / 30 ** 7
    assert abs(pq.p_value - p) < 1e-15 and abs(pq.q_value - q) < 1e-15


@given(st.floats(min_value=20.0, max_value=1e4))
@settings(max_examples=60, deadline=None)
def test_pq_truncation_bound(x):
    pq = specfun.asymptotic_pq(x, 3)
    bound = math.factorial(5) * x ** -6 + math.factorial(7) * x ** -7
    assert abs(specfun.ci(x) - specfun.ci_from_pq(x, pq)) <= bound
    assert abs(specfun.si(x) - specfun.si_from_pq(x, pq)) <= bound


@given(st.floats(min_value=1e-3, max_value=1e5))
@settings(max_examples=100, deadline=None)
def test_si_range_property(x):
    s = specfun.si(x)
    assert 0 < s < math.pi


@given(st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=100, deadline=None)
def test_conjugation_property(x):
    a, b = specfun.ei_imag(x), specfun.ei_imag(-x)
    assert a == b.conjugate()
