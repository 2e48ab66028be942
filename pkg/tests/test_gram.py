import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twisted_splines.gram import (I_SHIFTS, QUOTED_TARGETS, S_OFFSETS, CoefficientSeq, GramTable,
                                  bessel_check, gramian_phi2_integrals, quadratic_form, s_family,
                                  symplectic_sign, twisted_inner)
from twisted_splines.splines import spline_function
from twisted_splines.twistops import inner, linear_combination, norm, twisted_translate

PI = np.pi
PHI1 = spline_function(1)
PHI2 = spline_function(2)
T2 = GramTable(PHI2)
# frozen: scipy dblquad of phi2_closed^2 over [0,2]^2, times pi^4
I9 = 15.924694960303976
REPORT = gramian_phi2_integrals()


def test_symplectic_sign():
    assert symplectic_sign((1, 0), (0, 1)) == -1
    assert symplectic_sign((2, 3), (4, 6)) == 1
    assert symplectic_sign((0, 0), (5, 7)) == 1


def test_twisted_inner_matches_direct_inner():
    for p, q in [((0, 0), (1, 0)), ((1, 2), (0, 1)), ((-1, 1), (0, 0)), ((2, 1), (1, 1))]:
        direct = inner(twisted_translate(PHI2, p), twisted_translate(PHI2, q))
        assert abs(twisted_inner(PHI2, p, q) - direct) < 1e-12
        assert abs(T2.inner(p, q) - direct) < 1e-12


def test_phi1_orthonormal():
    pts = [(k, l) for k in range(-2, 3) for l in range(-2, 3)]
    G = GramTable(PHI1).matrix(pts)
    assert np.max(np.abs(G - np.eye(len(pts)))) < 1e-10


def test_gram_hermitian():
    pts = [(k, l) for k in range(-2, 3) for l in range(-1, 2)]
    G = T2.matrix(pts)
    assert np.max(np.abs(G - G.conj().T)) < 1e-14
    assert np.min(np.linalg.eigvalsh(G)) > 0


def test_i9_is_squared_norm():
    assert abs(REPORT.i9 - I9) < 1e-9
    assert abs(norm(PHI2) ** 2 * PI ** 4 - I9) < 1e-9


def test_i5_conjugate_modulus():
    assert abs(abs(REPORT.i5) - abs(REPORT.i3)) < 1e-12
    assert abs(REPORT.i5 - np.conj(REPORT.i3)) < 1e-12


def test_i1_is_real():
    # phi_2 is real and symmetric under x <-> y, forcing the (1,1) overlap to be real
    assert abs(REPORT.i1.imag) < 1e-12


def test_report_matches_quoted_where_it_can():
    assert abs(REPORT.i3 - QUOTED_TARGETS["i3"]) < 1e-3
    assert abs(REPORT.i7 - QUOTED_TARGETS["i7"]) < 1e-3


def test_report_bounds_consistent():
    off = 2 * abs(REPORT.i1) + 4 * abs(REPORT.i3) + 2 * abs(REPORT.i7)
    assert abs(REPORT.off_diagonal - off) < 1e-15
    assert abs(REPORT.lower_bound * PI ** 4 - (I9 - off)) < 1e-9
    assert REPORT.certified
    text = REPORT.to_text()
    assert "lower_times_pi4" in text and "i9_re" in text


def test_zero_coefficients():
    assert quadratic_form(PHI2, {}) == 0.0


def test_pruning_only_drops_zero_terms():
    rng = np.random.default_rng(4)
    c = CoefficientSeq.random(rng, radius=2)
    for p in c.coeffs:
        for q in c.coeffs:
            if not T2.overlaps((p.k - q.k, p.l - q.l)):
                assert abs(twisted_inner(PHI2, p, q)) == 0


def test_quadratic_form_against_direct_norm():
    c = {(0, 0): 1.0, (1, 0): 0.5j, (0, -1): -0.3, (2, 1): 0.2 + 0.1j}
    f = linear_combination([(v, twisted_translate(PHI2, p)) for p, v in c.items()])
    assert abs(quadratic_form(PHI2, c, table=T2) - norm(f) ** 2) < 1e-10


@given(st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_s_family_sum_and_pairs(seed):
    c = CoefficientSeq.random(np.random.default_rng(seed), radius=2)
    s = s_family(c, T2)
    assert set(s) == set(S_OFFSETS)
    assert abs(sum(s.values()) - quadratic_form(PHI2, c, table=T2)) < 1e-12
    for a, b in [("S1", "S2"), ("S3", "S4"), ("S5", "S6"), ("S7", "S8")]:
        assert abs(s[a] - np.conj(s[b])) < 1e-12
    assert abs(s["S9"].imag) < 1e-15


@given(st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_quadratic_form_within_bounds(seed):
    c = CoefficientSeq.random(np.random.default_rng(seed), radius=3)
    r = quadratic_form(PHI2, c, table=T2) / c.norm2()
    assert REPORT.lower_bound <= r <= REPORT.upper_bound


def test_bessel_small_run():
    res = bessel_check(2, trials=5, seed=1)
    assert res.within_chain and res.max_ratio > 0
    with pytest.raises(ValueError):
        bessel_check(1)


def test_i_shift_keys():
    assert set(I_SHIFTS) == {"i1", "i3", "i5", "i7", "i9"}
