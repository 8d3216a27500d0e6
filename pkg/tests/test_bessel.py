from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from levyarea import bessel
from levyarea.errors import DomainError, RangeError

NUS = [-0.5, 0.0, 0.5, 1.0, 2.5, 7.0]


@pytest.mark.parametrize("nu", NUS)
@pytest.mark.parametrize("t", [0.0, 1e-3, 0.5, 3.0, 12.0, 29.0])
def test_eval_I_matches_scipy(nu, t):
    ref = special.iv(nu, t)
    assert bessel.eval_I(nu, t) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("nu", NUS)
@pytest.mark.parametrize("t", [1e-3, 0.5, 3.0, 7.9, 8.1, 40.0, 500.0, 1900.0])
def test_eval_J_matches_scipy(nu, t):
    ref = special.jv(nu, t)
    assert bessel.eval_J(nu, t) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_eval_J_away_from_zeros_relative():
    # relative accuracy where |J| is not small
    t = np.linspace(9.0, 200.0, 400)
    for nu in (0.0, 1.0, 3.5):
        ref = special.jv(nu, t)
        got = np.array([bessel.eval_J(nu, x) for x in t])
        mask = np.abs(ref) > 1e-2
        assert np.max(np.abs(got[mask] / ref[mask] - 1)) < 1e-10


def test_hyp0f1_matches_mpmath():
    for b, x in [(0.5, 3.0), (1.0, -16.0), (3.5, 100.0), (2.0, -10.0), (0.25, 225.0)]:
        assert bessel.hyp0f1(b, x) == pytest.approx(float(mpmath.hyp0f1(b, x)), rel=1e-11, abs=1e-13)


def test_I_range_error():
    with pytest.raises(RangeError):
        bessel.eval_I(0.0, 31.0)


@pytest.mark.parametrize("nu", [-1.0, -1.5, float("nan"), float("inf")])
def test_check_order_rejects(nu):
    with pytest.raises(DomainError):
        bessel.check_order(nu)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.5, 10.0), t=st.floats(0.0, 30.0))
def test_ratio_I_in_unit_interval(nu, t):
    r = bessel.ratio_I(nu, t)
    assert 0.0 <= r < 1.0


@settings(max_examples=40, deadline=None)
@given(nu=st.floats(-0.99, -0.5), t=st.floats(0.0, 30.0))
def test_ratio_I_nonnegative_below_half(nu, t):
    assert bessel.ratio_I(nu, t) >= 0.0


def test_ratio_I_exceeds_one_below_minus_half():
    # the unit bound fails for nu < -1/2; the value here is checked against scipy
    r = bessel.ratio_I(-0.75, 1.0)
    assert r > 1.0
    assert r == pytest.approx(special.iv(0.25, 1.0) / special.iv(-0.75, 1.0), rel=1e-12)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("t", [0.5, 3.0, 10.0])
def test_I_product_form_matches_series(nu, t):
    # I_nu(t) = (t/2)^nu / Gamma(nu+1) * prod_k (1 + t^2 / z_k^2)
    zt = bessel.find_zeros(nu, 200)
    log_prod = zt.sum(lambda z: np.log1p(t * t / (z * z)))
    prod = (t / 2.0) ** nu / math.gamma(nu + 1.0) * math.exp(log_prod)
    assert prod == pytest.approx(bessel.eval_I(nu, t), rel=1e-7)


@pytest.mark.parametrize("nu,t", [(0.0, 2.0), (1.5, 10.0), (4.0, 25.0)])
def test_ratio_I_matches_scipy(nu, t):
    ref = special.ive(nu + 1, t) / special.ive(nu, t)
    assert bessel.ratio_I(nu, t) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("n", range(6))
@pytest.mark.parametrize("form", ["polynomial", "operator"])
def test_half_integer_I(n, form):
    for t in (1e-4, 0.3, 2.0, 15.0):
        ref = special.iv(n + 0.5, t)
        assert float(bessel.half_integer_I(n, t, form=form)) == pytest.approx(ref, rel=1e-12)


def test_a_coeff_values():
    # signed Hankel coefficients (-1)^k (n+k)! / (2^k k! (n-k)!)
    assert [bessel.a_coeff(k, 3) for k in range(4)] == [1, -6, 15, -15]
    with pytest.raises(DomainError):
        bessel.a_coeff(4, 3)


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.0, 5.0])
def test_zeros_match_scipy_integer_order(nu):
    zt = bessel.find_zeros(nu, 50)
    ref = special.jn_zeros(int(nu), 50)
    np.testing.assert_allclose(zt.zeros, ref, rtol=1e-13)


def test_half_order_zeros_are_multiples_of_pi():
    zt = bessel.find_zeros(0.5, 30)
    np.testing.assert_allclose(zt.zeros, np.pi * np.arange(1, 31), rtol=1e-14)


@pytest.mark.parametrize("nu", [-0.75, 0.3, 3.7])
def test_zeros_are_roots(nu):
    zt = bessel.find_zeros(nu, 20)
    assert np.max(np.abs(special.jv(nu, zt.zeros))) < 1e-13
    assert np.all(np.diff(zt.zeros) > 0)
    assert np.max(np.abs(zt.residuals())) < 1e-12


def test_zero_table_is_readonly():
    zt = bessel.find_zeros(1.0, 5)
    with pytest.raises(ValueError):
        zt.zeros[0] = 0.0


@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0, 4.5])
def test_rayleigh_sum(nu):
    zt = bessel.find_zeros(nu, 40)
    assert zt.rayleigh_sum() == pytest.approx(1.0 / (4.0 * (nu + 1.0)), rel=1e-10)


def test_mcmahon_close_for_large_k():
    nu = 1.0
    zt = bessel.find_zeros(nu, 200)
    assert abs(bessel.mcmahon(nu, 200) - zt.zeros[-1]) < 1e-10


def test_find_zeros_rejects_bad_K():
    with pytest.raises((DomainError, ValueError)):
        bessel.find_zeros(0.0, 0)
