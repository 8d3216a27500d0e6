from __future__ import annotations

import math

import numpy as np
import pytest

from levyarea import bessel, charfn, sampler, verify
from levyarea.errors import DomainError

GRID = np.linspace(-4, 4, 16)


def not_a_cf():
    return charfn.CharFn(lambda t: np.exp(-t**4), label="exp(-t^4)")


@pytest.mark.parametrize("phi", [charfn.make_B(0.5), charfn.make_b(1.0), charfn.sinc_cf(), charfn.cos_cf(),
                                 charfn.make_jratio_cf(1.0), charfn.laplace_cf()], ids=lambda p: p.label)
def test_bochner_passes_for_cfs(phi):
    rep = verify.bochner_pd_check(phi, GRID)
    assert rep.pass_
    assert rep.as_dict()["n"] == 16


def test_bochner_fails_for_non_cfs():
    # exp(-t^4) has zero second moment at 0, so it is not a CF (Marcinkiewicz)
    assert not verify.bochner_pd_check(not_a_cf(), GRID).pass_
    bump = charfn.CharFn(lambda t: 1.0 + t * t, label="1+t^2")
    assert not verify.bochner_pd_check(bump, GRID).pass_


def test_grid_validation():
    with pytest.raises(ValueError):
        verify.bochner_pd_check(charfn.unit_cf(), np.linspace(-1, 1, 65))
    with pytest.raises(ValueError):
        verify.bochner_pd_check(charfn.unit_cf(), [0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        verify.bochner_pd_check(charfn.unit_cf(), [])


@pytest.mark.parametrize("phi", [charfn.make_B(0.5), charfn.make_B(1.0), charfn.power_product(1.0, 2.0, 1.0),
                                 charfn.t_over_sinh_cf(), charfn.laplace_cf()], ids=lambda p: p.label)
def test_selfdecomposable(phi):
    assert verify.reports_pass(verify.selfdecomposability_check(phi, [0.2, 0.5, 0.8], GRID))


def test_selfdecomposability_rejects_vanishing():
    with pytest.raises(DomainError):
        verify.selfdecomposability_check(charfn.sinc_cf(), [0.5], GRID)
    with pytest.raises(DomainError):
        verify.selfdecomposability_check(charfn.make_B(1.0), [1.0], GRID)


@pytest.mark.parametrize("psi", [charfn.make_b(0.5), charfn.make_b(1.0), charfn.power_product(0.5, 1.0, 3.0),
                                 charfn.make_B(1.0)], ids=lambda p: p.label)
def test_s_selfdecomposable(psi):
    assert verify.reports_pass(verify.s_selfdecomposability_check(psi, [0.2, 0.5, 0.8], GRID))


def test_s_selfdecomposability_rejects_non_positive():
    with pytest.raises(DomainError):
        verify.s_selfdecomposability_check(charfn.cos_cf(), [0.5], GRID)


def test_non_id_witness():
    assert verify.non_id_witness(charfn.sinc_cf(), (0.1, 5.0)) == pytest.approx(math.pi, abs=1e-12)
    for nu in (0.0, 0.5, 1.0, 2.5):
        z1 = bessel.find_zeros(nu, 1).zeros[0]
        assert verify.non_id_witness(charfn.make_jratio_cf(nu), (0.1, 10.0)) == pytest.approx(z1, abs=1e-10)
    assert verify.non_id_witness(charfn.make_B(1.0), (0.0, 10.0)) is None
    with pytest.raises(ValueError):
        verify.non_id_witness(charfn.make_B(1.0), (2.0, 1.0))


def test_ecf_compare_detects_wrong_law():
    b = sampler.batch_laplace(50_000, 1)
    assert verify.ecf_compare(b, charfn.laplace_cf(), [0.5, 1.0, 2.0]).pass_
    bad = verify.ecf_compare(b, charfn.gaussian_cf(), [0.5, 1.0, 2.0])
    assert not bad.pass_
    assert bad.max_deviation > 10
    d = bad.as_dict()
    assert len(d["deviations"]) == 3 and d["pass"] is False


def test_ecf_compare_zero_se():
    rep = verify.ecf_compare(np.zeros(10), charfn.unit_cf(), [0.0, 1.0])
    assert rep.pass_ and rep.max_deviation == 0.0
