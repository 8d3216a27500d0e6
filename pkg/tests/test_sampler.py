from __future__ import annotations

import warnings

import numpy as np
import pytest
from scipy import stats

from levyarea import bessel, charfn, sampler, verify
from levyarea.errors import DomainError, TruncationWarning


def test_stream_determinism():
    a = sampler.SeededStream(42).rng.random(5)
    b = sampler.SeededStream(42).rng.random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, sampler.SeededStream(43).rng.random(5))


def test_spawn_is_deterministic_and_independent():
    k1 = [s.rng.random(3) for s in sampler.SeededStream(5).spawn(3)]
    k2 = [s.rng.random(3) for s in sampler.SeededStream(5).spawn(3)]
    for x, y in zip(k1, k2):
        np.testing.assert_array_equal(x, y)
    assert not np.array_equal(k1[0], k1[1])


def test_laplace_distribution():
    x = sampler.sample_laplace(sampler.SeededStream(1), 50_000)
    assert stats.kstest(x, stats.laplace.cdf).pvalue > 1e-3
    assert np.all(np.isfinite(x))


@pytest.mark.parametrize("nu", [-0.25, 0.0, 0.5, 2.0])
def test_f_is_scaled_beta(nu):
    x = sampler.sample_f(nu, sampler.SeededStream(2), 50_000)
    assert np.all(np.abs(x) <= 1)
    ref = stats.beta(nu + 0.5, nu + 0.5, loc=-1, scale=2)
    assert stats.kstest(x, ref.cdf).pvalue > 1e-3


def test_scalar_draws():
    s = sampler.SeededStream(0)
    assert isinstance(sampler.sample_f(1.0, s), float)
    assert isinstance(sampler.sample_X(1.0, 10, s), float)


def test_tail_variance():
    zt = bessel.find_zeros(1.0, 50)
    v = sampler.tail_variance(1.0, zt.zeros)
    z = np.asarray(bessel.find_zeros(1.0, 2000).zeros)
    # remainder beyond 2000 from the leading asymptote z_k ~ pi (k + nu/2 - 1/4)
    rest = 1.0 / (np.pi**2 * (2000 + 0.5 + 0.25))
    assert v == pytest.approx(2 * (np.sum(z[50:] ** -2.0) + rest), rel=1e-6)


@pytest.mark.parametrize("compensate", [True, False])
def test_X_variance(compensate):
    nu, K, N = 1.0, 50, 200_000
    x = sampler.sample_X(nu, K, sampler.SeededStream(3), compensate, size=N)
    target = 1 / (2 * (nu + 1))
    if not compensate:
        target -= sampler.tail_variance(nu, bessel.find_zeros(nu, K).zeros)
    se = np.sqrt(np.var(x**2) / N)
    assert abs(np.var(x) - target) < 4 * se


def test_X_ecf():
    b = sampler.batch_X(0.5, 100, 50_000, seed=9)
    rep = verify.ecf_compare(b, charfn.make_B(0.5), [0.5, 1.0, 2.0])
    assert rep.pass_


def test_batches_are_reproducible():
    a = sampler.batch_X(0.0, 20, 1000, seed=11)
    b = sampler.batch_X(0.0, 20, 1000, seed=11)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.meta["algorithm"] == "numpy.PCG64"
    assert a.meta["K"] == 20 and a.meta["tail_compensation"]
    np.testing.assert_array_equal(sampler.batch_f(1.0, 100, 3).values, sampler.batch_f(1.0, 100, 3).values)
    assert len(sampler.batch_laplace(17, 0)) == 17


def test_chunking_only_changes_rounding(monkeypatch):
    # the draws are identical; only the matrix-product summation order differs
    x = sampler.sample_X(0.0, 100, sampler.SeededStream(4), size=5000)
    monkeypatch.setattr(sampler, "_CHUNK", 1000)
    y = sampler.sample_X(0.0, 100, sampler.SeededStream(4), size=5000)
    np.testing.assert_allclose(x, y, rtol=0, atol=1e-13)


def test_bad_arguments():
    with pytest.raises(DomainError):
        sampler.sample_X(0.0, 0, sampler.SeededStream(0))
    with pytest.raises(DomainError):
        sampler.sample_f(-0.5, sampler.SeededStream(0))
    with pytest.raises(ValueError):
        sampler.SampleBatch([])


def test_negative_tail_variance_is_clamped(monkeypatch):
    monkeypatch.setattr(sampler, "tail_variance", lambda nu, z: -1e-3)
    with pytest.warns(TruncationWarning):
        sampler.sample_X(0.0, 5, sampler.SeededStream(0), size=10)
