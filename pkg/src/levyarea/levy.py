"""Levy spectral densities over Bessel zeros and the series identities they satisfy.

With ``z_k`` the positive zeros of ``z**-nu J_nu(z)``:

* ``m(x) = sum_k exp(-z_k |x|) / |x|`` is the Levy density of ``X_nu`` and
  ``log B_nu(t) = int_R (cos tx - 1) m(x) dx = -sum_k log(1 + t^2 / z_k^2)``.
* ``n(x) = sum_k z_k exp(-z_k |x|)`` is the Levy density of its background
  driving process, and ``m(x) = int_0^inf n(e^s x) e^s ds``.

Conventions.  The one-sided integral ``int_0^inf (1 - cos tx) z e^{-zx} dx``
equals ``t^2 / (z^2 + t^2)``; summing it over zeros gives
``t I_{nu+1}(t) / (2 I_nu(t))``.  The two-sided integral against ``n`` is
twice that and equals ``-log b_nu(t)``.  Both are exposed below.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import bessel
from .bessel import check_order
from .errors import ConvergenceError, DomainError, TruncationWarning

QUAD_LIMIT = 10_000


def _zeros(nu, K):
    return bessel.find_zeros(nu, K)


def _mcmahon_error(nu, k):
    # Size of the last retained McMahon correction, used as its error proxy.
    mu = 4.0 * nu * nu
    b8 = 8.0 * (np.asarray(k, dtype=float) + nu / 2.0 - 0.25) * math.pi
    return np.abs(32.0 * (mu - 1.0) * (83.0 * mu**2 - 982.0 * mu + 3779.0) / (15.0 * b8**5))


def _warn_if_coarse(nu, K, fprime, tol, what):
    k = np.arange(K + 1, K + 2001)
    est = float(np.sum(np.abs(fprime(bessel.mcmahon(nu, k))) * _mcmahon_error(nu, k)))
    if est > tol:
        warnings.warn(
            f"{what}: K={K} zeros leave an estimated tail-model error {est:.2e} > {tol:.0e}",
            TruncationWarning,
            stacklevel=3,
        )
    return est


def levy_exponent_B(nu, t, K=200, tol=1e-7):
    """``log B_nu(t)`` as ``-sum_k log(1 + t^2/z_k^2)`` over K zeros plus McMahon tail."""
    nu = check_order(nu)
    t = float(t)
    if t == 0.0:
        return 0.0
    zt = _zeros(nu, K)
    t2 = t * t

    def f(z):
        return np.log1p(t2 / (z * z))

    _warn_if_coarse(nu, K, lambda z: -2.0 * t2 / (z * (z * z + t2)), tol, "levy_exponent_B")
    return -zt.sum(f)


def ratio_series(nu, t, K=200):
    """``sum_k t^2 / (z_k^2 + t^2)`` with tail, the one-sided BDLP integral."""
    nu = check_order(nu)
    t2 = float(t) ** 2
    if t2 == 0.0:
        return 0.0
    return _zeros(nu, K).sum(lambda z: t2 / (z * z + t2))


def bdlp_exponent(nu, t, K=200):
    """``log b_nu(t) = int_R (cos tx - 1) n(x) dx = -2 sum_k t^2/(z_k^2 + t^2)``."""
    return -2.0 * ratio_series(nu, t, K)


def verify_ratio_series(nu, t, K=200):
    """Residual ``|sum_k t^2/(z_k^2+t^2) - t I_{nu+1}(t) / (2 I_nu(t))|``."""
    t = abs(float(t))
    if t == 0.0:
        return 0.0
    return abs(ratio_series(nu, t, K) - t * bessel.ratio_I(nu, t) / 2.0)


@dataclass(frozen=True)
class SpectralDensity:
    """Levy density on R \\ {0} as an exponential series over the tabulated zeros.

    ``kind="M"``: ``sum_k exp(-z_k|x|)/|x|``; ``kind="N"``: ``sum_k z_k exp(-z_k|x|)``.
    Only the K explicit zeros are used; there is no tail model for densities.
    """

    kind: str
    zeros: bessel.ZeroTable = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("M", "N"):
            raise ValueError(f"kind must be 'M' or 'N', got {self.kind!r}")

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        ax = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
        if np.any(ax == 0.0):
            raise DomainError("spectral densities are defined on R \\ {0}")
        z = np.asarray(self.zeros.zeros)
        e = np.exp(-np.outer(ax, z))
        out = e.sum(axis=1) / ax if self.kind == "M" else e @ z
        return float(out[0]) if scalar else out

    def exponent(self, t):
        """``int_R (cos tx - 1) density(x) dx`` by adaptive quadrature (truncated series)."""
        t = float(t)
        if t == 0.0:
            return 0.0
        g = lambda x: (math.cos(t * x) - 1.0) * self(x)
        upper = 800.0 / float(self.zeros.zeros[0])
        val, _ = integrate.quad(g, 0.0, upper, epsabs=1e-12, epsrel=1e-12, limit=QUAD_LIMIT)
        return 2.0 * val

    def levy_moment(self):
        """Partial sum of ``int x^2/(1+x^2) dM`` and a bound on the omitted tail."""
        if self.kind != "M":
            raise ValueError("levy_moment is defined for kind 'M'")
        z = np.asarray(self.zeros.zeros)
        terms = [
            2.0 * integrate.quad(lambda s, a=a: s / (a * a + s * s) * math.exp(-s), 0.0, np.inf, epsabs=1e-13)[0]
            for a in z
        ]
        # each term is <= 2/z^2, and sum_k z_k^-2 = 1/(4(nu+1)) exactly
        nu = self.zeros.nu
        bound = 2.0 * max(0.0, 1.0 / (4.0 * (nu + 1.0)) - float(np.sum(z**-2.0)))
        return float(np.sum(terms)), bound


def spectral_density(nu, kind="M", K=50):
    return SpectralDensity(kind, _zeros(check_order(nu), K))


def verify_M_from_N(nu, x, K=50):
    """Residual ``|m(x) - int_0^inf n(e^s x) e^s ds|`` with both sides on K zeros."""
    nu = check_order(nu)
    x = float(x)
    if x == 0.0:
        raise DomainError("x must be nonzero")
    zt = _zeros(nu, K)
    m = SpectralDensity("M", zt)
    n = SpectralDensity("N", zt)
    ax = abs(x)
    upper = math.log(800.0 / (float(zt.zeros[0]) * ax)) if float(zt.zeros[0]) * ax < 800.0 else 0.0
    rhs, _ = integrate.quad(lambda s: n(math.exp(s) * x) * math.exp(s), 0.0, upper, epsabs=1e-13, epsrel=1e-13, limit=QUAD_LIMIT)
    return abs(m(x) - rhs)


# ---------------------------------------------------------------------------
# Logarithmic moment conditions
# ---------------------------------------------------------------------------

def _quad(f, epsrel):
    val, err = integrate.quad(f, 0.0, np.inf, epsabs=0.0, epsrel=epsrel, limit=QUAD_LIMIT)
    if not math.isfinite(val):
        raise ConvergenceError("quadrature returned a non-finite value")
    return val


def log_moment_term1(a, epsrel=1e-10):
    """``a int_{|x|>1} log|x| exp(-a|x|) dx``, written as ``2 e^-a int_0^inf log(1+s/a) e^-s ds``."""
    return 2.0 * math.exp(-a) * _quad(lambda s: math.log1p(s / a) * math.exp(-s), epsrel)


def log_moment_term2(a, epsrel=1e-10):
    """``a int_R log(1+x^2) exp(-a|x|) dx``, written as ``2 int_0^inf log(1+s^2/a^2) e^-s ds``."""
    return 2.0 * _quad(lambda s: math.log1p((s / a) ** 2) * math.exp(-s), epsrel)


@dataclass
class LogMomentSums:
    nu: float
    K: int
    S1: float
    S2: float
    terms1: np.ndarray = field(repr=False)
    terms2: np.ndarray = field(repr=False)
    tail_bound1: float = 0.0
    tail_bound2: float = 0.0

    def __iter__(self):
        return iter((self.S1, self.S2))

    def increment(self, K1, K2):
        """``(S(K2) - S(K1))`` for both sums, summed term by term (no cancellation)."""
        if not 0 <= K1 <= K2 <= self.K:
            raise ValueError(f"need 0 <= K1 <= K2 <= {self.K}")
        return float(np.sum(self.terms1[K1:K2])), float(np.sum(self.terms2[K1:K2]))


def log_moment_sums(nu, K, epsrel=1e-10):
    """Partial sums of both logarithmic-moment series over the first K zeros.

    Tail bounds: term1 = 2 E_1(z) <= 2 e^-z / z, and consecutive zeros are at
    least 2 apart, so ``sum_{k>K} <= 2 e^{-z_{K+1}} / (z_{K+1} (1 - e^-2))``.
    term2 <= 4 / z^2 and the Rayleigh identity bounds its tail by
    ``4 (1/(4(nu+1)) - sum_{k<=K} z_k^-2)``.
    """
    nu = check_order(nu)
    K = int(K)
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    if K == 0:
        return LogMomentSums(nu, 0, 0.0, 0.0, np.zeros(0), np.zeros(0), math.inf, math.inf)
    zt = _zeros(nu, K + 1)
    z = np.asarray(zt.zeros)
    t1 = np.array([log_moment_term1(a, epsrel) for a in z[:K]])
    t2 = np.array([log_moment_term2(a, epsrel) for a in z[:K]])
    znext = float(z[K])
    bound1 = 2.0 * math.exp(-znext) / (znext * (1.0 - math.exp(-2.0)))
    bound2 = 4.0 * max(0.0, 1.0 / (4.0 * (nu + 1.0)) - float(np.sum(z[:K] ** -2.0)))
    return LogMomentSums(nu, K, float(t1.sum()), float(t2.sum()), t1, t2, bound1, bound2)
