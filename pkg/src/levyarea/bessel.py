"""Bessel functions I_nu and J_nu of real order, their zeros and half-integer forms.

Evaluation strategy
-------------------
Both functions are reduced to the confluent limit function

    0F1(; b; x) = sum_k x**k / (k! (b)_k),

via ``I_nu(t) = (t/2)**nu / Gamma(nu+1) * 0F1(; nu+1; t**2/4)`` and the same
expression with ``-t**2/4`` for ``J_nu``.  The I-series has positive terms and
is accurate to a few ulps for ``|t| <= 30``; beyond that a ``RangeError`` is
raised.  The J-series cancels, so for ``|t| > 8`` ``J_nu`` is computed by
Miller's backward recurrence normalised with the Neumann series

    (x/2)**nu = sum_k (nu + 2k) Gamma(nu + k) / k! * J_{nu+2k}(x).

Both functions are returned at ``|t|``; this is the convention every
characteristic function in the package relies on.

Zeros and tail corrections
--------------------------
Positive zeros of ``z**-nu J_nu(z)`` are bracketed on a pi/4 scan starting at
the lower bound ``2 sqrt(nu+1)`` (every zero exceeds it, since the Rayleigh
sum ``sum z_k**-2 = 1/(4(nu+1))`` has only positive terms), bisected to width
1e-6 and polished by Newton with ``J_nu' = (nu/z) J_nu - J_{nu+1}``.

Sums ``sum_k f(z_k)`` over all zeros are split as

    sum_{k <= K} f(z_k)  +  sum_{K < k <= K+M} f(mcmahon(k))
                         +  int_{K+M+1/2}^inf f(pi (x + nu/2 - 1/4)) dx,

the middle block using the four-term McMahon expansion (error O(beta**-7))
and the remainder a midpoint integral comparison with the leading asymptote.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, RangeError

I_MAX_ARG = 30.0
J_MAX_ARG = 2000.0
J_SERIES_MAX = 8.0
MAX_TERMS = 200

_RESCALE = 1e200


def check_order(nu, lower=-1.0, what="nu"):
    """Validate a real order, requiring ``nu > lower``; return it as float."""
    try:
        nu = float(nu)
    except (TypeError, ValueError):
        raise DomainError(f"{what} must be a real number, got {nu!r}") from None
    if not math.isfinite(nu) or nu <= lower:
        raise DomainError(f"{what} must be finite and > {lower:g}, got {nu:g}")
    return nu


def _as_output(arr, scalar):
    return float(arr) if scalar else arr


def hyp0f1(b, x):
    """Series for 0F1(; b; x), vectorised over ``x``; requires ``b > 0``.

    For ``x < 0`` the terms alternate and the absolute error grows like
    ``eps * exp(2 sqrt(-x))``; J evaluation only uses it for ``x >= -16``.
    """
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    peak = np.ones_like(x)
    past_peak = math.sqrt(float(np.max(np.abs(x), initial=0.0)))
    for k in range(1, MAX_TERMS + 1):
        term = term * x / (k * (b + k - 1.0))
        total = total + term
        a = np.abs(term)
        peak = np.maximum(peak, a)
        if k > past_peak and np.all((a <= 1e-17 * np.abs(total)) | (a <= 1e-19 * peak)):
            return total
    raise ConvergenceError(f"0F1 series with b={b:g} did not converge in {MAX_TERMS} terms")


def _check_arg(t, cap, name):
    t = np.abs(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(t)):
        raise DomainError(f"{name}: argument must be finite")
    if np.any(t > cap):
        raise RangeError(f"{name}: |t| = {float(np.max(t)):g} exceeds the supported cap {cap:g}")
    return t


def eval_I(nu, t):
    """Modified Bessel function I_nu(|t|) for ``nu > -1`` and ``|t| <= 30``.

    At ``t = 0`` returns 1 for ``nu = 0``, 0 for ``nu > 0`` and ``inf`` for
    ``-1 < nu < 0``.
    """
    nu = check_order(nu)
    scalar = np.ndim(t) == 0
    t = _check_arg(t, I_MAX_ARG, "eval_I")
    with np.errstate(divide="ignore"):
        pref = np.power(t / 2.0, nu) / math.gamma(nu + 1.0)
    out = pref * hyp0f1(nu + 1.0, t * t / 4.0)
    return _as_output(out, scalar)


def _j_series(nu, x):
    with np.errstate(divide="ignore"):
        pref = np.power(x / 2.0, nu) / math.gamma(nu + 1.0)
    return pref * hyp0f1(nu + 1.0, -x * x / 4.0)


def _neumann_weights(nu, kmax):
    k = np.arange(kmax + 1, dtype=float)
    w = np.empty(kmax + 1)
    w[0] = math.gamma(nu + 1.0)
    if kmax >= 1:
        lg = np.array([math.lgamma(nu + kk) - math.lgamma(kk + 1.0) for kk in k[1:]])
        w[1:] = (nu + 2.0 * k[1:]) * np.exp(lg)
    return w


def _j_miller(nu, x):
    """(J_nu(x), J_{nu+1}(x)) for an array of ``x > 0`` by backward recurrence."""
    xmax = float(np.max(x))
    n_start = int(xmax + 30.0 + 12.0 * xmax ** (1.0 / 3.0))
    w = _neumann_weights(nu, n_start // 2 + 1)
    f_next = np.zeros_like(x)
    f_cur = np.full_like(x, 1e-30)
    f1 = np.zeros_like(x)
    s = np.zeros_like(x)
    if n_start % 2 == 0:
        s += w[n_start // 2] * f_cur
    for n in range(n_start, 0, -1):
        f_prev = (2.0 * (nu + n) / x) * f_cur - f_next
        m = n - 1
        if m % 2 == 0:
            s += w[m // 2] * f_prev
        if m == 1:
            f1 = f_prev.copy()
        f_next, f_cur = f_cur, f_prev
        big = np.abs(f_cur) > _RESCALE
        if np.any(big):
            f_cur[big] /= _RESCALE
            f_next[big] /= _RESCALE
            s[big] /= _RESCALE
            f1[big] /= _RESCALE
    norm = np.power(x / 2.0, nu) / s
    return f_cur * norm, f1 * norm


def _j_pair(nu, x):
    """(J_nu, J_{nu+1}) at positive ``x`` (array), series for small arguments."""
    x = np.asarray(x, dtype=float)
    j0 = np.empty_like(x)
    j1 = np.empty_like(x)
    small = x <= J_SERIES_MAX
    if np.any(small):
        xs = x[small]
        j0[small] = _j_series(nu, xs)
        j1[small] = _j_series(nu + 1.0, xs)
    if np.any(~small):
        a, b = _j_miller(nu, x[~small])
        j0[~small] = a
        j1[~small] = b
    return j0, j1


def eval_J(nu, t):
    """Bessel function J_nu(|t|) for ``nu > -1`` and ``|t| <= 2000``."""
    nu = check_order(nu)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(_check_arg(t, J_MAX_ARG, "eval_J"))
    out = np.empty_like(t)
    zero = t == 0.0
    if np.any(zero):
        out[zero] = 1.0 if nu == 0 else (0.0 if nu > 0 else np.inf)
    if np.any(~zero):
        out[~zero] = _j_pair(nu, t[~zero])[0]
    return float(out[0]) if scalar else out


def scaled_J(nu, t):
    """``Gamma(nu+1) J_nu(t) / (t/2)**nu``, an entire even function equal to 1 at 0."""
    nu = check_order(nu)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(_check_arg(t, J_MAX_ARG, "scaled_J"))
    out = np.empty_like(t)
    small = t <= J_SERIES_MAX
    if np.any(small):
        out[small] = hyp0f1(nu + 1.0, -t[small] ** 2 / 4.0)
    if np.any(~small):
        tl = t[~small]
        out[~small] = math.gamma(nu + 1.0) * _j_miller(nu, tl)[0] / np.power(tl / 2.0, nu)
    return float(out[0]) if scalar else out


def scaled_I(nu, t):
    """``Gamma(nu+1) I_nu(t) / (t/2)**nu``; equals 1 at 0 and is >= 1."""
    nu = check_order(nu)
    scalar = np.ndim(t) == 0
    t = _check_arg(t, I_MAX_ARG, "scaled_I")
    return _as_output(hyp0f1(nu + 1.0, t * t / 4.0), scalar)


def ratio_I(nu, t):
    """I_{nu+1}(|t|) / I_nu(|t|), with the removable point t = 0 filled by 0."""
    nu = check_order(nu)
    scalar = np.ndim(t) == 0
    t = _check_arg(t, I_MAX_ARG, "ratio_I")
    x = t * t / 4.0
    out = (t / 2.0) / (nu + 1.0) * hyp0f1(nu + 2.0, x) / hyp0f1(nu + 1.0, x)
    return _as_output(out, scalar)


# ---------------------------------------------------------------------------
# Half-integer orders
# ---------------------------------------------------------------------------

def a_coeff(k, n):
    """a_{k,n} = (-1)^k (n+k)! / (2^k k! (n-k)!) as an exact fraction."""
    if not 0 <= k <= n:
        raise DomainError(f"a_coeff needs 0 <= k <= n, got k={k}, n={n}")
    return Fraction((-1) ** k * math.factorial(n + k), 2**k * math.factorial(k) * math.factorial(n - k))


@lru_cache(maxsize=None)
def half_integer_polys(n):
    """Coefficients (sinh part, cosh part) of the polynomial form, keyed by power of z.

    ``I_{n+1/2}(z) = sqrt(2/pi) z^-(n+1/2) [P(z) sinh z + Q(z) cosh z]``.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    p, q = {}, {}
    for k in range(n + 1):
        target = p if (n - k) % 2 == 0 else q
        target[n - k] = a_coeff(k, n)
    return p, q


@lru_cache(maxsize=None)
def sinhc_operator_coeffs(n):
    """Laurent coefficients of ``(d/(z dz))**n (sinh z / z) = P sinh z + Q cosh z``.

    Each application of ``f -> f'/z`` maps ``(P, Q)`` to ``((P' + Q)/z, (Q' + P)/z)``.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    p, q = {-1: Fraction(1)}, {}
    for _ in range(n):
        new_p, new_q = {}, {}
        for src, other, dst in ((p, q, new_p), (q, p, new_q)):
            for power, c in src.items():
                if power != 0:
                    dst[power - 2] = dst.get(power - 2, 0) + c * power
            for power, c in other.items():
                dst[power - 1] = dst.get(power - 1, 0) + c
        p = {k: v for k, v in new_p.items() if v != 0}
        q = {k: v for k, v in new_q.items() if v != 0}
    return p, q


def _mp_poly(coeffs, z):
    return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z**power for power, c in coeffs.items())


def _working_dps(n, t):
    # Cancellation in the sinh/cosh combinations costs about (2n+1) log10(1/|t|) digits.
    return 30 + int((2 * n + 1) * max(0.0, -math.log10(abs(t)))) + 5


def half_integer_I(n, t, form="polynomial"):
    """I_{n+1/2}(|t|) from the closed sinh/cosh forms, in extended precision.

    ``form="polynomial"`` uses the a_{k,n} polynomial coefficients,
    ``form="operator"`` the n-fold operator ``d/(z dz)`` applied to sinh z / z.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    t = abs(float(t))
    if t == 0.0:
        return 0.0
    if t > I_MAX_ARG:
        raise RangeError(f"half_integer_I: |t| = {t:g} exceeds {I_MAX_ARG:g}")
    with mpmath.workdps(_working_dps(n, t)):
        z = mpmath.mpf(t)
        if form == "polynomial":
            p, q = half_integer_polys(n)
            val = mpmath.sqrt(2 / mpmath.pi) * z ** -(n + mpmath.mpf(1) / 2) * (
                _mp_poly(p, z) * mpmath.sinh(z) + _mp_poly(q, z) * mpmath.cosh(z)
            )
        elif form == "operator":
            p, q = sinhc_operator_coeffs(n)
            val = z ** (n + mpmath.mpf(1) / 2) * mpmath.sqrt(2 / mpmath.pi) * (
                _mp_poly(p, z) * mpmath.sinh(z) + _mp_poly(q, z) * mpmath.cosh(z)
            )
        else:
            raise ValueError(f"unknown form {form!r}")
        return float(val)


# ---------------------------------------------------------------------------
# Zeros
# ---------------------------------------------------------------------------

def mcmahon(nu, k):
    """Four-term McMahon approximation to the k-th positive zero of J_nu."""
    k = np.asarray(k, dtype=float)
    mu = 4.0 * nu * nu
    beta = (k + nu / 2.0 - 0.25) * math.pi
    b8 = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu**2 - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


@dataclass(frozen=True)
class McMahonTail:
    """Asymptotic model of the zeros beyond an explicit table."""

    nu: float
    start: int
    explicit: int = 20000

    def zeros(self, k):
        return mcmahon(self.nu, k)

    def sum(self, f: Callable):
        """Approximate ``sum_{k > start} f(z_k)`` for a vectorised ``f``."""
        k = np.arange(self.start + 1, self.start + self.explicit + 1)
        block = float(np.sum(f(mcmahon(self.nu, k))))
        shift = self.nu / 2.0 - 0.25
        lo = self.start + self.explicit + 0.5
        rest, _ = integrate.quad(lambda x: float(f(math.pi * (x + shift))), lo, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)
        return block + rest


@dataclass(frozen=True)
class ZeroTable:
    """First K positive zeros of ``z**-nu J_nu(z)`` plus a McMahon tail model."""

    nu: float
    zeros: np.ndarray = field(repr=False)
    tail: McMahonTail = field(repr=False)

    @property
    def K(self):
        return len(self.zeros)

    def sum(self, f: Callable, tail=True):
        """``sum_k f(z_k)`` over all zeros (or only the tabulated ones)."""
        head = float(np.sum(f(self.zeros)))
        return head + self.tail.sum(f) if tail else head

    def rayleigh_sum(self, tail=True):
        return self.sum(lambda z: z**-2.0, tail=tail)

    def residuals(self):
        """|z^-nu J_nu(z)| at each tabulated zero."""
        j0, _ = _j_pair(self.nu, self.zeros)
        return np.abs(j0 * np.power(self.zeros, -self.nu))


def _scan(nu, lo, hi):
    grid = np.arange(lo, hi, math.pi / 4.0)
    return grid, _j_pair(nu, grid)[0]


def find_zeros(nu, K):
    """First K positive zeros of ``z**-nu J_nu(z)`` to absolute accuracy 1e-10."""
    nu = check_order(nu)
    K = int(K)
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    return _find_zeros_cached(nu, K)


@lru_cache(maxsize=64)
def _find_zeros_cached(nu, K):
    lo = 2.0 * math.sqrt(nu + 1.0) * (1.0 - 1e-9)
    hi = max(float(mcmahon(nu, K)), lo) + 4.0 * math.pi
    budget = hi + 20.0 * math.pi + 2.0 * abs(nu)
    while True:
        grid, vals = _scan(nu, lo, hi)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
        if len(idx) >= K or hi >= budget:
            break
        hi += 4.0 * math.pi
    if len(idx) < K:
        raise ConvergenceError(
            f"found {len(idx)} of {K} sign changes of J_{nu:g} on [{lo:.4g}, {hi:.4g}] "
            f"with step pi/4; last value {vals[-1]:.3g}"
        )
    idx = idx[:K]
    a, b = grid[idx].copy(), grid[idx + 1].copy()
    fa = vals[idx].copy()
    while np.max(b - a) > 1e-6:
        m = 0.5 * (a + b)
        fm = _j_pair(nu, m)[0]
        same = np.sign(fm) == np.sign(fa)
        a = np.where(same, m, a)
        fa = np.where(same, fm, fa)
        b = np.where(same, b, m)
    z = 0.5 * (a + b)
    for _ in range(10):
        j0, j1 = _j_pair(nu, z)
        dj = nu / z * j0 - j1
        step = j0 / dj
        z = z - step
        if np.max(np.abs(step) / z) < 1e-15:
            break
    if np.any((z < a - 1e-6) | (z > b + 1e-6)):
        raise ConvergenceError(f"Newton polish left its bracket for nu={nu:g}")
    zeros = np.array(z)
    if np.any(np.diff(zeros) <= 0):
        raise ConvergenceError(f"zeros of J_{nu:g} not strictly increasing")
    zeros.setflags(write=False)
    return ZeroTable(nu, zeros, McMahonTail(nu, K))
