"""Characteristic functions built from Bessel functions, and transforms between them.

``B_nu(t) = t**nu / (2**nu Gamma(nu+1) I_nu(t))`` is evaluated as
``1 / 0F1(; nu+1; t**2/4)`` so that ``t = 0`` needs no special casing, and
``b_nu(t) = exp(-|t| I_{nu+1}(|t|) / I_nu(|t|))``.

Values on the imaginary axis, needed for van Dantzig pairs, use the rotation
``I_nu(i t) = exp(i pi nu / 2) J_nu(t)`` in real arithmetic; the ``(i t)**nu``
prefactors cancel, so ``B_nu(i t) = 1 / (Gamma(nu+1) J_nu(t) / (t/2)**nu)``.

Class tags (``ID``, ``L``, ``U``, ``nonID``) record what is known analytically
about each function.  They are not checked at runtime; the ``verify`` module
supplies numerical evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from . import bessel
from .bessel import check_order
from .errors import DomainError, RangeError

TAGS = frozenset({"ID", "L", "U", "nonID"})
INF = math.inf


@dataclass(frozen=True)
class CharFn:
    """An evaluable characteristic function with class metadata.

    ``strip = (a, b)`` means the function is analytic for ``-a < Im z < b``.
    ``imag_evaluator`` maps real ``s`` to ``phi(i s)`` and is only called for
    ``s`` inside the strip.  ``zeros`` lists known nonnegative real zeros.
    """

    evaluator: Callable = field(repr=False)
    class_tags: frozenset = frozenset()
    strip: tuple = (0.0, 0.0)
    label: str = ""
    imag_evaluator: Optional[Callable] = field(default=None, repr=False)
    zeros: tuple = ()

    def __post_init__(self):
        tags = frozenset(self.class_tags)
        unknown = tags - TAGS
        if unknown:
            raise ValueError(f"unknown class tags {sorted(unknown)}")
        if "nonID" in tags and tags & {"ID", "L", "U"}:
            raise ValueError("nonID cannot be combined with ID, L or U")
        object.__setattr__(self, "class_tags", tags)

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        out = np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=complex)
        return complex(out) if scalar else out

    def at_imag(self, s):
        """phi(i s) for real ``s`` strictly inside the analytic strip."""
        scalar = np.ndim(s) == 0
        s = np.asarray(s, dtype=float)
        below, above = self.strip
        if np.any(s >= above) or np.any(-s >= below):
            raise DomainError(f"{self.label}: imaginary argument outside strip (-{below:g}, {above:g})")
        if self.imag_evaluator is None:
            raise DomainError(f"{self.label}: no evaluator on the imaginary axis")
        out = np.asarray(self.imag_evaluator(s), dtype=complex)
        return complex(out) if scalar else out

    def is_real_positive(self, grid, rtol=1e-12):
        v = self(np.asarray(grid, dtype=float))
        return bool(np.all(np.abs(v.imag) <= rtol * np.abs(v.real)) and np.all(v.real > 0))


def _first_zero(nu):
    return float(bessel.find_zeros(nu, 1).zeros[0])


def make_B(nu):
    """Class L characteristic function ``t**nu / (2**nu Gamma(nu+1) I_nu(t))``."""
    nu = check_order(nu)
    z1 = _first_zero(nu)
    return CharFn(
        evaluator=lambda t: 1.0 / bessel.scaled_I(nu, t),
        class_tags={"ID", "L", "U"},
        strip=(z1, z1),
        label=f"B_{nu:g}",
        imag_evaluator=lambda s: 1.0 / bessel.scaled_J(nu, s),
    )


def _b_imag(nu, s):
    s = np.abs(np.asarray(s, dtype=float))
    safe = np.where(s == 0.0, 1.0, s)
    j0, j1 = bessel._j_pair(nu, safe)
    return np.where(s == 0.0, 1.0, np.exp(safe * j1 / j0))


def make_b(nu):
    """Background driving characteristic function ``exp(-|t| I_{nu+1}(|t|) / I_nu(|t|))``."""
    nu = check_order(nu)
    z1 = _first_zero(nu)
    return CharFn(
        evaluator=lambda t: np.exp(-np.abs(t) * bessel.ratio_I(nu, t)),
        class_tags={"ID", "U"},
        strip=(z1, z1),
        label=f"b_{nu:g}",
        imag_evaluator=lambda s: _b_imag(nu, s),
    )


def power_product(nu, alpha, beta):
    """``B_nu**alpha * b_nu**beta``; class U, and class L when ``beta <= alpha``."""
    nu = check_order(nu)
    alpha, beta = float(alpha), float(beta)
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"exponents must be positive, got alpha={alpha:g}, beta={beta:g}")
    B, b = make_B(nu), make_b(nu)
    tags = {"ID", "U"} | ({"L"} if beta <= alpha else set())

    def ev(t):
        return np.exp(-alpha * np.log(bessel.scaled_I(nu, t)) - beta * np.abs(t) * bessel.ratio_I(nu, t))

    return CharFn(
        evaluator=ev,
        class_tags=tags,
        strip=B.strip,
        label=f"B_{nu:g}^{alpha:g} b_{nu:g}^{beta:g}",
        imag_evaluator=lambda s: B.imag_evaluator(s).real ** alpha * b.imag_evaluator(s).real ** beta,
    )


def _zeros_below(nu, cap=bessel.I_MAX_ARG):
    zt = bessel.find_zeros(nu, max(1, int(cap / math.pi) + 2))
    return tuple(float(z) for z in zt.zeros if z <= cap)


def make_jratio_cf(nu):
    """``Gamma(nu+1) J_nu(t) / (t/2)**nu``, the CF of ``f_density(nu, .)``; not ID."""
    nu = check_order(nu, lower=-0.5)
    return CharFn(
        evaluator=lambda t: bessel.scaled_J(nu, t),
        class_tags={"nonID"},
        strip=(INF, INF),
        label=f"jratio_{nu:g}",
        imag_evaluator=lambda s: bessel.scaled_I(nu, s),
        zeros=_zeros_below(nu),
    )


def make_jiratio_cf(nu):
    """Self-reciprocal van Dantzig characteristic function ``J_nu(t) / I_nu(t)``."""
    nu = check_order(nu, lower=-0.5)
    z1 = _first_zero(nu)
    return CharFn(
        evaluator=lambda t: bessel.scaled_J(nu, t) / bessel.scaled_I(nu, t),
        class_tags={"nonID"},
        strip=(z1, z1),
        label=f"J_{nu:g}/I_{nu:g}",
        imag_evaluator=lambda s: bessel.scaled_I(nu, s) / bessel.scaled_J(nu, s),
        zeros=_zeros_below(nu),
    )


def f_density(nu, x):
    """Density ``Gamma(nu+1) / (Gamma(1/2) Gamma(nu+1/2)) (1-x^2)^(nu-1/2)`` on [-1, 1]."""
    nu = check_order(nu, lower=-0.5)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    c = math.exp(math.lgamma(nu + 1.0) - math.lgamma(0.5) - math.lgamma(nu + 0.5))
    inside = np.abs(x) < 1.0
    out = np.zeros_like(x)
    out[inside] = c * (1.0 - x[inside] ** 2) ** (nu - 0.5)
    if nu < 0.5:
        out[np.abs(x) == 1.0] = np.inf
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# Elementary characteristic functions
# ---------------------------------------------------------------------------

def unit_cf():
    return CharFn(lambda t: np.ones_like(t), {"ID", "L", "U"}, (INF, INF), "1", lambda s: np.ones_like(s))


def gaussian_cf(c=0.5):
    """``exp(-c t^2)``; self-reciprocal."""
    return CharFn(lambda t: np.exp(-c * t * t), {"ID", "L", "U"}, (INF, INF), f"exp(-{c:g}t^2)", lambda s: np.exp(c * s * s))


def laplace_cf():
    return CharFn(lambda t: 1.0 / (1.0 + t * t), {"ID", "L", "U"}, (1.0, 1.0), "1/(1+t^2)", lambda s: 1.0 / (1.0 - s * s))


def _sinc(t):
    return np.sinc(t / math.pi)


def _sinhc(s):
    s = np.asarray(s, dtype=float)
    safe = np.where(s == 0.0, 1.0, s)
    return np.where(s == 0.0, 1.0, np.sinh(safe) / safe)


def sinc_cf():
    """``sin t / t``, uniform law on [-1, 1]."""
    return CharFn(_sinc, {"nonID"}, (INF, INF), "sin t/t", _sinhc, zeros=tuple(k * math.pi for k in range(1, 10)))


def t_over_sinh_cf():
    return CharFn(lambda t: 1.0 / _sinhc(t), {"ID", "L", "U"}, (math.pi, math.pi), "t/sinh t", lambda s: 1.0 / _sinc(s))


def cos_cf():
    return CharFn(np.cos, {"nonID"}, (INF, INF), "cos t", np.cosh, zeros=tuple((k + 0.5) * math.pi for k in range(9)))


def sech_cf():
    return CharFn(lambda t: 1.0 / np.cosh(t), {"ID", "L", "U"}, (math.pi / 2, math.pi / 2), "1/cosh t", lambda s: 1.0 / np.cos(s))


# ---------------------------------------------------------------------------
# Background driving transforms
# ---------------------------------------------------------------------------

def _check_positive(phi, grid):
    grid = np.asarray(grid, dtype=float)
    v = phi(grid)
    if np.any(np.abs(v.imag) > 1e-12 * np.abs(v)) or np.any(v.real <= 0):
        bad = grid[(v.real <= 0) | (np.abs(v.imag) > 1e-12 * np.abs(v))]
        raise DomainError(f"{phi.label} is not real-positive on the grid (e.g. at t={bad[0]:g}); transform undefined")


def log_derivative(phi, t, richardson=False):
    """Central-difference ``d/dt log phi(t)`` with step ``1e-5 * max(1, |t|)``."""
    t = np.asarray(t, dtype=float)
    h = 1e-5 * np.maximum(1.0, np.abs(t))

    def d(step):
        return (np.log(phi(t + step).real) - np.log(phi(t - step).real)) / (2.0 * step)

    if richardson:
        return (4.0 * d(h / 2.0) - d(h)) / 3.0
    return d(h)


def bdlp_transform(phi, grid, richardson=False):
    """``psi(t) = exp(t (log phi)'(t))``, the BDLP characteristic function of a class L ``phi``."""
    _check_positive(phi, grid)

    def ev(t):
        out = np.exp(t * log_derivative(phi, t, richardson))
        return np.where(t == 0.0, 1.0, out)

    return CharFn(ev, {"ID"}, (0.0, 0.0), f"bdlp({phi.label})")


def s_bdlp_transform(phi, grid, richardson=False):
    """``psi(t) = exp((t log phi(t))')``, the BDLP of an s-selfdecomposable ``phi``."""
    _check_positive(phi, grid)

    def ev(t):
        out = np.exp(np.log(phi(t).real) + t * log_derivative(phi, t, richardson))
        return np.where(t == 0.0, 1.0, out)

    return CharFn(ev, {"ID"}, (0.0, 0.0), f"s_bdlp({phi.label})")


# ---------------------------------------------------------------------------
# van Dantzig pairs
# ---------------------------------------------------------------------------

@dataclass
class VanDantzigReport:
    grid: np.ndarray
    residuals: np.ndarray
    max_residual: float
    self_reciprocal: bool
    excluded: list = field(default_factory=list)
    exclusion_radius: float = 0.05

    def as_dict(self):
        return {
            "grid": [float(t) for t in self.grid],
            "residuals": [float(r) for r in self.residuals],
            "max_residual": float(self.max_residual),
            "self_reciprocal": self.self_reciprocal,
            "excluded": [float(t) for t in self.excluded],
            "exclusion_radius": self.exclusion_radius,
        }


def van_dantzig_check(phi, psi, grid: Sequence[float], exclusion_radius=0.05):
    """Residuals ``|psi(t) phi(i t) - 1|`` on ``grid``; ``psi="self"`` tests self-reciprocity.

    Grid points within ``exclusion_radius`` of a known real zero of ``psi`` are
    dropped and listed in the report.
    """
    self_rec = isinstance(psi, str) and psi == "self" or psi is phi
    if isinstance(psi, str):
        if psi != "self":
            raise ValueError(f"psi must be a CharFn or 'self', got {psi!r}")
        psi = phi
    grid = np.asarray(grid, dtype=float)
    zeros = np.array(psi.zeros, dtype=float)
    if len(zeros):
        near = np.min(np.abs(np.abs(grid)[:, None] - zeros[None, :]), axis=1) < exclusion_radius
    else:
        near = np.zeros(len(grid), dtype=bool)
    kept = grid[~near]
    res = np.abs(psi(kept) * phi.at_imag(kept) - 1.0)
    return VanDantzigReport(
        grid=kept,
        residuals=res,
        max_residual=float(np.max(res)) if len(res) else 0.0,
        self_reciprocal=self_rec,
        excluded=list(grid[near]),
        exclusion_radius=exclusion_radius,
    )


# ---------------------------------------------------------------------------
# Half-integer closed forms of B_{n+1/2}
# ---------------------------------------------------------------------------

def double_factorial(m):
    return math.prod(range(m, 0, -2)) if m > 0 else 1


def _closed(n, t, coeffs, power):
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    t = abs(float(t))
    if t == 0.0:
        return 1.0
    if t > bessel.I_MAX_ARG:
        raise RangeError(f"|t| = {t:g} beyond {bessel.I_MAX_ARG:g}")
    p, q = coeffs(n)
    with mpmath.workdps(bessel._working_dps(n, t)):
        z = mpmath.mpf(t)
        den = bessel._mp_poly(p, z) * mpmath.sinh(z) + bessel._mp_poly(q, z) * mpmath.cosh(z)
        return float(z**power / (double_factorial(2 * n + 1) * den))


def half_integer_B(n, t):
    """``B_{n+1/2}(t) = t^(2n+1) / ((2n+1)!! [P_n(t) sinh t + Q_n(t) cosh t])``."""
    return _closed(n, t, bessel.half_integer_polys, 2 * int(n) + 1)


def half_integer_B_operator(n, t):
    """``B_{n+1/2}(t) = 1 / ((2n+1)!! (d/(t dt))^n (sinh t / t))``."""
    return _closed(n, t, bessel.sinhc_operator_coeffs, 0)
