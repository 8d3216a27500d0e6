"""Numerical evidence for characteristic-function and class-membership claims.

A Bochner test builds the Hermitian matrix ``[phi(t_i - t_j)]`` and reports its
smallest eigenvalue.  A pass means the values are *consistent with* a
characteristic function on that grid; it is evidence, not proof.  Quotient
tests apply the same check to ``phi(t)/phi(ct)`` (class L) and
``psi(t)/psi(ct)^c`` (class U).  The class U definition also asks for the
quotient to be infinitely divisible, which is not tested here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .areasim import empirical_ccf
from .charfn import CharFn
from .errors import ConvergenceError, DomainError

PD_TOL = 1e-8
MAX_GRID = 64


@dataclass
class PDReport:
    grid: np.ndarray
    min_eigenvalue: float
    tolerance: float
    pass_: bool
    label: str = ""

    def as_dict(self):
        return {
            "label": self.label,
            "n": int(len(self.grid)),
            "min_eigenvalue": float(self.min_eigenvalue),
            "tolerance": float(self.tolerance),
            "pass": bool(self.pass_),
        }


@dataclass
class ComparisonReport:
    grid: np.ndarray
    analytic: np.ndarray
    empirical: np.ndarray
    se: np.ndarray
    deviations: np.ndarray
    max_deviation: float
    threshold: float = 4.0
    pass_: bool = field(init=False)

    def __post_init__(self):
        self.pass_ = bool(self.max_deviation <= self.threshold)

    def as_dict(self):
        return {
            "t": [float(t) for t in self.grid],
            "analytic_re": [float(v.real) for v in self.analytic],
            "empirical_re": [float(v.real) for v in self.empirical],
            "empirical_im": [float(v.imag) for v in self.empirical],
            "se": [float(s) for s in self.se],
            "deviations": [float(d) for d in self.deviations],
            "max_deviation": float(self.max_deviation),
            "threshold": self.threshold,
            "pass": self.pass_,
        }


def _grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 1:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if len(np.unique(grid)) != len(grid):
        raise ValueError("grid points must be distinct")
    if len(grid) > MAX_GRID:
        raise ValueError(f"grid size {len(grid)} exceeds {MAX_GRID}; the matrix becomes numerically singular")
    return grid


def _pd_report(fn, grid, tol, label):
    diffs = grid[:, None] - grid[None, :]
    mat = np.asarray(fn(diffs), dtype=complex)
    mat = 0.5 * (mat + mat.conj().T)
    try:
        lam = float(np.linalg.eigvalsh(mat)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    scaled = tol * len(grid)
    return PDReport(grid, lam, scaled, bool(lam >= -scaled), label)


def bochner_pd_check(phi, grid, tol=PD_TOL):
    """Smallest eigenvalue of ``[phi(t_i - t_j)]``; passes if it is ``>= -tol * n``."""
    grid = _grid(grid)
    return _pd_report(phi, grid, tol, getattr(phi, "label", ""))


def _check_nonvanishing(phi, grid, c_list):
    span = float(np.max(np.abs(grid[:, None] - grid[None, :])))
    probe = np.linspace(0.0, span, 4001)
    v = np.asarray(phi(probe), dtype=complex)
    re = v.real
    if np.any(np.abs(v) < 1e-12) or np.any(np.sign(re[:-1]) * np.sign(re[1:]) < 0):
        k = int(np.argmax((np.abs(v[:-1]) < 1e-12) | (np.sign(re[:-1]) * np.sign(re[1:]) < 0)))
        raise DomainError(f"{phi.label} vanishes near t = {probe[k]:.6g} inside the grid span; quotient undefined")


def selfdecomposability_check(phi, c_list, grid, tol=PD_TOL):
    """Bochner reports for ``t -> phi(t) / phi(c t)``, one per ``c`` in ``c_list``."""
    grid = _grid(grid)
    _check_nonvanishing(phi, grid, c_list)
    reports = []
    for c in c_list:
        c = float(c)
        if not 0 < c < 1:
            raise DomainError(f"c must lie in (0, 1), got {c:g}")
        reports.append(_pd_report(lambda t, c=c: phi(t) / phi(c * t), grid, tol, f"{phi.label}: c={c:g}"))
    return reports


def s_selfdecomposability_check(psi, c_list, grid, tol=PD_TOL):
    """Bochner reports for ``t -> psi(t) / psi(c t)**c``; ``psi`` must be real-positive."""
    grid = _grid(grid)
    diffs = np.unique(np.abs(grid[:, None] - grid[None, :]))
    if not psi.is_real_positive(diffs):
        raise DomainError(f"{psi.label} is not real-positive on the grid differences")
    reports = []
    for c in c_list:
        c = float(c)
        if not 0 < c < 1:
            raise DomainError(f"c must lie in (0, 1), got {c:g}")
        fn = lambda t, c=c: psi(t).real / psi(c * t).real ** c
        reports.append(_pd_report(fn, grid, tol, f"{psi.label}: c={c:g}"))
    return reports


def ecf_compare(samples, phi, tgrid, threshold=4.0):
    """Normalised deviations ``|ECF(t) - phi(t)| / SE`` over ``tgrid``."""
    rows = empirical_ccf(samples, tgrid)
    t = np.array([r[0] for r in rows])
    emp = np.array([r[1] for r in rows])
    se = np.array([r[2] for r in rows])
    ana = np.asarray(phi(t), dtype=complex)
    diff = np.abs(emp - ana)
    with np.errstate(divide="ignore", invalid="ignore"):
        dev = np.where(se > 0, diff / se, np.where(diff <= 1e-15, 0.0, np.inf))
    return ComparisonReport(t, ana, emp, se, dev, float(np.max(dev)), threshold)


def non_id_witness(phi, interval, n_scan=2000, xtol=1e-12):
    """A real zero of a real-valued ``phi`` in ``interval``, or ``None``.

    A characteristic function with a real zero cannot be infinitely divisible.
    """
    lo, hi = (float(v) for v in interval)
    if not hi > lo:
        raise ValueError("interval must satisfy lo < hi")
    f = lambda t: float(np.real(phi(t)))
    grid = np.linspace(lo, hi, n_scan + 1)
    vals = np.real(phi(grid))
    exact = np.nonzero(vals == 0.0)[0]
    if len(exact):
        return float(grid[exact[0]])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if not len(idx):
        return None
    i = int(idx[0])
    return float(optimize.brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))


def reports_pass(reports):
    return all(r.pass_ for r in reports)
