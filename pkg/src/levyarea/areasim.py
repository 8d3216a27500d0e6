"""Closed forms and Monte Carlo ensembles for conditioned stochastic areas.

Two ensembles are produced:

* the Levy area ``A_u = int_0^u Z dZ~ - Z~ dZ`` of a planar Brownian motion
  conditioned on ``B_u = a``, built from exact Brownian bridges;
* the generalised area ``A^p = int_0^1 V dV~ - V~ dV`` of
  ``V_t = t^-p int_0^t s^p dB_s`` conditioned on ``V_1 = a``.

For the second, ``dV = dB - (p/t) V dt`` and the drift terms cancel in the
area, leaving ``A^p = int_0^1 s^-p (M_s dB~_s - M~_s dB_s)`` with
``M_t = int_0^t s^p dB_s``.  Conditioning on ``V_1 = a`` is a linear
constraint on the Gaussian increments and is imposed by exact projection.

All Ito sums use left endpoints.  With inclusive cumulative sums ``C`` the
left-point sum ``sum (C_i - dX_i) dY_i - (D_i - dY_i) dX_i`` reduces to
``sum C_i dY_i - D_i dX_i``, which is what the code evaluates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel, charfn
from .bessel import check_order
from .errors import DomainError, GridError

DEFAULT_BLOCK = 500


@dataclass(frozen=True)
class GridSpec:
    """Time grid on ``[0, horizon]`` with ``steps`` intervals.

    ``scheme="geometric"`` puts a quarter of the nodes geometrically on
    ``[first, split] * horizon`` and spaces the rest uniformly up to the horizon.
    """

    steps: int
    scheme: str = "uniform"
    horizon: float = 1.0
    first: float = 1e-6
    split: float = 0.1
    geometric_fraction: float = 0.25

    def __post_init__(self):
        if int(self.steps) < 2:
            raise GridError(f"steps must be >= 2, got {self.steps}")
        if self.scheme not in ("uniform", "geometric"):
            raise GridError(f"unknown grid scheme {self.scheme!r}")
        if not self.horizon > 0:
            raise GridError(f"horizon must be positive, got {self.horizon}")
        if self.scheme == "geometric" and not (0 < self.first < self.split < 1):
            raise GridError("geometric grid needs 0 < first < split < 1")

    @property
    def n_geometric(self):
        return max(2, min(self.steps - 1, round(self.geometric_fraction * self.steps)))

    @property
    def ratio(self):
        """Ratio of consecutive geometric nodes, in (0, 1)."""
        if self.scheme != "geometric":
            return None
        return (self.first / self.split) ** (1.0 / (self.n_geometric - 1))

    def nodes(self):
        u = float(self.horizon)
        if self.scheme == "uniform":
            return np.linspace(0.0, u, self.steps + 1)
        g = np.geomspace(self.first, self.split, self.n_geometric)
        rest = np.linspace(self.split, 1.0, self.steps - self.n_geometric + 1)[1:]
        return u * np.concatenate(([0.0], g, rest))


@dataclass
class AreaEnsemble:
    areas: np.ndarray
    condition: tuple
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.areas = np.asarray(self.areas, dtype=float)
        if not np.all(np.isfinite(self.areas)):
            raise ValueError("non-finite area in ensemble")

    def __len__(self):
        return len(self.areas)


def _point(a):
    a = tuple(float(v) for v in a)
    if len(a) != 2:
        raise DomainError(f"conditioning point must be in R^2, got {a}")
    return a


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def levy_formula(t, u, a):
    """``(tu / sinh tu) exp(-(|a|^2 / 2u)(tu coth tu - 1))``."""
    u = float(u)
    if not u > 0:
        raise DomainError(f"u must be positive, got {u:g}")
    a = _point(a)
    x = abs(float(t)) * u
    if x == 0.0:
        return 1.0
    r2 = a[0] ** 2 + a[1] ** 2
    return x / math.sinh(x) * math.exp(-(r2 / (2.0 * u)) * (x / math.tanh(x) - 1.0))


def biane_yor_formula(lam, p, a):
    """Conditional characteristic function of the generalised area at ``lambda``.

    ``B_nu(|lambda|) exp(-(|a|^2/2) |lambda| I_{nu+1}(|lambda|) / I_nu(|lambda|))``
    with ``nu = p + 1/2``.
    """
    p = check_order(p, lower=-0.5, what="p")
    nu = p + 0.5
    a = _point(a)
    x = abs(float(lam))
    if x == 0.0:
        return 1.0
    r2 = a[0] ** 2 + a[1] ** 2
    return float(1.0 / bessel.scaled_I(nu, x) * math.exp(-(r2 / 2.0) * x * bessel.ratio_I(nu, x)))


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

def _blocks(N, block):
    return [(s, min(N, s + block)) for s in range(0, N, block)]


def _area_sum(dX, dY):
    """Left-point ``sum_i X_i dY_i - Y_i dX_i`` for paths starting at 0."""
    C = np.cumsum(dX, axis=1)
    D = np.cumsum(dY, axis=1)
    return np.einsum("ij,ij->i", C, dY) - np.einsum("ij,ij->i", D, dX)


def simulate_bridge_area(u, a, grid, N, stream, block=DEFAULT_BLOCK):
    """Areas of ``N`` planar Brownian bridges from 0 to ``a`` over ``[0, u]``."""
    u = float(u)
    if not u > 0:
        raise DomainError(f"u must be positive, got {u:g}")
    a = _point(a)
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    if abs(grid.horizon - u) > 1e-12 * u:
        grid = GridSpec(grid.steps, grid.scheme, u, grid.first, grid.split, grid.geometric_fraction)
    nodes = grid.nodes()
    dt = np.diff(nodes)
    sq = np.sqrt(dt)
    frac = dt / u
    areas = np.empty(N)
    blocks = _blocks(N, block)
    for (lo, hi), sub in zip(blocks, stream.spawn(len(blocks))):
        n = hi - lo
        incs = []
        for coord in a:
            dW = sub.rng.standard_normal((n, len(dt))) * sq
            end = dW.sum(axis=1)
            dW -= np.outer(end - coord, frac)
            incs.append(dW)
        areas[lo:hi] = _area_sum(incs[0], incs[1])
    return AreaEnsemble(areas, a, {"kind": "levy", "p": None, "u": u, "grid": grid, "seed": stream.seed, "N": N, "block": block})


def vp_weights(p, nodes):
    """Effective ``s^p`` per interval: ``sqrt(int s^2p ds / dt)``, matching the variance of M."""
    lo, hi = nodes[:-1], nodes[1:]
    q = 2.0 * p + 1.0
    return np.sqrt((hi**q - lo**q) / (q * (hi - lo)))


def _left_inverse_weights(p, nodes):
    s = nodes[:-1]
    r = np.zeros_like(s)
    pos = s > 0
    r[pos] = s[pos] ** (-p)
    return r


def simulate_vp_area(p, a, grid, N, stream, block=DEFAULT_BLOCK):
    """Areas of ``V^p`` conditioned on ``V^p_u = a`` (``u`` = grid horizon, normally 1)."""
    p = check_order(p, lower=-0.5, what="p")
    a = _point(a)
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    if p < 0 and grid.scheme != "geometric":
        raise GridError("p < 0 needs the geometric grid (s^-p weights are singular at s = 0)")
    nodes = grid.nodes()
    u = float(nodes[-1])
    dt = np.diff(nodes)
    sq = np.sqrt(dt)
    c = vp_weights(p, nodes)
    r = _left_inverse_weights(p, nodes)
    w = c * dt / np.sum(c * c * dt)
    targets = [v * u**p for v in a]
    areas = np.empty(N)
    blocks = _blocks(N, block)
    for (lo, hi), sub in zip(blocks, stream.spawn(len(blocks))):
        n = hi - lo
        incs = []
        for target in targets:
            dB = sub.rng.standard_normal((n, len(dt))) * sq
            L = dB @ c
            dB -= np.outer(L - target, w)
            incs.append(dB)
        dB, dBt = incs
        C = np.cumsum(dB * c, axis=1)
        Ct = np.cumsum(dBt * c, axis=1)
        C *= r
        Ct *= r
        areas[lo:hi] = np.einsum("ij,ij->i", C, dBt) - np.einsum("ij,ij->i", Ct, dB)
    return AreaEnsemble(areas, a, {"kind": "vp", "p": p, "u": u, "grid": grid, "seed": stream.seed, "N": N, "block": block})


def vp_conditioning_residual(p, a, grid, n, stream):
    """Max ``|sum_i c_i dB_i - a_coord|`` after projection, for ``n`` fresh paths."""
    nodes = grid.nodes()
    dt = np.diff(nodes)
    c = vp_weights(p, nodes)
    w = c * dt / np.sum(c * c * dt)
    worst = 0.0
    for target in _point(a):
        dB = stream.rng.standard_normal((n, len(dt))) * np.sqrt(dt)
        dB -= np.outer(dB @ c - target, w)
        worst = max(worst, float(np.max(np.abs(dB @ c - target))))
    return worst


def vp_area_forms(p, nodes, dB, dBt):
    """Two discretisations of ``A^p`` on the same increments.

    Returns ``(direct, cancelled)``: the left-point sum of ``V dV~ - V~ dV``
    built from ``V_i = t_i^-p M_i``, and the drift-cancelled
    ``sum t_i^-p (M_i dB~_i - M~_i dB_i)``.
    """
    nodes = np.asarray(nodes, dtype=float)
    c = vp_weights(p, nodes)
    dM = np.atleast_2d(dB) * c
    dMt = np.atleast_2d(dBt) * c
    M = np.concatenate([np.zeros((dM.shape[0], 1)), np.cumsum(dM, axis=1)], axis=1)
    Mt = np.concatenate([np.zeros((dMt.shape[0], 1)), np.cumsum(dMt, axis=1)], axis=1)
    scale = np.zeros_like(nodes)
    scale[1:] = nodes[1:] ** (-p)
    V, Vt = M * scale, Mt * scale
    dV, dVt = np.diff(V, axis=1), np.diff(Vt, axis=1)
    direct = np.sum(V[:, :-1] * dVt - Vt[:, :-1] * dV, axis=1)
    r = _left_inverse_weights(p, nodes)
    cancelled = np.sum(r * (M[:, :-1] * np.atleast_2d(dBt) - Mt[:, :-1] * np.atleast_2d(dB)), axis=1)
    return direct, cancelled


def empirical_ccf(ensemble, tgrid):
    """``[(t, mean exp(i t A), standard error), ...]`` for an ensemble or array of samples.

    The standard error combines the cos and sin parts as
    ``sqrt((var cos + var sin) / N)``.
    """
    x = np.asarray(getattr(ensemble, "areas", getattr(ensemble, "values", ensemble)), dtype=float)
    if x.size == 0:
        raise ValueError("empty ensemble")
    n = x.size
    out = []
    for t in np.atleast_1d(np.asarray(tgrid, dtype=float)):
        if t == 0.0:
            out.append((0.0, 1.0 + 0.0j, 0.0))
            continue
        ph = t * x
        cs, sn = np.cos(ph), np.sin(ph)
        est = complex(cs.mean(), sn.mean())
        se = math.sqrt((cs.var() + sn.var()) / n)
        out.append((float(t), est, se))
    return out


def levy_cf(u, a):
    """``levy_formula`` wrapped as a CharFn in ``t``."""
    return charfn.CharFn(
        np.vectorize(lambda t: levy_formula(t, u, a), otypes=[float]),
        {"ID"},
        (math.pi / u, math.pi / u),
        f"levy(u={u:g}, a={tuple(a)})",
    )


def biane_yor_cf(p, a):
    """``biane_yor_formula`` wrapped as a CharFn in ``lambda``."""
    return charfn.CharFn(
        np.vectorize(lambda t: biane_yor_formula(t, p, a), otypes=[float]),
        {"ID"},
        (0.0, 0.0),
        f"biane_yor(p={p:g}, a={tuple(a)})",
    )
