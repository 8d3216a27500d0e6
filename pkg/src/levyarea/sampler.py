"""Random variates for the Laplace law, the Bessel-zero series X_nu and the density f_nu."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .bessel import check_order
from .errors import DomainError, TruncationWarning

ALGORITHM = "numpy.PCG64"
_CHUNK = 1 << 21


class SeededStream:
    """A single-owner random stream; equal seeds give bit-identical draws.

    Independent child streams come from ``numpy.random.SeedSequence.spawn``,
    so ``SeededStream(s).spawn(n)`` is a deterministic function of ``(s, n)``.
    """

    algorithm = ALGORITHM

    def __init__(self, seed=0, _seq=None):
        self.seed = int(seed)
        self._seq = _seq if _seq is not None else np.random.SeedSequence(self.seed)
        self.rng = np.random.Generator(np.random.PCG64(self._seq))

    def spawn(self, n):
        return [SeededStream(self.seed, s) for s in self._seq.spawn(n)]

    def __repr__(self):
        return f"SeededStream(seed={self.seed}, algorithm={self.algorithm!r})"


@dataclass
class SampleBatch:
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size == 0:
            raise ValueError("a SampleBatch must not be empty")

    def __len__(self):
        return len(self.values)


def sample_laplace(stream, size=None):
    """Standard Laplace draws (density e^{-|x|}/2) by inverting the CDF."""
    u = stream.rng.random(size) - 0.5
    # u in [-0.5, 0.5); 1 - 2|u| lies in (0, 1]
    return -np.sign(u) * np.log1p(-2.0 * np.abs(u))


def tail_variance(nu, zeros):
    """Variance ``2 (1/(4(nu+1)) - sum_k z_k^-2)`` of the omitted series tail."""
    return 2.0 * (1.0 / (4.0 * (nu + 1.0)) - float(np.sum(np.asarray(zeros) ** -2.0)))


def sample_X(nu, K, stream, tail_compensate=True, size=None):
    """Draws of the truncated series ``sum_{k<=K} eta_k / z_{nu,k}``.

    With ``tail_compensate`` the omitted terms are replaced by an independent
    centred Gaussian of the same variance.
    """
    nu = check_order(nu)
    K = int(K)
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    inv = 1.0 / np.asarray(bessel.find_zeros(nu, K).zeros)
    n = 1 if size is None else int(size)
    out = np.empty(n)
    rows = max(1, _CHUNK // K)
    for start in range(0, n, rows):
        stop = min(n, start + rows)
        out[start:stop] = sample_laplace(stream, (stop - start, K)) @ inv
    if tail_compensate:
        var = tail_variance(nu, 1.0 / inv)
        if var < 0:
            warnings.warn(f"negative tail variance {var:.3e} clamped to 0", TruncationWarning, stacklevel=2)
            var = 0.0
        out += math.sqrt(var) * stream.rng.standard_normal(n)
    return float(out[0]) if size is None else out


def sample_f(nu, stream, size=None):
    """Draws from ``f_nu``: ``2 beta - 1`` with beta ~ Beta(nu + 1/2, nu + 1/2).

    The beta variate is a ratio of two independent gamma variates.
    """
    nu = check_order(nu, lower=-0.5)
    shape = nu + 0.5
    g1 = stream.rng.standard_gamma(shape, size)
    g2 = stream.rng.standard_gamma(shape, size)
    x = 2.0 * g1 / (g1 + g2) - 1.0
    return float(x) if size is None else x


def batch_X(nu, K, N, seed, tail_compensate=True):
    s = SeededStream(seed)
    vals = sample_X(nu, K, s, tail_compensate, size=N)
    return SampleBatch(vals, {"law": "X", "nu": float(nu), "K": int(K), "tail_compensation": bool(tail_compensate), "seed": int(seed), "algorithm": s.algorithm})


def batch_f(nu, N, seed):
    s = SeededStream(seed)
    return SampleBatch(sample_f(nu, s, size=N), {"law": "f", "nu": float(nu), "K": None, "tail_compensation": False, "seed": int(seed), "algorithm": s.algorithm})


def batch_laplace(N, seed):
    s = SeededStream(seed)
    return SampleBatch(sample_laplace(s, N), {"law": "laplace", "nu": None, "K": None, "tail_compensation": False, "seed": int(seed), "algorithm": s.algorithm})
