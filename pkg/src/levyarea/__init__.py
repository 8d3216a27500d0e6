"""Bessel-function characteristic functions and Lévy stochastic area."""

from __future__ import annotations

from . import areasim, bessel, charfn, levy, sampler, verify
from .errors import ConvergenceError, DomainError, GridError, LevyAreaError, RangeError, TruncationWarning

__version__ = "0.1.0"

__all__ = [
    "areasim", "bessel", "charfn", "levy", "sampler", "verify",
    "LevyAreaError", "DomainError", "RangeError", "ConvergenceError", "GridError", "TruncationWarning",
]
