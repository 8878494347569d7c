"""Small numerical helpers shared by several modules."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x))`` for the best point seen, endpoints included.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = max(((c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))), key=lambda t: t[1])
    return float(best[0]), float(best[1])


def local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of grid local maxima (endpoints compared with their one neighbour)."""
    v = np.asarray(values)
    if v.size == 1:
        return np.array([0])
    left = np.concatenate(([-np.inf], v[:-1]))
    right = np.concatenate((v[1:], [-np.inf]))
    return np.flatnonzero((v >= left) & (v >= right))


def clogsumexp(logs: np.ndarray, axis: int = -1) -> np.ndarray:
    """``log(sum(exp(logs)))`` for complex logs, shifting by the largest real part.

    The imaginary parts carry phases, so the result is the principal-branch
    log of the complex sum up to a multiple of ``2*pi*i``.
    """
    logs = np.asarray(logs, dtype=complex)
    m = np.max(logs.real, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        total = np.log(np.sum(np.exp(logs - m), axis=axis))
    return total + np.squeeze(m, axis=axis)
