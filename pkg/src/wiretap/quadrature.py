"""Gauss-Hermite rules normalized for expectations under a standard normal."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericalError

DEFAULT_ORDER = 96
MAX_ORDER = 512


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights with ``sum(w * f(nodes)) ~= E[f(Z)]``, ``Z ~ N(0, 1)``.

    Weights of extreme nodes underflow to zero above order ~360; those nodes
    carry no mass in double precision anyway.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def expect(self, values: np.ndarray, axis: int = -1) -> np.ndarray:
        """Weighted sum of pre-evaluated integrand values along ``axis``."""
        return np.tensordot(np.moveaxis(values, axis, -1), self.weights, axes=([-1], [0]))


def _orthonormal_hermite(z: float, n: int) -> tuple[float, float]:
    """``(p_n(z), p_n'(z))`` for orthonormal physicists' Hermite polynomials."""
    p1, p2 = math.pi**-0.25, 0.0
    for j in range(1, n + 1):
        p3, p2 = p2, p1
        p1 = z * math.sqrt(2.0 / j) * p2 - math.sqrt((j - 1.0) / j) * p3
    return p1, math.sqrt(2.0 * n) * p2


def _hermite_roots(n: int, maxit: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Nonnegative roots (descending) and log-weights of ``H_n``.

    Initial guesses are eigenvalues of the Jacobi matrix of the recurrence;
    each is polished by Newton iteration on the orthonormal recurrence.
    """
    off = np.sqrt(np.arange(1, n) / 2.0)
    guesses = np.sort(eigh_tridiagonal(np.zeros(n), off, eigvals_only=True))[::-1]
    m = (n + 1) // 2
    roots = np.zeros(m)
    log_w = np.zeros(m)
    for i in range(m):
        z = float(guesses[i])
        if n % 2 and i == m - 1:
            z = 0.0
        for _ in range(maxit):
            p, dp = _orthonormal_hermite(z, n)
            step = p / dp
            z -= step
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                break
        else:
            raise NumericalError(f"Hermite root {i} of order {n} did not converge")
        _, dp = _orthonormal_hermite(z, n)
        roots[i] = z
        log_w[i] = math.log(2.0) - 2.0 * math.log(abs(dp))
    if m > 1 and np.any(np.diff(roots) >= 0.0):
        raise NumericalError(f"Newton iteration merged Hermite roots at order {n}")
    return roots, log_w


@lru_cache(maxsize=None)
def gauss_hermite(order: int = DEFAULT_ORDER) -> QuadratureRule:
    """Gauss-Hermite rule of the given order for a standard-normal weight.

    Exact for ``E[Z^k]`` with ``k <= 2*order - 1``.
    """
    if isinstance(order, bool) or int(order) != order or not 1 <= order <= MAX_ORDER:
        raise DomainError(f"quadrature order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    order = int(order)
    half, log_w = _hermite_roots(order)
    m = half.size
    nodes = np.empty(order)
    log_weights = np.empty(order)
    nodes[:m] = -half
    nodes[order - m :] = half[::-1]
    log_weights[:m] = log_w
    log_weights[order - m :] = log_w[::-1]
    if order % 2:
        nodes[m - 1] = 0.0
    nodes *= math.sqrt(2.0)
    weights = np.exp(log_weights - 0.5 * math.log(math.pi))
    # symmetric renormalization removes the last ulps of drift
    weights = 0.5 * (weights + weights[::-1])
    weights /= weights.sum()
    nodes = 0.5 * (nodes - nodes[::-1])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(order, nodes, weights)


def default_rule() -> QuadratureRule:
    return gauss_hermite(DEFAULT_ORDER)


def gaussian_expectation(
    f: Callable[[np.ndarray], np.ndarray],
    mean: float,
    stddev: float,
    rule: QuadratureRule | None = None,
) -> float:
    """``E[f(mean + stddev * Z)]`` by Gauss-Hermite quadrature.

    ``f`` is called once with the full node array. A non-finite value raises
    :class:`NumericalError` naming the offending node.
    """
    if not stddev > 0.0:
        raise DomainError(f"stddev must be positive, got {stddev!r}")
    rule = rule or default_rule()
    u = mean + stddev * rule.nodes
    values = np.asarray(f(u), dtype=float)
    if values.shape != u.shape:
        values = np.array([float(f(ui)) for ui in u])
    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise NumericalError(f"integrand is {values[k]!r} at node {u[k]!r}")
    return float(values @ rule.weights)
