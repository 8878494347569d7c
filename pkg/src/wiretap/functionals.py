"""Information functionals of a candidate input distribution.

Everything here is defined for an arbitrary discrete input, not only the
optimal one: the optimality statements are recovered by evaluating at a
solver output. All rates are in nats.

Notation used in the code:

* ``f1``, ``f2``: output densities at the legitimate receiver and eavesdropper.
* ``xi(x)``: difference of the conditional-to-marginal relative entropies at
  the two receivers for input ``x``; equals the secrecy capacity on the
  support of an optimal input and is bounded by it on ``[-A, A]``.
* ``g(y) = E[log f2(y + N)] - log f1(y)`` with ``N ~ N(0, sigma2^2 - sigma1^2)``;
  ``xi(x) = E[g(Y1) | X = x] + log(sigma2 / sigma1)``.
* ``h(y) = sigma1^2 f1(y) g'(y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numerics import golden_max, local_maxima
from .channel import (
    ChannelParams,
    DiscreteDistribution,
    as_output,
    log_mixture_density,
    mixture_posterior_mean,
)
from .quadrature import QuadratureRule, default_rule

#: KKT tolerance on the gap and on support residuals, in nats.
EPS_KKT = 1e-5
DEFAULT_GRID = 2001

XI_METHODS = ("kl_difference", "smoothed_g")
GPRIME_METHODS = ("conditional_means", "n_weighted")

# cap on the size of intermediate (points x nodes x nodes x mass) arrays
_CHUNK_ELEMENTS = 2_000_000


def _rule(rule):
    return default_rule() if rule is None else rule


def _chunked(fn, x: np.ndarray, per_item: int) -> np.ndarray:
    step = max(1, _CHUNK_ELEMENTS // max(per_item, 1))
    flat = x.reshape(-1)
    out = np.concatenate([fn(flat[i : i + step]) for i in range(0, flat.size, step)]) if flat.size else flat
    return out.reshape(x.shape)


def expected_log_density(dist, sigma_out, center, spread, rule) -> np.ndarray:
    """``E[log f(center + spread * Z)]`` where ``f`` is the output density for noise ``sigma_out``."""
    center = np.asarray(center, dtype=float)
    lp = dist.log_probs

    def run(c):
        u = c[:, None] + spread * rule.nodes
        return log_mixture_density(dist.points, lp, sigma_out, u) @ rule.weights

    return _chunked(run, center, rule.order * dist.size)


def xi_function(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    x,
    rule: QuadratureRule | None = None,
    method: str = "kl_difference",
):
    """Marginal secrecy gain of placing input mass at ``x`` (vectorized over ``x``).

    ``kl_difference`` evaluates the two relative entropies with one
    Gauss-Hermite rule each, centred at ``x``. ``smoothed_g`` averages ``g``
    over ``Y1 | X = x`` (a nested quadrature) and is kept as a cross-check.
    """
    rule = _rule(rule)
    x = np.asarray(x, dtype=float)
    s1, s2 = channel.sigma1, channel.sigma2
    offset = math.log(s2 / s1)
    if method == "kl_difference":
        e1 = expected_log_density(dist, s1, x, s1, rule)
        e2 = expected_log_density(dist, s2, x, s2, rule)
        return as_output(offset - e1 + e2)
    if method == "smoothed_g":
        def run(c):
            y = c[:, None] + s1 * rule.nodes
            return _g_values(dist, channel, y, rule) @ rule.weights

        return as_output(offset + _chunked(run, x, rule.order**2 * dist.size))
    raise ValueError(f"unknown xi method {method!r}; expected one of {XI_METHODS}")


def _g_values(dist, channel, y, rule):
    lp = dist.log_probs
    u = y[..., None] + channel.nu * rule.nodes
    outer = log_mixture_density(dist.points, lp, channel.sigma2, u) @ rule.weights
    return outer - log_mixture_density(dist.points, lp, channel.sigma1, y)


def g_function(dist: DiscreteDistribution, channel: ChannelParams, y, rule: QuadratureRule | None = None):
    """``g(y) = E[log f2(y + N)] - log f1(y)`` (vectorized over ``y``)."""
    rule = _rule(rule)
    y = np.asarray(y, dtype=float)
    return as_output(_chunked(lambda c: _g_values(dist, channel, c, rule), y, rule.order * dist.size))


def g_prime(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    y,
    rule: QuadratureRule | None = None,
    method: str = "conditional_means",
):
    """Derivative of :func:`g` by one of two independent representations.

    ``conditional_means`` uses Tweedie's formula at both receivers;
    ``n_weighted`` replaces the eavesdropper term by ``E[N log f2(y + N)] / nu^2``
    (integration by parts against the Gaussian density of ``N``).
    """
    rule = _rule(rule)
    y = np.asarray(y, dtype=float)
    s1, s2, nu = channel.sigma1, channel.sigma2, channel.nu
    lp = dist.log_probs
    if method not in GPRIME_METHODS:
        raise ValueError(f"unknown g' method {method!r}; expected one of {GPRIME_METHODS}")

    def run(c):
        legit = (mixture_posterior_mean(dist.points, lp, s1, c) - c) / s1**2
        u = c[:, None] + nu * rule.nodes
        if method == "conditional_means":
            m2 = mixture_posterior_mean(dist.points, lp, s2, u) @ rule.weights
            eaves = (m2 - c) / s2**2
        else:
            eaves = (log_mixture_density(dist.points, lp, s2, u) @ (rule.nodes * rule.weights)) / nu
        return eaves - legit

    return as_output(_chunked(run, y, rule.order * dist.size))


def h_function(dist: DiscreteDistribution, channel: ChannelParams, y, rule: QuadratureRule | None = None):
    """``h(y) = sigma1^2 f1(y) g'(y)``; same zeros as ``g'`` (vectorized)."""
    y = np.asarray(y, dtype=float)
    f1 = np.exp(log_mixture_density(dist.points, dist.log_probs, channel.sigma1, y))
    return as_output(channel.sigma1**2 * f1 * g_prime(dist, channel, y, rule))


def secrecy_information(dist: DiscreteDistribution, channel: ChannelParams, rule: QuadratureRule | None = None) -> float:
    """``I(X; Y1) - I(X; Y2)`` in nats, as ``sum_i p_i xi(x_i)``."""
    xi = np.asarray(xi_function(dist, channel, dist.points, rule))
    return float(np.dot(dist.probs, xi))


def mutual_information(dist: DiscreteDistribution, sigma: float, rule: QuadratureRule | None = None) -> float:
    """``I(X; X + sigma Z)`` in nats: output entropy minus noise entropy."""
    rule = _rule(rule)
    cross = np.atleast_1d(expected_log_density(dist, sigma, dist.points, sigma, rule))
    return float(-0.5 * math.log(2.0 * math.pi * math.e * sigma**2) - np.dot(dist.probs, cross))


@dataclass
class KktReport:
    """Optimality certificate of a candidate input.

    ``gap`` is ``sup_xi - secrecy_info`` over ``[-A, A]``; residuals are
    ``xi(x_i) - secrecy_info`` at each mass point.
    """

    secrecy_info: float
    sup_xi: float
    argmax_x: float
    gap: float
    support_residuals: list[tuple[float, float]] = field(default_factory=list)

    def max_residual(self) -> float:
        return max((abs(r) for _, r in self.support_residuals), default=0.0)

    def is_optimal(self, eps: float = EPS_KKT) -> bool:
        return self.gap <= eps and self.max_residual() <= eps

    def to_dict(self) -> dict:
        return {
            "secrecy_info": self.secrecy_info,
            "sup_xi": self.sup_xi,
            "argmax_x": self.argmax_x,
            "gap": self.gap,
            "support_residuals": [[float(x), float(r)] for x, r in self.support_residuals],
            "units": "nats",
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KktReport":
        return cls(
            secrecy_info=float(data["secrecy_info"]),
            sup_xi=float(data["sup_xi"]),
            argmax_x=float(data["argmax_x"]),
            gap=float(data["gap"]),
            support_residuals=[(float(x), float(r)) for x, r in data["support_residuals"]],
        )


def xi_scan(dist, channel, rule=None, grid_size: int = DEFAULT_GRID, top: int = 3):
    """Grid scan of ``xi`` over ``[-A, A]`` with golden-section refinement.

    Returns ``(x_best, xi_best, grid, values)``.
    """
    rule = _rule(rule)
    amp = channel.amp
    grid = np.linspace(-amp, amp, grid_size)
    values = np.asarray(xi_function(dist, channel, grid, rule))
    idx = local_maxima(values)
    idx = idx[np.argsort(values[idx])[::-1][:top]]
    best_x, best_v = float(grid[idx[0]]), float(values[idx[0]])
    f = lambda t: float(xi_function(dist, channel, t, rule))
    for i in idx:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
        x, v = golden_max(f, lo, hi, 1e-10 * amp)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v, grid, values


def kkt_report(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    rule: QuadratureRule | None = None,
    grid_size: int = DEFAULT_GRID,
) -> KktReport:
    """Evaluate the optimality conditions of ``dist`` on a grid over ``[-A, A]``."""
    if grid_size < 101:
        raise ValueError(f"grid_size must be at least 101, got {grid_size}")
    rule = _rule(rule)
    info = secrecy_information(dist, channel, rule)
    x_best, v_best, _, _ = xi_scan(dist, channel, rule, grid_size)
    support_xi = np.atleast_1d(xi_function(dist, channel, dist.points, rule))
    # mass points themselves are admissible maximizers
    k = int(np.argmax(support_xi))
    if support_xi[k] > v_best:
        x_best, v_best = float(dist.points[k]), float(support_xi[k])
    residuals = [(float(x), float(v - info)) for x, v in zip(dist.points, support_xi)]
    return KktReport(
        secrecy_info=info,
        sup_xi=v_best,
        argmax_x=x_best,
        gap=v_best - info,
        support_residuals=residuals,
    )
