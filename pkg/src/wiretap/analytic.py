"""Zero counting on the real line and the entire extension of ``h``.

The complex extension is ``h(z) = sigma1^2 (f1(z) G'(z) - f1'(z))`` where
``G(z) = E[log f2(z + N)]``. ``f1`` is a finite Gaussian mixture and extends
directly. ``G'`` is the Gaussian smoothing of ``psi = (log f2)'``, which is
meromorphic with simple poles of residue one at the complex zeros of ``f2``.

Two evaluation routes for ``G'`` are provided:

``direct``
    Quadrature over real ``u`` of ``(u - z) phi_nu(u - z) log f2(u) / nu^2``.
    Exact in principle, but the kernel grows like ``exp(Im(z)^2 / (2 nu^2))``
    while the result does not, so cancellation ruins it far from the axis.
``contour``
    The integration line is moved to ``Im u = b'`` near ``Im z``; the poles
    crossed contribute ``2 pi i phi_nu(zeta - z)`` each. The remaining line
    integral is well conditioned and the residues are exact.

All moduli are handled as logarithms: on the circles used for zero-count
bounds, ``|h|`` routinely exceeds the double-precision range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from ._numerics import clogsumexp, golden_max, local_maxima
from .bounds import E, radius_R, tijdeman_bound, tijdeman_grid_bound
from .channel import ChannelParams, DiscreteDistribution
from .errors import DomainError, NumericalError
from .functionals import EPS_KKT, g_function, xi_function
from .quadrature import QuadratureRule, gauss_hermite

DEFAULT_COUNT_GRID = 4001
COMPLEX_ORDER = 128
CIRCLE_SAMPLES = 1024
#: ``b^2 / (2 nu^2)`` above which ``auto`` switches to the contour route.
DIRECT_GROWTH_LIMIT = 8.0
ORDER_CHANGE_TOL = 1e-6
H_METHODS = ("auto", "direct", "contour")


# ---------------------------------------------------------------------------
# real-line zero counting


@dataclass
class ZeroCount:
    """Sign changes of a real function on an interval.

    ``crossings`` are the bisection-refined locations of the sign changes;
    ``checks`` carries caller-specific diagnostics.
    """

    interval: tuple[float, float]
    sign_changes: int
    tangential_suspects: list[float]
    grid_size: int
    crossings: list[float] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def with_suspects(self) -> int:
        """Count with every tangential suspect taken as a zero (upper-bound side)."""
        return self.sign_changes + len(self.tangential_suspects)

    def to_dict(self) -> dict:
        return {
            "interval": [float(self.interval[0]), float(self.interval[1])],
            "sign_changes": int(self.sign_changes),
            "tangential_suspects": [float(x) for x in self.tangential_suspects],
            "grid_size": int(self.grid_size),
            "crossings": [float(x) for x in self.crossings],
            "checks": self.checks,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ZeroCount":
        return cls(
            interval=(float(data["interval"][0]), float(data["interval"][1])),
            sign_changes=int(data["sign_changes"]),
            tangential_suspects=[float(x) for x in data["tangential_suspects"]],
            grid_size=int(data["grid_size"]),
            crossings=[float(x) for x in data.get("crossings", [])],
            checks=dict(data.get("checks", {})),
        )


def _evaluate(f, x):
    values = np.asarray(f(x), dtype=float)
    if values.shape != x.shape:
        values = np.array([float(f(xi)) for xi in x])
    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise NumericalError(f"function value {values[k]!r} at x={x[k]!r}")
    return values


def _bisect(f, a, b, fa, iters):
    fb = None
    for _ in range(iters):
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        fm = float(f(m))
        if not math.isfinite(fm):
            raise NumericalError(f"function value {fm!r} at x={m!r}")
        if fm == 0.0:
            return m, 0.0
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    fb = float(f(b)) if fb is None else fb
    return 0.5 * (a + b), min(abs(fa), abs(fb))


def count_sign_changes(
    f: Callable,
    lo: float,
    hi: float,
    grid_size: int = DEFAULT_COUNT_GRID,
    refine_iters: int = 60,
    tangency_tol: float | None = None,
    include=(),
) -> ZeroCount:
    """Count sign changes of ``f`` on ``[lo, hi]`` from a uniform grid.

    Grid values with ``|f| <= tangency_tol`` (default ``1e-9 * max|f|``) are
    treated as zero. A run of such values between equal signs, or at either
    end of the interval, is a tangential suspect. Each sign change is
    bisected; it is counted only if ``|f|`` actually becomes small in the
    final bracket, which rejects jumps and poles. ``include`` adds points
    (e.g. known touching points) to the grid.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if grid_size < 101:
        raise DomainError(f"grid_size must be at least 101, got {grid_size}")
    grid = np.linspace(lo, hi, grid_size)
    extra = np.asarray(include, dtype=float).reshape(-1)
    extra = extra[(extra >= lo) & (extra <= hi)]
    if extra.size:
        grid = np.unique(np.concatenate([grid, extra]))
    values = _evaluate(f, grid)
    scale = float(np.max(np.abs(values)))
    tol = 1e-9 * scale if tangency_tol is None else float(tangency_tol)
    signs = np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(int)
    nonzero = np.flatnonzero(signs)

    def run_min(a, b):
        return float(grid[a + int(np.argmin(np.abs(values[a : b + 1])))])

    suspects: list[float] = []
    crossings: list[float] = []
    if nonzero.size == 0:
        return ZeroCount((float(lo), float(hi)), 0, [run_min(0, grid.size - 1)], grid_size)
    if nonzero[0] > 0:
        suspects.append(run_min(0, nonzero[0] - 1))
    confirm = max(tol, 1e-6 * scale)
    for i, j in zip(nonzero[:-1], nonzero[1:]):
        if signs[i] != signs[j]:
            root, residual = _bisect(f, float(grid[i]), float(grid[j]), float(values[i]), refine_iters)
            if residual <= confirm:
                crossings.append(root)
        elif j > i + 1:
            suspects.append(run_min(i + 1, j - 1))
    if nonzero[-1] < grid.size - 1:
        suspects.append(run_min(nonzero[-1] + 1, grid.size - 1))
    return ZeroCount((float(lo), float(hi)), len(crossings), suspects, grid_size, crossings)


def count_zeros_g_plus_kappa(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    cs: float,
    rule: QuadratureRule | None = None,
    grid_size: int = DEFAULT_COUNT_GRID,
) -> ZeroCount:
    """Zeros of ``g + log(sigma2/sigma1) - cs`` on ``[-R, R]`` (relaxed radius).

    ``checks`` records the function values at ``±R`` and ``±2R`` and whether
    all four are positive.
    """
    if grid_size < DEFAULT_COUNT_GRID:
        raise DomainError(f"grid_size must be at least {DEFAULT_COUNT_GRID}, got {grid_size}")
    kappa = math.log(channel.sigma2 / channel.sigma1) - cs
    radius = radius_R(channel, cs, "relaxed")

    def f(y):
        return np.asarray(g_function(dist, channel, y, rule)) + kappa

    count = count_sign_changes(f, -radius, radius, grid_size)
    probe = np.array([-2.0 * radius, -radius, radius, 2.0 * radius])
    edge = np.asarray(f(probe))
    count.checks = {
        "kappa": kappa,
        "radius": radius,
        "probe_points": probe.tolist(),
        "probe_values": edge.tolist(),
        "positive_outside": bool(np.all(edge > 0.0)),
    }
    return count


def count_zeros_xi_minus_cs(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    cs: float,
    rule: QuadratureRule | None = None,
    grid_size: int = DEFAULT_COUNT_GRID,
    tol: float = EPS_KKT,
) -> ZeroCount:
    """Zeros of ``xi - cs`` on ``[-A, A]``, mass points added to the grid.

    At an optimum ``xi - cs`` touches zero at every mass point without
    crossing, so values within the KKT tolerance count as zero and each
    touching shows up as a tangential suspect.
    """
    amp = channel.amp

    def f(x):
        return np.asarray(xi_function(dist, channel, x, rule)) - cs

    return count_sign_changes(f, -amp, amp, grid_size, tangency_tol=tol, include=dist.points)


# ---------------------------------------------------------------------------
# complex zeros of the eavesdropper density


def _exp_poly(dist, sigma2):
    """``f2(u) ∝ exp(-u^2 / (2 sigma2^2)) * sum_i q_i exp(beta_i u)``; returns ``(log q, beta)``."""
    return dist.log_probs - dist.points**2 / (2.0 * sigma2**2), dist.points / sigma2**2


def _strip(log_q, beta) -> tuple[float, float]:
    """Real-part bounds outside which a single exponential dominates (so no zeros)."""

    def edge(k):
        others = np.delete(np.arange(beta.size), k)

        def excess(r):
            return log_q[k] + beta[k] * r - logsumexp(log_q[others] + beta[others] * r)

        direction = 1.0 if beta[k] == beta.max() else -1.0
        r = 1.0
        while excess(direction * r) <= 0.0:
            r *= 2.0
        return brentq(lambda s: excess(direction * s), -r, r, xtol=1e-12) * direction

    return edge(int(np.argmin(beta))), edge(int(np.argmax(beta)))


def _log_exp_poly(log_q, beta, u):
    return clogsumexp(log_q[:, None] + beta[:, None] * u[None, :], axis=0)


def _newton_zeros(log_q, beta, seeds, iters=80):
    u = seeds.astype(complex)
    done = np.zeros(u.shape, dtype=bool)
    for _ in range(iters):
        terms = log_q[:, None] + beta[:, None] * u[None, :]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            weights = np.exp(terms - clogsumexp(terms, axis=0)[None, :])
            step = np.where(done, 0.0, 1.0 / (beta @ weights))
        step = np.where(np.isfinite(step), step, 0.0)
        # damp wild steps from seeds near saddle points
        big = np.abs(step) > 2.0
        step[big] *= 2.0 / np.abs(step[big])
        u = u - step
        done |= np.abs(step) <= 1e-13 * (1.0 + np.abs(u))
        if done.all():
            break
    return u[done]


def _argument_count(log_q, beta, left, right, height) -> int:
    """Zeros inside ``[left, right] x (0, height)`` by the argument principle."""
    spread = float(beta.max() - beta.min())
    step = min(0.02, 0.1 / max(spread, np.abs(beta).max(), 1e-3))
    for _ in range(4):
        n_v = int(math.ceil(height / step)) + 1
        n_h = int(math.ceil((right - left) / step)) + 1
        ys = np.linspace(0.0, height, n_v)
        xs = np.linspace(right, left, n_h)
        path = np.concatenate([right + 1j * ys, xs[1:] + 1j * height, left + 1j * ys[::-1][1:]])
        phase = np.imag(_log_exp_poly(log_q, beta, path))
        jumps = np.angle(np.exp(1j * np.diff(phase)))
        if np.max(np.abs(jumps)) < 1.0:
            # the bottom edge is the real axis, where f2 > 0
            total = float(np.sum(jumps)) + float(np.angle(np.exp(1j * (phase[0] - phase[-1]))))
            return int(round(total / (2.0 * math.pi)))
        step /= 4.0
    raise NumericalError("argument-principle path too close to a zero of the eavesdropper density")


def density_zeros(dist: DiscreteDistribution, sigma2: float, height: float) -> np.ndarray:
    """Zeros of the eavesdropper output density with ``0 < Im <= height``.

    The density has no real zeros and its zeros come in conjugate pairs, so
    these are all the poles of ``(log f2)'`` that a contour shifted upward by
    at most ``height`` can cross. The count is cross-checked against the
    argument principle; a mismatch raises :class:`NumericalError`.
    """
    if dist.size == 1:
        return np.zeros(0, dtype=complex)
    log_q, beta = _exp_poly(dist, sigma2)
    lo, hi = _strip(log_q, beta)
    left, right = lo - 0.5, hi + 0.5
    spread = float(beta.max() - beta.min())
    spacing = min(0.5, 2.0 * math.pi / spread / 6.0)
    top = height + 2.0 * spacing + 1.0
    for _ in range(4):
        re = np.arange(left, right + spacing, spacing)
        im = np.arange(0.5 * spacing, top + spacing, spacing)
        seeds = (re[None, :] + 1j * im[:, None]).ravel()
        roots = _newton_zeros(log_q, beta, seeds)
        roots = roots[(roots.imag > 1e-9) & (roots.real >= left) & (roots.real <= right)]
        roots = _dedupe(roots)
        # close the contour in a gap between consecutive zeros above ``height``
        levels = np.linspace(height + 0.5 * spacing, top - 0.5 * spacing, 200)
        clearance = np.min(np.abs(levels[:, None] - roots.imag[None, :]), axis=1) if roots.size else levels
        cut = float(levels[np.argmax(clearance)])
        inside = roots[roots.imag < cut]
        if inside.size == _argument_count(log_q, beta, left, right, cut):
            inside = inside[inside.imag <= height]
            return inside[np.argsort(inside.imag)]
        spacing /= 2.0
    raise NumericalError("could not locate every complex zero of the eavesdropper density")


def _dedupe(roots: np.ndarray) -> np.ndarray:
    if roots.size == 0:
        return roots
    roots = roots[np.lexsort((roots.real, roots.imag))]
    keep = [roots[0]]
    for r in roots[1:]:
        if np.min(np.abs(np.array(keep[-8:]) - r)) > 1e-7 * (1.0 + abs(r)):
            keep.append(r)
    return np.array(keep)


class _PoleCache:
    def __init__(self):
        self._store: dict[tuple, tuple[float, np.ndarray]] = {}

    def get(self, dist, sigma2, height):
        key = (dist.points.tobytes(), dist.probs.tobytes(), float(sigma2))
        cached = self._store.get(key)
        if cached is None or cached[0] < height:
            reach = max(height, 2.0 * cached[0]) if cached else height
            self._store[key] = (reach, density_zeros(dist, sigma2, reach))
            if len(self._store) > 32:
                self._store.pop(next(iter(self._store)))
        return self._store[key][1]


_POLES = _PoleCache()


# ---------------------------------------------------------------------------
# complex extension of h


def _log_f1_and_slope(dist, sigma1, z):
    x = dist.points[:, None]
    comp = dist.log_probs[:, None] - (z[None, :] - x) ** 2 / (2.0 * sigma1**2) - 0.5 * math.log(2.0 * math.pi * sigma1**2)
    with np.errstate(divide="ignore"):
        slope = np.log((x - z[None, :]) / sigma1**2 + 0j)
    l1 = (logsumexp(comp.real, axis=0), logsumexp((comp + slope).real, axis=0))
    return clogsumexp(comp, axis=0), clogsumexp(comp + slope, axis=0), l1


def _log_gprime_direct(dist, channel, z, rule):
    nu = channel.nu
    a, b = z.real, z.imag
    t = rule.nodes[None, :]
    u = a[:, None] + nu * t
    x = dist.points
    comp = dist.log_probs[:, None, None] - (u[None] - x[:, None, None]) ** 2 / (2.0 * channel.sigma2**2)
    log_f2 = logsumexp(comp, axis=0) - 0.5 * math.log(2.0 * math.pi * channel.sigma2**2)
    kernel = (nu * t - 1j * b[:, None]) * np.exp(1j * b[:, None] * t / nu)
    growth = b**2 / (2.0 * nu**2) - 2.0 * math.log(nu)
    with np.errstate(divide="ignore"):
        total = np.log((kernel * log_f2) @ rule.weights + 0j) + growth
        l1 = np.log(np.abs(kernel * log_f2) @ rule.weights) + growth
    return total, l1


def _shift_heights(poles, z, nu):
    """Height of the integration line for each ``z``, kept away from nearby poles."""
    b = z.imag
    offsets = np.linspace(-1.5 * nu, 1.5 * nu, 61)
    cand = np.maximum(b[:, None] + offsets[None, :], 0.0)
    if poles.size == 0:
        return b.copy()
    near = np.abs(poles.real[None, :] - z.real[:, None]) <= 8.0 * nu
    gaps = np.abs(poles.imag[None, None, :] - cand[:, :, None])
    gaps = np.where(near[:, None, :], gaps, np.inf)
    clearance = np.minimum(gaps.min(axis=2), 2.0 * nu)
    score = clearance - 1e-3 * np.abs(cand - b[:, None])
    return cand[np.arange(z.size), np.argmax(score, axis=1)]


def _log_gprime_contour(dist, channel, z, rule, poles):
    nu, s2 = channel.nu, channel.sigma2
    heights = _shift_heights(poles, z, nu)
    delta = heights - z.imag
    t = rule.nodes[None, :]
    u = z.real[:, None] + nu * t + 1j * heights[:, None]
    log_q, beta = _exp_poly(dist, s2)
    terms = log_q[:, None, None] + beta[:, None, None] * u[None]
    weights = np.exp(terms - clogsumexp(terms, axis=0)[None])
    psi = (-u + np.tensordot(dist.points, weights, axes=(0, 0))) / s2**2
    kernel = np.exp(-1j * t * delta[:, None] / nu + delta[:, None] ** 2 / (2.0 * nu**2))
    line = (kernel * psi) @ rule.weights
    with np.errstate(divide="ignore"):
        logs = [np.log(line + 0j)[:, None]]
        l1 = [np.log(np.abs(kernel * psi) @ rule.weights)[:, None]]
    if poles.size:
        diff = poles[None, :] - z[:, None]
        res = math.log(2.0 * math.pi) + 0.5j * math.pi - diff**2 / (2.0 * nu**2) - 0.5 * math.log(2.0 * math.pi * nu**2)
        crossed = poles.imag[None, :] < heights[:, None]
        logs.append(np.where(crossed, res, -np.inf + 0j))
        l1.append(logs[-1].real)
    return clogsumexp(np.concatenate(logs, axis=1), axis=1), logsumexp(np.concatenate(l1, axis=1), axis=1)


def _log_h(dist, channel, z, rule, method):
    """``log h(z)`` for ``Im z >= 0`` with a fixed rule."""
    s1 = channel.sigma1
    log_f1, log_df1, (l1_f1, l1_df1) = _log_f1_and_slope(dist, s1, z)
    if method == "direct":
        log_g, l1_g = _log_gprime_direct(dist, channel, z, rule)
    else:
        height = float(z.imag.max()) + 1.5 * channel.nu if z.size else 0.0
        poles = _POLES.get(dist, channel.sigma2, height)
        log_g, l1_g = _log_gprime_contour(dist, channel, z, rule, poles)
    parts = np.stack([log_f1 + log_g, log_df1 + 1j * math.pi], axis=1)
    # sum of absolute values of every term entering h: the yardstick for
    # accuracy, since cancellation among them is what the check guards against
    scale = np.logaddexp(l1_f1 + l1_g, l1_df1)
    return 2.0 * math.log(s1) + clogsumexp(parts, axis=1), 2.0 * math.log(s1) + scale


def log_complex_h(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    z,
    rule: QuadratureRule | None = None,
    method: str = "auto",
    check: bool = True,
):
    """Principal-branch log of the entire extension of ``h`` (vectorized over ``z``).

    ``auto`` uses ``direct`` while its cancellation factor stays below
    ``exp(8)`` and ``contour`` beyond. With ``check`` the computation is
    repeated at double the quadrature order; a change above ``1e-6``
    relative to the sum of the absolute values of all terms entering ``h``
    raises :class:`NumericalError`. (Plain relative change is meaningless
    at the zeros of ``h``.)
    """
    if method not in H_METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {H_METHODS}")
    rule = rule or gauss_hermite(COMPLEX_ORDER)
    if rule.order < COMPLEX_ORDER:
        raise DomainError(f"complex quadrature needs order >= {COMPLEX_ORDER}, got {rule.order}")
    z_in = np.asarray(z, dtype=complex)
    flat = z_in.reshape(-1)
    lower = flat.imag < 0.0
    w = np.where(lower, np.conj(flat), flat)
    if method == "auto":
        direct = w.imag**2 / (2.0 * channel.nu_sq) <= DIRECT_GROWTH_LIMIT
    else:
        direct = np.full(w.shape, method == "direct")
    out = np.empty(w.shape, dtype=complex)
    for use_direct in (True, False):
        sel = direct == use_direct
        if not sel.any():
            continue
        route = "direct" if use_direct else "contour"
        value, _ = _log_h(dist, channel, w[sel], rule, route)
        if check:
            finer = gauss_hermite(min(2 * rule.order, 512))
            value_fine, scale = _log_h(dist, channel, w[sel], finer, route)
            with np.errstate(invalid="ignore", over="ignore"):
                change = np.abs(np.exp(value - scale) - np.exp(value_fine - scale))
            bad = ~(change <= ORDER_CHANGE_TOL)
            if bad.any():
                k = int(np.argmax(bad))
                raise NumericalError(
                    f"{route} evaluation of h at z={w[sel][k]!r} changed by {change[k]:.3g} "
                    f"(relative) when the quadrature order was doubled"
                )
            value = value_fine
        out[sel] = value
    out = np.where(lower, np.conj(out), out)
    return out.reshape(z_in.shape)[()] if z_in.ndim == 0 else out.reshape(z_in.shape)


def complex_h(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    z,
    rule: QuadratureRule | None = None,
    method: str = "auto",
    check: bool = True,
):
    """Entire extension of ``h`` at complex ``z``; overflows to ``inf`` far from the axis."""
    with np.errstate(over="ignore"):
        return np.exp(log_complex_h(dist, channel, z, rule, method, check))


# ---------------------------------------------------------------------------
# maximum modulus


def _sector(dist: DiscreteDistribution) -> float:
    # conjugate symmetry always; an odd h (symmetric input) adds z -> -z
    return 0.5 * math.pi if dist.is_symmetric() else math.pi


def circle_profile(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    radius: float,
    rule: QuadratureRule | None = None,
    samples: int = CIRCLE_SAMPLES,
) -> tuple[np.ndarray, np.ndarray]:
    """``(theta, log|h(radius e^{i theta})|)`` at ``samples`` equispaced angles on the full circle."""
    theta = 2.0 * math.pi * np.arange(samples) / samples
    values = np.real(log_complex_h(dist, channel, radius * np.exp(1j * theta), rule))
    return theta, values


def log_max_modulus_on_circle(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    radius: float,
    rule: QuadratureRule | None = None,
    samples: int = CIRCLE_SAMPLES,
) -> float:
    """``log max_{|z| = radius} |h(z)|``; equals the disk maximum by the maximum-modulus principle."""
    if not radius > 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    if samples < 256:
        raise DomainError(f"need at least 256 samples, got {samples}")
    sector = _sector(dist)
    step = 2.0 * math.pi / samples
    theta = np.arange(0.0, sector + 0.5 * step, step)
    values = np.real(log_complex_h(dist, channel, radius * np.exp(1j * theta), rule))
    idx = local_maxima(values)
    idx = idx[np.argsort(values[idx])[::-1][:3]]
    best = float(values[idx[0]])

    def f(th):
        return float(np.real(log_complex_h(dist, channel, radius * np.exp(1j * th), rule)))

    for i in idx:
        _, v = golden_max(f, max(theta[i] - step, 0.0), min(theta[i] + step, sector), 1e-9)
        best = max(best, v)
    return best


def max_modulus_on_circle(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    radius: float,
    rule: QuadratureRule | None = None,
    samples: int = CIRCLE_SAMPLES,
) -> float:
    """``max_{|z| = radius} |h(z)|``; ``inf`` once it leaves the float range."""
    log_value = log_max_modulus_on_circle(dist, channel, radius, rule, samples)
    return math.exp(log_value) if log_value < 709.0 else math.inf


@dataclass
class EmpiricalBound:
    """Zero-count bound for ``h`` on ``[-radius, radius]`` from computed maximum moduli."""

    radius: float
    value: float
    s: float
    t: float
    value_e1: float

    def to_dict(self) -> dict:
        return {"radius": self.radius, "value": self.value, "s": self.s, "t": self.t, "value_e1": self.value_e1}


def empirical_count_bound(
    dist: DiscreteDistribution,
    channel: ChannelParams,
    radius: float,
    rule: QuadratureRule | None = None,
    samples: int = CIRCLE_SAMPLES,
) -> EmpiricalBound:
    """Minimize the two-disk zero-count bound over the ``(s, t)`` grid using true moduli."""
    cache: dict[float, float] = {}

    def log_mod(r):
        if r not in cache:
            cache[r] = log_max_modulus_on_circle(dist, channel, r, rule, samples)
        return cache[r]

    value, s, t = tijdeman_grid_bound(log_mod, radius, log_scale=True)
    value_e1 = tijdeman_bound(log_mod, radius, E, 1.0, log_scale=True)
    return EmpiricalBound(radius=float(radius), value=value, s=s, t=t, value_e1=value_e1)
