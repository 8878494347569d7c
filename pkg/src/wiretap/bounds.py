"""Closed-form capacity bounds, radii and support-size bounds.

All quantities are explicit functions of ``(sigma1, sigma2, A)`` and a
plug-in value ``cs`` of the secrecy capacity. When no solve is available the
average-power capacity is used as ``cs``; every radius below is increasing in
``cs``, so the resulting bounds stay valid.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .channel import ChannelParams
from .errors import DomainError

E = math.e
#: ``s*t + s + t`` at ``s = e, t = 1``.
OUTER_FACTOR = 2.0 * E + 1.0

CS_SOURCES = ("solved", "upper_bound_eq19")

# Tijdeman (s, t) search grid
S_GRID = np.exp(np.linspace(0.1, 3.0, 20))
T_GRID = np.geomspace(0.25, 4.0, 16)


def avg_power_capacity_bound(channel: ChannelParams) -> float:
    """Secrecy capacity under the average-power constraint ``E[X^2] <= A^2``.

    Upper-bounds the amplitude-constrained secrecy capacity.
    """
    a2 = channel.amp**2
    return 0.5 * (math.log1p(a2 / channel.sigma1**2) - math.log1p(a2 / channel.sigma2**2))


def epi_lower_bound(channel: ChannelParams) -> float:
    """Rate of a uniform input on ``[-A, A]`` bounded with the entropy power inequality."""
    a2 = channel.amp**2
    snr = (2.0 * a2 / (math.pi * E * channel.sigma1**2)) / (1.0 + a2 / channel.sigma2**2)
    return 0.5 * math.log1p(snr)


def _check_cs(channel: ChannelParams, cs: float) -> float:
    cs = float(cs)
    upper = avg_power_capacity_bound(channel)
    if not math.isfinite(cs) or cs < 0.0 or cs > upper + 1e-6:
        raise DomainError(
            f"cs={cs!r} outside [0, {upper!r}]: a secrecy capacity cannot exceed the "
            "average-power bound"
        )
    return cs


def _radius_terms(channel: ChannelParams, cs: float) -> tuple[float, float, float, float]:
    s1sq, s2sq = channel.sigma1**2, channel.sigma2**2
    curv = 1.0 / s1sq - 1.0 / s2sq
    offset = channel.nu_sq / s2sq + 2.0 * cs
    return s1sq, s2sq, curv, offset


def radius_R(channel: ChannelParams, cs: float, variant: str = "exact") -> float:
    """Radius beyond which ``g + log(sigma2/sigma1) - cs`` is strictly positive.

    ``exact`` is the root of the quadratic lower bound on ``g``; ``relaxed``
    splits its square root and equals ``A*d1 + d2``.
    """
    cs = _check_cs(channel, cs)
    amp = channel.amp
    s1sq, s2sq, curv, offset = _radius_terms(channel, cs)
    if variant == "exact":
        disc = 4.0 * amp**2 / (s1sq * s2sq) + curv * offset
        return (amp * (1.0 / s1sq + 1.0 / s2sq) + math.sqrt(disc)) / curv
    if variant == "relaxed":
        s1, s2 = channel.sigma1, channel.sigma2
        return amp * (s2 + s1) / (s2 - s1) + math.sqrt(offset / curv)
    raise ValueError(f"unknown radius variant {variant!r}; expected 'exact' or 'relaxed'")


@dataclass(frozen=True)
class CoefficientTable:
    """Constants of the explicit support bound for one channel and ``cs``."""

    d1: float
    d2: float
    a1: float
    a2: float
    a3: float
    c1: float
    c2: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    b6: float
    b7: float
    rho: float
    kappa1: float
    cs_used: float
    cs_source: str

    def to_dict(self) -> dict:
        return asdict(self)


def coefficient_table(channel: ChannelParams, cs: float, cs_source: str = "solved") -> CoefficientTable:
    if cs_source not in CS_SOURCES:
        raise ValueError(f"cs_source must be one of {CS_SOURCES}, got {cs_source!r}")
    cs = _check_cs(channel, cs)
    s1, s2 = channel.sigma1, channel.sigma2
    s1sq, s2sq, curv, offset = _radius_terms(channel, cs)
    nu = channel.nu
    k = OUTER_FACTOR
    d1 = (s2 + s1) / (s2 - s1)
    d2 = math.sqrt(offset / curv)
    a1 = 3.0 * s1sq / (s2sq * nu)
    a2 = math.sqrt(2.0) * s1sq / (s2 * nu) + 2.0
    a3 = s1sq / nu * math.sqrt(math.log(2.0 * math.pi * s2sq) ** 2 + 24.0 * channel.nu_sq**2 / s2sq**2 + math.pi**2)
    c1 = 1.0 - s1sq / s2sq
    c2 = 1.0 + s1sq / s2sq
    b1 = k**2 * d1**2 + (d1 + 1.0) ** 2
    return CoefficientTable(
        d1=d1,
        d2=d2,
        a1=a1,
        a2=a2,
        a3=a3,
        c1=c1,
        c2=c2,
        b1=b1,
        b2=(k**2 + 1.0) * d2**2 / s1sq,
        b3=2.0 * k**2 * a1 * d1**2,
        b4=k * d1 * a2,
        b5=2.0 * k**2 * a1 * d2**2 + k * a2 * d2 + a3,
        b6=c1 * d1 - c2,
        b7=c1 * d2,
        rho=b1,
        kappa1=math.log(s2 / s1) - cs,
        cs_used=cs,
        cs_source=cs_source,
    )


def explicit_support_bound(channel: ChannelParams, cs: float, table: CoefficientTable | None = None) -> tuple[float, float]:
    """``(leading, full)`` explicit upper bounds on the number of zeros.

    ``leading = rho A^2 / sigma1^2``; ``full`` adds the constant and the
    logarithmic remainder with every coefficient kept.
    """
    t = table or coefficient_table(channel, cs)
    amp, s1sq = channel.amp, channel.sigma1**2
    leading = t.rho * amp**2 / s1sq
    full = t.b1 * amp**2 / s1sq + t.b2 + math.log((t.b3 * amp**2 + t.b4 * amp + t.b5) / (t.b6 * amp + t.b7))
    return leading, full


def lemma4_upper_modulus(channel: ChannelParams, B: float) -> float:
    """Claimed upper bound on ``max_{|z| <= B} |h(z)|`` for ``B >= A``.

    Overflows to ``inf`` for large ``B``; use :func:`log_lemma4_upper_modulus`.
    """
    return math.exp(log_lemma4_upper_modulus(channel, B))


def log_lemma4_upper_modulus(channel: ChannelParams, B: float) -> float:
    if B < channel.amp:
        raise DomainError(f"modulus upper bound needs B >= A = {channel.amp}, got {B}")
    t = coefficient_table(channel, 0.0)
    s1sq = channel.sigma1**2
    return B**2 / (2.0 * s1sq) - 0.5 * math.log(2.0 * math.pi * s1sq) + math.log(t.a1 * B**2 + t.a2 * B + t.a3)


def lemma5_threshold(channel: ChannelParams) -> float:
    """Smallest ``B`` for which the modulus lower bound applies."""
    return channel.amp * (channel.sigma2**2 + channel.sigma1**2) / channel.nu_sq


def lemma5_lower_modulus(channel: ChannelParams, B: float) -> float:
    """Lower bound ``|h(B)| >= (c1 B - c2 A) exp(-(B + A)^2 / (2 sigma1^2)) / sqrt(2 pi sigma1^2)``.

    The factor ``sigma1^2`` of ``h`` is already folded into ``c1`` and ``c2``.
    Zero exactly at the threshold, positive beyond it.
    """
    return math.exp(log_lemma5_lower_modulus(channel, B))


def log_lemma5_lower_modulus(channel: ChannelParams, B: float) -> float:
    if B < lemma5_threshold(channel) * (1.0 - 1e-12):
        raise DomainError(f"modulus lower bound needs B >= {lemma5_threshold(channel)}, got {B}")
    t = coefficient_table(channel, 0.0)
    s1sq = channel.sigma1**2
    factor = t.c1 * B - t.c2 * channel.amp
    if factor <= 0.0:
        return -math.inf
    return math.log(factor) - (B + channel.amp) ** 2 / (2.0 * s1sq) - 0.5 * math.log(2.0 * math.pi * s1sq)


def tijdeman_bound(
    max_mod: Callable[[float], float],
    radius: float,
    s: float = E,
    t: float = 1.0,
    log_scale: bool = False,
) -> float:
    """Zero-count bound in the disk ``|z| <= radius`` from two maximum moduli.

    ``max_mod(r)`` returns ``max_{|z| <= r} |f(z)|``, or its logarithm when
    ``log_scale`` is set (needed once the moduli overflow).
    """
    if not s > 1.0 or not t > 0.0 or not radius > 0.0:
        raise DomainError(f"need s > 1, t > 0, radius > 0; got s={s}, t={t}, radius={radius}")
    outer, inner = max_mod((s * t + s + t) * radius), max_mod(t * radius)
    if log_scale:
        log_outer, log_inner = float(outer), float(inner)
        if not (math.isfinite(log_outer) and math.isfinite(log_inner)):
            raise DomainError("log maximum modulus must be finite (f must not vanish identically)")
    else:
        if not (outer > 0.0 and inner > 0.0):
            raise DomainError("maximum modulus must be positive (f must not vanish identically)")
        log_outer, log_inner = math.log(outer), math.log(inner)
    return (log_outer - log_inner) / math.log(s)


def tijdeman_grid_bound(
    max_mod: Callable[[float], float],
    radius: float,
    log_scale: bool = False,
    s_grid=S_GRID,
    t_grid=T_GRID,
) -> tuple[float, float, float]:
    """Minimize :func:`tijdeman_bound` over an ``(s, t)`` grid; ``(s, t) = (e, 1)`` is always included.

    Returns ``(value, s, t)``. Moduli are cached per radius.
    """
    cache: dict[float, float] = {}

    def cached(r):
        if r not in cache:
            cache[r] = max_mod(r)
        return cache[r]

    pairs = [(E, 1.0)] + [(float(s), float(t)) for s in s_grid for t in t_grid]
    best = (math.inf, E, 1.0)
    for s, t in pairs:
        value = tijdeman_bound(cached, radius, s, t, log_scale)
        if value < best[0]:
            best = (value, s, t)
    return best


def support_lower_bound(channel: ChannelParams, i_x_y2: float = 0.0) -> int:
    """Smallest support size compatible with the uniform-input rate bound.

    ``i_x_y2`` is the eavesdropper's mutual information at the optimum
    (nats); zero gives the trivial variant.
    """
    if i_x_y2 < 0.0:
        raise DomainError(f"mutual information must be nonnegative, got {i_x_y2}")
    a2 = channel.amp**2
    snr = (2.0 * a2 / (math.pi * E * channel.sigma1**2)) / (1.0 + a2 / channel.sigma2**2)
    value = math.sqrt(1.0 + snr) * math.exp(i_x_y2)
    # guard against 2.0000000000000004 -> 3
    return max(1, math.ceil(value - 1e-12))
