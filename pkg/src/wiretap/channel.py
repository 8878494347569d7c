"""Channel parameters, discrete inputs and stable mixture-density evaluation.

Both receivers see the input through additive Gaussian noise, so every output
density is a finite Gaussian mixture

    f_Y(y) = sum_i p_i phi_sigma(y - x_i).

All evaluations go through log-sum-exp with a max shift: at |y| of a few times
the amplitude the raw mixture underflows long before its logarithm does.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ValidationError

LOG_2PI = math.log(2.0 * math.pi)

#: Masses below this value (after normalization) are dropped.
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Scalar Gaussian wiretap channel ``Y1 = X + N1``, ``Y2 = X + N2``, ``|X| <= amp``.

    ``sigma1`` is the legitimate receiver's noise standard deviation and
    ``sigma2`` the eavesdropper's. Only the degraded case ``sigma1 < sigma2``
    is accepted; otherwise the secrecy capacity is zero.
    """

    sigma1: float
    sigma2: float
    amp: float
    nu_sq: float = field(init=False)

    def __post_init__(self):
        for name in ("sigma1", "sigma2", "amp"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValidationError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.sigma1 >= self.sigma2:
            raise ValidationError(
                f"sigma1={self.sigma1} >= sigma2={self.sigma2}: the eavesdropper is not "
                "noisier than the legitimate receiver, so the secrecy capacity is zero "
                "(zero-capacity regime is not handled)"
            )
        object.__setattr__(self, "nu_sq", self.sigma2**2 - self.sigma1**2)

    @property
    def nu(self) -> float:
        """Standard deviation of the degrading noise ``N ~ N(0, sigma2^2 - sigma1^2)``."""
        return math.sqrt(self.nu_sq)

    def to_dict(self) -> dict:
        return {"sigma1": self.sigma1, "sigma2": self.sigma2, "amp": self.amp}

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelParams":
        try:
            return cls(data["sigma1"], data["sigma2"], data["amp"])
        except KeyError as exc:
            raise ValidationError(f"channel is missing field {exc.args[0]!r}") from None


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finitely supported input law: ascending ``points`` with masses ``probs``.

    Use :meth:`create` to build one from raw data; it sorts, normalizes and
    drops negligible masses. The direct constructor only validates.
    """

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1)
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if points.size == 0:
            raise ValidationError("distribution must have at least one mass point")
        if points.shape != probs.shape:
            raise ValidationError(
                f"points and probs differ in length ({points.size} vs {probs.size})"
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(probs))):
            raise ValidationError("points and probs must be finite")
        if np.any(np.diff(points) <= 0.0):
            raise ValidationError("points must be strictly increasing")
        if np.any(probs < 0.0):
            raise ValidationError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {probs.sum()!r}, not 1")
        points.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def create(cls, points: Iterable[float], probs: Iterable[float]) -> "DiscreteDistribution":
        """Sort, normalize, clamp masses below :data:`PROB_FLOOR` and renormalize."""
        points = np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=float)
        probs = np.asarray(list(probs) if not isinstance(probs, np.ndarray) else probs, dtype=float)
        if points.shape != probs.shape:
            raise ValidationError("points and probs differ in length")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite and nonnegative")
        total = probs.sum()
        if total <= 0.0:
            raise ValidationError("probabilities sum to zero")
        probs = probs / total
        keep = probs >= PROB_FLOOR
        points, probs = points[keep], probs[keep]
        order = np.argsort(points, kind="stable")
        points, probs = points[order], probs[order]
        # the float sum of the kept masses can be off by a few ulps
        probs = probs / probs.sum()
        return cls(points, probs)

    @classmethod
    def point_mass(cls, x: float = 0.0) -> "DiscreteDistribution":
        return cls(np.array([float(x)]), np.array([1.0]))

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def log_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.probs)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(
            np.allclose(self.points, -self.points[::-1], rtol=0.0, atol=tol)
            and np.allclose(self.probs, self.probs[::-1], rtol=0.0, atol=tol)
        )

    def check(self, channel: ChannelParams, min_gap: float | None = None) -> "DiscreteDistribution":
        """Validate against a channel: support inside ``[-A, A]`` and gaps >= ``min_gap``."""
        slack = 1e-12 * channel.amp
        if np.any(np.abs(self.points) > channel.amp + slack):
            raise ValidationError(
                f"mass point outside [-{channel.amp}, {channel.amp}]: "
                f"{self.points[np.abs(self.points) > channel.amp + slack].tolist()}"
            )
        if min_gap is not None and self.size > 1 and np.min(np.diff(self.points)) < min_gap:
            raise ValidationError(f"mass points closer than the merge threshold {min_gap}")
        return self

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "probs": self.probs.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteDistribution":
        try:
            points, probs = data["points"], data["probs"]
        except (KeyError, TypeError):
            raise ValidationError('distribution JSON needs "points" and "probs"') from None
        if list(points) != sorted(points):
            raise ValidationError("distribution points must be listed in ascending order")
        return cls(np.asarray(points, dtype=float), np.asarray(probs, dtype=float))

    @classmethod
    def from_json(cls, text: str) -> "DiscreteDistribution":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"DiscreteDistribution(points={self.points.tolist()}, probs={self.probs.tolist()})"


@dataclass(frozen=True)
class DensityEval:
    """Output density at one point: value, log-value and first derivative."""

    value: float
    log_value: float
    derivative: float


def _component_logs(points, log_probs, sigma, y):
    """``log p_i + log phi_sigma(y - x_i)`` with the mixture index last."""
    y = np.asarray(y, dtype=float)
    d = y[..., None] - points
    return log_probs - 0.5 * (d / sigma) ** 2 - math.log(sigma) - 0.5 * LOG_2PI


def log_mixture_density(points, log_probs, sigma, y) -> np.ndarray:
    """Vectorized ``log sum_i p_i phi_sigma(y - x_i)``; never logs an underflowed sum."""
    comp = _component_logs(points, log_probs, sigma, y)
    m = comp.max(axis=-1)
    return m + np.log(np.exp(comp - m[..., None]).sum(axis=-1))


def mixture_posterior_mean(points, log_probs, sigma, y) -> np.ndarray:
    """Vectorized ``E[X | X + sigma Z = y]`` using shared max-shifted exponents."""
    comp = _component_logs(points, log_probs, sigma, y)
    w = np.exp(comp - comp.max(axis=-1, keepdims=True))
    return (w * points).sum(axis=-1) / w.sum(axis=-1)


def as_output(value):
    """Return a Python float for 0-d results, the array otherwise."""
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def log_density(dist: DiscreteDistribution, sigma: float, y):
    """Log output density through noise of standard deviation ``sigma`` (vectorized)."""
    return as_output(log_mixture_density(dist.points, dist.log_probs, sigma, y))


def density(dist: DiscreteDistribution, sigma: float, y):
    return as_output(np.exp(log_density(dist, sigma, y)))


def density_derivative(dist: DiscreteDistribution, sigma: float, y):
    """``f'(y) = sum_i p_i (x_i - y)/sigma^2 phi_sigma(y - x_i)`` (vectorized)."""
    y = np.asarray(y, dtype=float)
    return as_output(density(dist, sigma, y) * (posterior_mean(dist, sigma, y) - y) / sigma**2)


def output_density(dist: DiscreteDistribution, sigma: float, y: float) -> DensityEval:
    """Density, log-density and derivative of ``X + N(0, sigma^2)`` at ``y``."""
    if not isinstance(dist, DiscreteDistribution):
        raise ValidationError("output_density needs a DiscreteDistribution")
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValidationError(f"sigma must be positive, got {sigma!r}")
    y = float(y)
    log_value = float(log_density(dist, sigma, y))
    value = math.exp(log_value)
    mean = float(posterior_mean(dist, sigma, y))
    return DensityEval(value=value, log_value=log_value, derivative=value * (mean - y) / sigma**2)


def posterior_mean(dist: DiscreteDistribution, sigma: float, y):
    """Conditional mean ``E[X | Y = y]`` for ``Y = X + N(0, sigma^2)``.

    The result always lies in ``[min(points), max(points)]``.
    """
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValidationError(f"sigma must be positive, got {sigma!r}")
    out = mixture_posterior_mean(dist.points, dist.log_probs, sigma, y)
    return as_output(np.clip(out, dist.points[0], dist.points[-1]))
