from functools import lru_cache

import numpy as np
import pytest

from wiretap.analytic import count_zeros_g_plus_kappa, count_zeros_xi_minus_cs, empirical_count_bound
from wiretap.bounds import radius_R
from wiretap.channel import ChannelParams, DiscreteDistribution
from wiretap.solver import solve

SIGMA2_GRID = (1.5, 2.0, 4.0)
AMP_GRID = (0.25, 1.0, 2.0)


@lru_cache(maxsize=None)
def solved(sigma2: float, amp: float, sigma1: float = 1.0):
    """Solve once per session; several test modules share the results."""
    return solve(ChannelParams(sigma1, sigma2, amp))


@lru_cache(maxsize=None)
def chain(sigma2: float, amp: float):
    """Zero counts and the empirical two-disk bound of a solved instance, cached per session."""
    channel = ChannelParams(1.0, sigma2, amp)
    result = solved(sigma2, amp)
    cs = result.secrecy_capacity
    radius = radius_R(channel, cs, "relaxed")
    return {
        "channel": channel,
        "result": result,
        "cs": cs,
        "radius": radius,
        "xi_count": count_zeros_xi_minus_cs(result.distribution, channel, cs),
        "g_count": count_zeros_g_plus_kappa(result.distribution, channel, cs),
        "empirical": empirical_count_bound(result.distribution, channel, radius),
    }


@pytest.fixture
def unit_channel():
    return ChannelParams(1.0, 2.0, 1.0)


@pytest.fixture
def point_mass():
    return DiscreteDistribution.point_mass(0.0)


@pytest.fixture
def pair():
    return DiscreteDistribution(np.array([-1.0, 1.0]), np.array([0.5, 0.5]))


def random_instance(rng, max_ratio=5.0, max_amp=4.0, max_points=5):
    """Random channel with ``A / sigma1 <= max_amp`` and a random input on ``[-A, A]``."""
    s1 = rng.uniform(0.5, 2.0)
    s2 = s1 * rng.uniform(1.05, max_ratio)
    amp = s1 * rng.uniform(0.1, max_amp)
    n = int(rng.integers(1, max_points + 1))
    pts = np.sort(rng.uniform(-amp, amp, n))
    probs = rng.dirichlet(np.ones(n))
    return ChannelParams(s1, s2, amp), DiscreteDistribution.create(pts, probs)
