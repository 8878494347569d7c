import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import norm

from wiretap.bounds import avg_power_capacity_bound, coefficient_table, radius_R
from wiretap.channel import ChannelParams, DiscreteDistribution
from wiretap.functionals import (
    EPS_KKT,
    KktReport,
    g_function,
    g_prime,
    h_function,
    kkt_report,
    secrecy_information,
    xi_function,
)

from conftest import AMP_GRID, SIGMA2_GRID, random_instance, solved


def trapezoid_secrecy(points, probs, s1, s2, lo=-12.0, hi=12.0, n=200_001):
    """Oracle: differential entropies by trapezoid rule, no quadrature code from the package."""
    y = np.linspace(lo, hi, n)

    def info(s):
        f = (probs[None, :] * norm.pdf(y[:, None], loc=points[None, :], scale=s)).sum(axis=1)
        logf = np.log(np.where(f > 0, f, 1.0))
        return -np.trapezoid(f * logf, y) - 0.5 * math.log(2 * math.pi * math.e * s * s)

    return info(s1) - info(s2)


def test_point_mass_has_zero_secrecy(point_mass, unit_channel):
    assert secrecy_information(point_mass, unit_channel) == pytest.approx(0.0, abs=1e-10)


def test_pair_against_trapezoid_oracle(pair):
    ch = ChannelParams(1.0, 2.0, 1.0)
    value = secrecy_information(pair, ch)
    oracle = trapezoid_secrecy(pair.points, pair.probs, 1.0, 2.0, lo=-30.0, hi=30.0, n=600_001)
    assert 0.0 < value < 0.235004
    assert value == pytest.approx(oracle, abs=1e-8)
    # the narrower window still brackets the same value
    assert value == pytest.approx(trapezoid_secrecy(pair.points, pair.probs, 1.0, 2.0), abs=1e-6)


def test_nearly_equal_noises_leave_no_secrecy():
    rng = np.random.default_rng(11)
    for _ in range(10):
        _, d = random_instance(rng)
        s2 = rng.uniform(0.5, 2.0)
        ch = ChannelParams(0.999999 * s2, s2, float(np.max(np.abs(d.points))) + 1.0)
        value = secrecy_information(d, ch)
        assert value <= 1e-4
        oracle = trapezoid_secrecy(d.points, d.probs, ch.sigma1, ch.sigma2, lo=-20 * s2 - 5, hi=20 * s2 + 5)
        assert value == pytest.approx(oracle, abs=1e-7)


def test_point_mass_closed_forms(point_mass, unit_channel):
    y = np.linspace(-3, 3, 13)
    assert_allclose(g_function(point_mass, unit_channel, y), -math.log(2) + 0.375 * y**2 - 0.375, atol=1e-12)
    assert g_function(point_mass, unit_channel, 0.0) == pytest.approx(-1.0681472, abs=1e-7)
    assert g_function(point_mass, unit_channel, 2.0) == pytest.approx(0.4318528, abs=1e-7)
    assert_allclose(g_function(point_mass, unit_channel, [0.0, 2.0]),
                    [-math.log(2) - 0.375, -math.log(2) + 1.125], atol=1e-9)
    for method in ("kl_difference", "smoothed_g"):
        assert xi_function(point_mass, unit_channel, 2.0, method=method) == pytest.approx(1.5, abs=1e-8)
        assert xi_function(point_mass, unit_channel, 0.0, method=method) == pytest.approx(0.0, abs=1e-10)
    for method in ("conditional_means", "n_weighted"):
        assert g_prime(point_mass, unit_channel, 1.0, method=method) == pytest.approx(0.75, abs=1e-8)
    assert h_function(point_mass, unit_channel, 1.0) == pytest.approx(0.75 * norm.pdf(1.0), abs=1e-12)
    assert h_function(point_mass, unit_channel, 1.0) == pytest.approx(0.1814780, abs=1e-7)


def test_symmetric_inputs_give_even_g_and_odd_h():
    d = DiscreteDistribution.create([-1.2, 0.0, 1.2], [0.3, 0.4, 0.3])
    ch = ChannelParams(1.0, 2.5, 1.2)
    y = np.linspace(0.0, 6.0, 25)
    assert_allclose(g_function(d, ch, y), g_function(d, ch, -y), atol=1e-10)
    assert_allclose(h_function(d, ch, y), -h_function(d, ch, -y), atol=1e-10)
    assert abs(h_function(d, ch, 0.0)) <= 1e-10


def test_representations_agree_on_random_inputs():
    rng = np.random.default_rng(2024)
    xi_gap = gp_gap = 0.0
    for _ in range(100):
        ch, d = random_instance(rng)
        x = rng.uniform(-ch.amp, ch.amp)
        y = rng.uniform(-ch.amp - 3 * ch.sigma1, ch.amp + 3 * ch.sigma1)
        xi_gap = max(xi_gap, abs(xi_function(d, ch, x) - xi_function(d, ch, x, method="smoothed_g")))
        gp_gap = max(gp_gap, abs(g_prime(d, ch, y) - g_prime(d, ch, y, method="n_weighted")))
    assert xi_gap <= 1e-7
    assert gp_gap <= 1e-7


def test_g_prime_matches_finite_differences():
    rng = np.random.default_rng(8)
    for _ in range(20):
        ch, d = random_instance(rng)
        y = np.linspace(-ch.amp - 2 * ch.sigma1, ch.amp + 2 * ch.sigma1, 9)
        step = 1e-5
        fd = (g_function(d, ch, y + step) - g_function(d, ch, y - step)) / (2 * step)
        assert_allclose(g_prime(d, ch, y), fd, atol=1e-5)


def test_secrecy_is_the_average_of_xi():
    rng = np.random.default_rng(9)
    for _ in range(30):
        ch, d = random_instance(rng)
        xi = np.atleast_1d(xi_function(d, ch, d.points))
        assert float(np.dot(d.probs, xi)) == pytest.approx(secrecy_information(d, ch), abs=1e-7)


def test_secrecy_respects_average_power_bound():
    rng = np.random.default_rng(10)
    for _ in range(50):
        ch, d = random_instance(rng)
        value = secrecy_information(d, ch)
        assert -1e-10 <= value <= avg_power_capacity_bound(ch) + 1e-6


def test_kkt_flags_point_mass(point_mass, unit_channel):
    report = kkt_report(point_mass, unit_channel)
    assert report.gap == pytest.approx(0.375, abs=1e-8)
    assert abs(report.argmax_x) == pytest.approx(1.0)
    assert not report.is_optimal()


def test_kkt_small_amplitude_pair():
    d = DiscreteDistribution(np.array([-0.1, 0.1]), np.array([0.5, 0.5]))
    assert kkt_report(d, ChannelParams(1.0, 2.0, 0.1)).gap <= 1e-3


def test_kkt_rejects_coarse_grid(point_mass, unit_channel):
    with pytest.raises(ValueError):
        kkt_report(point_mass, unit_channel, grid_size=100)


def test_kkt_report_json_round_trip(pair, unit_channel):
    report = kkt_report(pair, unit_channel)
    again = KktReport.from_dict(json.loads(json.dumps(report.to_dict())))
    assert again.to_dict() == report.to_dict()


@pytest.mark.parametrize("sigma2", SIGMA2_GRID)
@pytest.mark.parametrize("amp", AMP_GRID)
def test_solved_instances(sigma2, amp):
    result = solved(sigma2, amp)
    ch, d = ChannelParams(1.0, sigma2, amp), result.distribution
    report = kkt_report(d, ch)
    assert report.gap <= EPS_KKT
    assert report.max_residual() <= EPS_KKT
    cs = report.secrecy_info
    radius = radius_R(ch, cs)
    y = np.linspace(radius, radius + ch.sigma1, 41)
    assert np.all(h_function(d, ch, y) > 0)
    # g + kappa stays positive beyond the radius on both sides
    kappa = coefficient_table(ch, cs).kappa1
    far = np.concatenate([np.linspace(-2 * radius, -radius, 50, endpoint=False), np.linspace(radius, 2 * radius, 50)[1:]])
    assert np.all(g_function(d, ch, far) + kappa > 0)
