import json
import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.optimize import minimize_scalar

from wiretap.analytic import (
    ZeroCount,
    complex_h,
    count_sign_changes,
    count_zeros_g_plus_kappa,
    log_max_modulus_on_circle,
    max_modulus_on_circle,
)
from wiretap.bounds import lemma4_upper_modulus, lemma5_lower_modulus
from wiretap.channel import ChannelParams, DiscreteDistribution
from wiretap.errors import DomainError, NumericalError
from wiretap.functionals import h_function

from conftest import chain, solved

UNIT = ChannelParams(1.0, 2.0, 1.0)


def point_mass_h(z):
    return 0.75 * z * np.exp(-z * z / 2) / math.sqrt(2 * math.pi)


def test_parabola_has_two_crossings():
    count = count_sign_changes(lambda x: x * x - 1, -2, 2)
    assert count.sign_changes == 2
    assert count.tangential_suspects == []
    assert_allclose(count.crossings, [-1, 1], atol=1e-12)


def test_sine_has_three_crossings():
    count = count_sign_changes(np.sin, 0.1, 10)
    assert count.sign_changes == 3
    assert_allclose(count.crossings, [math.pi, 2 * math.pi, 3 * math.pi], atol=1e-12)


def test_square_touches_zero():
    count = count_sign_changes(lambda x: x * x, -1, 1)
    assert count.sign_changes == 0
    assert len(count.tangential_suspects) == 1
    assert abs(count.tangential_suspects[0]) < 1e-3


def test_jump_is_not_a_crossing():
    assert count_sign_changes(np.sign, -1.0, 1.3).sign_changes == 0


def test_counting_errors():
    with pytest.raises(NumericalError, match="x="), np.errstate(divide="ignore", invalid="ignore"):
        count_sign_changes(lambda x: np.log(x), -1, 1)
    with pytest.raises(DomainError):
        count_sign_changes(np.sin, 1, 1)
    with pytest.raises(DomainError):
        count_sign_changes(np.sin, 0, 1, grid_size=50)


def test_zero_count_json_round_trip():
    count = count_sign_changes(np.sin, 0.1, 10)
    assert ZeroCount.from_dict(json.loads(json.dumps(count.to_dict()))) == count


def test_point_mass_g_plus_kappa_zeros(point_mass):
    count = count_zeros_g_plus_kappa(point_mass, UNIT, 0.0)
    assert count.sign_changes == 2
    assert_allclose(count.crossings, [-1, 1], atol=1e-10)
    assert count.checks["positive_outside"]


@pytest.mark.parametrize("amp", [1.0, 2.0])
def test_symmetric_input_gives_symmetric_zeros(amp):
    result = solved(2.0, amp)
    count = count_zeros_g_plus_kappa(result.distribution, ChannelParams(1.0, 2.0, amp), result.secrecy_capacity)
    has_center = any(abs(x) < 1e-3 for x in count.tangential_suspects)
    assert count.sign_changes % 2 == 0 or has_center
    assert_allclose(count.crossings, -np.array(count.crossings[::-1]), atol=1e-8)


def test_complex_h_matches_real_h():
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        d = DiscreteDistribution.create(np.sort(rng.uniform(-2, 2, n)), rng.dirichlet(np.ones(n)))
        ch = ChannelParams(1.0, rng.uniform(1.2, 5.0), 2.0)
        y = np.linspace(-6, 6, 25)
        assert_allclose(complex_h(d, ch, y.astype(complex)), h_function(d, ch, y), atol=1e-7, rtol=0)


def test_conjugate_symmetry():
    d = DiscreteDistribution.create([-1.0, 0.3, 1.7], [0.2, 0.5, 0.3])
    ch = ChannelParams(1.0, 1.7, 2.0)
    z = np.array([0.4 + 0.9j, -1.5 + 2.0j, 2.2 + 5.0j, 0.1 + 9.0j])
    assert_allclose(complex_h(d, ch, np.conj(z)), np.conj(complex_h(d, ch, z)), rtol=1e-9)


def test_point_mass_closed_form(point_mass):
    assert complex_h(point_mass, UNIT, 1j) == pytest.approx(0.75j * math.exp(0.5) / math.sqrt(2 * math.pi), rel=1e-10)
    z = np.array([2 + 3j, 0.5 + 7j, 10j, -3 + 0.2j])
    assert_allclose(complex_h(point_mass, UNIT, z), point_mass_h(z), rtol=1e-9)


def mp_complex_h(points, probs, s1, s2, z, digits=60):
    """Arbitrary-precision oracle: real-line integral against the real log eavesdropper density."""
    with mpmath.workdps(digits):
        z = mpmath.mpc(z)
        nu2 = mpmath.mpf(s2) ** 2 - mpmath.mpf(s1) ** 2

        def mix(s, u):
            return sum(p * mpmath.npdf(u, x, s) for x, p in zip(points, probs))

        def gauss(w, s):
            return mpmath.exp(-w * w / (2 * s * s)) / mpmath.sqrt(2 * mpmath.pi * s * s)

        f1 = sum(p * gauss(z - x, s1) for x, p in zip(points, probs))
        df1 = sum(-p * (z - x) / s1**2 * gauss(z - x, s1) for x, p in zip(points, probs))
        a = float(z.real)
        integral = mpmath.quad(
            lambda u: (u - z) * gauss(u - z, mpmath.sqrt(nu2)) * mpmath.log(mix(s2, u)),
            [a - 40, a - 10, a, a + 10, a + 40],
        )
        return complex(s1**2 * f1 * integral / nu2 - s1**2 * df1)


@pytest.mark.parametrize("z", [0.5 + 2j, 1.0 + 5j, 0.3 + 7.2j])
def test_against_arbitrary_precision_oracle(z):
    pts, probs = [-1.6, 0.0, 1.6], [0.3, 0.4, 0.3]
    d = DiscreteDistribution(np.array(pts), np.array(probs))
    ch = ChannelParams(1.0, 1.5, 2.0)
    oracle = mp_complex_h(pts, probs, 1.0, 1.5, z)
    assert complex_h(d, ch, z) == pytest.approx(oracle, rel=1e-8)


def test_direct_and_contour_routes_agree():
    d = DiscreteDistribution.create([-1.2, 0.4, 1.5], [0.3, 0.3, 0.4])
    ch = ChannelParams(1.0, 2.0, 1.5)
    z = np.array([0.3 + 0.5j, -1.0 + 2.0j, 2.0 + 3.5j])
    assert_allclose(complex_h(d, ch, z, method="direct"), complex_h(d, ch, z, method="contour"), rtol=1e-9)


def test_order_doubling_check_is_silent_when_converged(point_mass):
    z = np.array([0.5 + 1j, 3 + 4j])
    assert_allclose(complex_h(point_mass, UNIT, z), complex_h(point_mass, UNIT, z, check=False), rtol=1e-10)


def test_complex_h_rejects_low_order(point_mass):
    from wiretap.quadrature import gauss_hermite

    with pytest.raises(DomainError):
        complex_h(point_mass, UNIT, 1j, rule=gauss_hermite(64))


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.5, 6.0])
def test_max_modulus_point_mass(point_mass, radius):
    def neg(theta):
        return -abs(point_mass_h(radius * np.exp(1j * theta)))

    best = minimize_scalar(neg, bounds=(0.0, math.pi), method="bounded", options={"xatol": 1e-12})
    assert max_modulus_on_circle(point_mass, UNIT, radius) == pytest.approx(-best.fun, rel=1e-6)


def test_max_modulus_grows_with_radius():
    d = solved(2.0, 1.0).distribution
    values = [log_max_modulus_on_circle(d, UNIT, b) for b in np.linspace(0.5, 8.0, 8)]
    assert np.all(np.diff(values) > 0)


def test_max_modulus_domain(point_mass):
    with pytest.raises(DomainError):
        max_modulus_on_circle(point_mass, UNIT, 0.0)
    with pytest.raises(DomainError):
        max_modulus_on_circle(point_mass, UNIT, 1.0, samples=100)


def test_modulus_sandwich_at_unit_channel():
    d = solved(2.0, 1.0).distribution
    value = max_modulus_on_circle(d, UNIT, 2.0)
    assert lemma5_lower_modulus(UNIT, 2.0) <= value <= lemma4_upper_modulus(UNIT, 2.0)


def test_empirical_bound_accounting():
    data = chain(2.0, 0.25)
    bound, g_count = data["empirical"], data["g_count"]
    d, ch = data["result"].distribution, data["channel"]
    radius = data["radius"]
    h_count = count_sign_changes(lambda y: h_function(d, ch, y), -radius, radius)
    assert g_count.sign_changes <= h_count.with_suspects + 1
    assert h_count.sign_changes <= bound.value
    assert bound.value_e1 >= g_count.sign_changes - len(g_count.tangential_suspects)
    assert bound.value <= bound.value_e1
