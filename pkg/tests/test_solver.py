import itertools
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import norm

from wiretap.bounds import avg_power_capacity_bound, epi_lower_bound, explicit_support_bound
from wiretap.channel import ChannelParams, DiscreteDistribution
from wiretap.errors import BudgetError, ValidationError
from wiretap.functionals import secrecy_information
from wiretap.solver import SolveResult, SolverConfig, brute_force_oracle, optimize_weights, solve

from conftest import AMP_GRID, SIGMA2_GRID, solved


def simplex_scan_secrecy(points, weights, s1, s2):
    """Secrecy rate of each weight row by trapezoid entropies on a fixed output grid."""
    y = np.linspace(-14.0, 14.0, 2801)

    def info(s):
        comp = norm.pdf(y[None, :], loc=np.asarray(points)[:, None], scale=s)
        f = weights @ comp
        return -np.trapezoid(f * np.log(f), y, axis=1) - 0.5 * math.log(2 * math.pi * math.e * s * s)

    return info(s1) - info(s2)


def simplex_grid(step, center=None, half_width=None):
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    a, b = np.meshgrid(ticks, ticks, indexing="ij")
    w = np.stack([a.ravel(), b.ravel(), 1.0 - a.ravel() - b.ravel()], axis=1)
    w = w[w[:, 2] > -step / 2]
    w[:, 2] = np.clip(w[:, 2], 0.0, 1.0)
    if center is not None:
        w = w[np.all(np.abs(w - center) <= half_width + 1e-12, axis=1)]
    return w


def test_single_point_gets_all_mass():
    pts, probs = optimize_weights(np.array([0.0]), ChannelParams(1.0, 2.0, 1.0))
    assert pts.tolist() == [0.0]
    assert probs.tolist() == [1.0]


def test_symmetric_pair_gets_equal_mass():
    pts, probs = optimize_weights(np.array([-0.7, 0.7]), ChannelParams(1.0, 2.0, 1.0))
    assert_allclose(probs, [0.5, 0.5], atol=1e-12)


def test_three_point_weights_match_simplex_scan():
    points = [-1.0, 0.0, 1.0]
    coarse = simplex_grid(1e-2)
    best = coarse[np.argmax(simplex_scan_secrecy(points, coarse, 1.0, 2.0))]
    fine = simplex_grid(1e-3, best, 0.02)
    best = fine[np.argmax(simplex_scan_secrecy(points, fine, 1.0, 2.0))]
    kept, probs = optimize_weights(
        np.array(points), ChannelParams(1.0, 2.0, 1.0), cfg=SolverConfig(enforce_symmetry=False)
    )
    # pruned points carry zero mass
    got = dict(zip(kept.tolist(), probs))
    full = np.array([got.get(x, 0.0) for x in points])
    assert_allclose(full, best, atol=1e-3)


def test_small_amplitude_gives_endpoint_pair():
    result = solved(2.0, 0.25)
    assert result.converged
    assert_allclose(result.distribution.points, [-0.25, 0.25], atol=1e-9)
    assert_allclose(result.distribution.probs, [0.5, 0.5], atol=1e-9)
    assert result.kkt.gap <= 1e-5


def test_unit_amplitude_bracket():
    result = solved(2.0, 1.0)
    assert 0.085872 <= result.secrecy_capacity <= 0.235004


def test_nearly_degenerate_channel():
    result = solve(ChannelParams(1.0, 1.0001, 1.0))
    assert result.secrecy_capacity <= 1e-3
    # fine two-point candidate set as an independent value check
    ch = ChannelParams(1.0, 1.0001, 1.0)
    best = max(
        secrecy_information(DiscreteDistribution(np.array([-a, a]), np.array([0.5, 0.5])), ch)
        for a in np.linspace(0.01, 1.0, 100)
    )
    assert best <= 1e-3
    assert result.secrecy_capacity >= best - 1e-9


def test_oracle_single_point():
    result = brute_force_oracle(ChannelParams(1.0, 2.0, 1.0), max_points=1)
    assert result.distribution.points.tolist() == [0.0]
    assert result.secrecy_capacity == pytest.approx(0.0, abs=1e-12)


def test_oracle_matches_solver():
    ch = ChannelParams(1.0, 2.0, 0.25)
    oracle = brute_force_oracle(ch, max_points=3, loc_step=1e-3 * 0.25 * 4, prob_step=0.01)
    assert oracle.distribution.is_symmetric()
    assert abs(oracle.secrecy_capacity - solved(2.0, 0.25).secrecy_capacity) <= 1e-4


def test_oracle_budget_and_domain():
    ch = ChannelParams(1.0, 2.0, 1.0)
    with pytest.raises(BudgetError):
        brute_force_oracle(ch, max_points=4, loc_step=1e-3, prob_step=1e-3)
    with pytest.raises(ValidationError):
        brute_force_oracle(ch, max_points=5)
    with pytest.raises(ValidationError):
        brute_force_oracle(ch, loc_step=1e-4)


@pytest.mark.parametrize("sigma2", SIGMA2_GRID)
@pytest.mark.parametrize("amp", AMP_GRID)
def test_solved_invariants(sigma2, amp):
    result = solved(sigma2, amp)
    ch = ChannelParams(1.0, sigma2, amp)
    assert result.converged
    assert result.kkt.gap <= 1e-5
    assert result.secrecy_capacity == result.kkt.secrecy_info
    assert result.distribution.is_symmetric()
    values = [v for _, v, _, _ in result.trace]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert epi_lower_bound(ch) <= result.secrecy_capacity <= avg_power_capacity_bound(ch)
    assert result.distribution.size <= explicit_support_bound(ch, avg_power_capacity_bound(ch))[1]


@pytest.mark.parametrize("amp", [3.0, 4.0])
def test_larger_amplitudes_converge_with_monotone_trace(amp):
    result = solve(ChannelParams(1.0, 2.0, amp))
    assert result.converged
    values = [v for _, v, _, _ in result.trace]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    gaps = np.diff(result.distribution.points)
    assert np.min(gaps) > 0.1


def test_unconstrained_solver_finds_symmetric_solution():
    result = solve(ChannelParams(1.0, 2.0, 2.0), SolverConfig(enforce_symmetry=False))
    assert result.converged
    assert result.distribution.is_symmetric(tol=1e-3)


def test_monotone_in_parameters():
    s1s, s2s, amps = (0.5, 0.75, 1.0), (1.5, 2.0, 3.0), (0.5, 1.0, 2.0)
    cap = {
        (a, b, c): solve(ChannelParams(a, b, c)).secrecy_capacity
        for a, b, c in itertools.product(s1s, s2s, amps)
    }
    for (a, b, c), value in cap.items():
        for a2 in s1s:
            if a2 > a:
                assert cap[(a2, b, c)] <= value + 1e-6
        for b2 in s2s:
            if b2 > b:
                assert cap[(a, b2, c)] >= value - 1e-6
        for c2 in amps:
            if c2 > c:
                assert cap[(a, b, c2)] >= value - 1e-6


def test_deterministic_and_round_trips():
    ch = ChannelParams(1.0, 2.0, 1.5)
    first, second = solve(ch), solve(ch)
    text = json.dumps(first.to_dict())
    assert text == json.dumps(second.to_dict())
    assert json.dumps(SolveResult.from_dict(json.loads(text)).to_dict()) == text
    cfg = SolverConfig(eps_kkt=1e-6, enforce_symmetry=False)
    assert SolverConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("opts", [{"eps_kkt": 0.0}, {"insert_weight": 1e-8}, {"grid_size": 50}, {"bogus": 1}])
def test_config_validation(opts):
    with pytest.raises(ValidationError):
        SolverConfig.from_dict(opts)
