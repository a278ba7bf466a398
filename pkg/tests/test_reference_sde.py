"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_reference_sde.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the reference process: schedules, transition moments, scores and bridges.
# // AR
# +==== END bridgelab =================+
"""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from bridgelab import constants as CONST
from bridgelab.reference_sde import (
    BetaSchedule, LinearRefSDE, bridge_coefficients, bridge_drift, bridge_moments,
    delta_moments, integrate_beta, sample_bridge_point, score_backward, score_forward,
    transition_log_density, transition_moments
)


def test_brownian_transition_is_unit_mean_and_elapsed_variance() -> None:
    sde = LinearRefSDE.brownian(0.5)
    moments = transition_moments(sde, 0.2, 0.7)
    assert moments.a == pytest.approx(1.0)
    assert moments.v == pytest.approx(0.5)
    assert sde.is_brownian and sde.is_isotropic
    assert sde.scalar_variance == pytest.approx(0.25)


def test_ornstein_uhlenbeck_transition_closed_form() -> None:
    alpha = 0.7
    sde = LinearRefSDE.ornstein_uhlenbeck(alpha, 1.3)
    moments = transition_moments(sde, 0.1, 0.9)
    assert moments.a == pytest.approx(math.exp(-alpha * 0.8), rel=1e-12)
    assert moments.v == pytest.approx((1.0 - math.exp(-2.0 * alpha * 0.8)) / (2.0 * alpha), rel=1e-12)
    assert not sde.is_brownian


def test_series_branch_matches_closed_form_near_threshold() -> None:
    # both sides of the switch agree to high relative precision
    delta_b = 1.0
    below = delta_moments(0.5 * CONST.SERIES_THRESHOLD, delta_b)[1]
    above = delta_moments(2.0 * CONST.SERIES_THRESHOLD, delta_b)[1]
    assert below == pytest.approx(delta_b, rel=1e-7)
    assert above == pytest.approx(delta_b, rel=1e-7)


def test_delta_moments_at_zero_is_identity_pin() -> None:
    a, v = delta_moments(0.3, 0.0)
    assert a == 1.0
    assert v == 0.0


def test_transition_rejects_bad_ordering() -> None:
    sde = LinearRefSDE.brownian(1.0)
    with pytest.raises(CONST.DomainError):
        transition_moments(sde, 0.5, 0.5)
    with pytest.raises(CONST.DomainError):
        transition_moments(sde, 0.0, 1.5)


def test_sde_rejects_invalid_parameters() -> None:
    with pytest.raises(CONST.DomainError):
        LinearRefSDE(alpha=-1.0, sigma_cov=np.eye(2))
    with pytest.raises(CONST.DomainError):
        LinearRefSDE(alpha=0.0, sigma_cov=np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(CONST.DomainError):
        BetaSchedule.ve(1.0, 0.5)


def test_ve_schedule_integral_matches_quadrature() -> None:
    schedule = BetaSchedule.ve(0.01, 10.0)
    for t in (0.1, 0.5, 0.9):
        numeric, _ = quad(lambda u: float(schedule.beta(u)), 0.0, t)
        assert float(schedule.integral(t)) == pytest.approx(numeric, rel=1e-7)


def test_integrate_beta_is_zero_at_origin_and_increasing() -> None:
    sde = LinearRefSDE.ornstein_uhlenbeck(1.0, beta=BetaSchedule.ve(0.1, 5.0))
    grid = np.linspace(0.0, 1.0, 11)
    values = integrate_beta(sde, grid)
    assert values[0] == pytest.approx(0.0)
    assert np.all(np.diff(values) > 0)


def test_scores_match_finite_differences() -> None:
    sde = LinearRefSDE.ornstein_uhlenbeck(0.8, 0.6)
    s, t = 0.2, 0.65
    y_s = np.array([0.3])
    y_t = np.array([-0.4])
    h = 1e-5

    def log_p(ys: float, yt: float) -> float:
        return float(transition_log_density(sde, s, t, np.array([ys]), np.array([yt])))

    fd_t = (log_p(y_s[0], y_t[0] + h) - log_p(y_s[0], y_t[0] - h)) / (2 * h)
    fd_s = (log_p(y_s[0] + h, y_t[0]) - log_p(y_s[0] - h, y_t[0])) / (2 * h)
    assert score_backward(sde, s, t, y_s, y_t)[0] == pytest.approx(fd_t, rel=1e-6)
    assert score_forward(sde, s, t, y_s, y_t)[0] == pytest.approx(fd_s, rel=1e-6)


def test_transition_density_integrates_to_one() -> None:
    sde = LinearRefSDE.ornstein_uhlenbeck(0.5, 1.0)
    mass, _ = quad(lambda y: math.exp(float(transition_log_density(sde, 0.0, 0.5, np.array([1.0]), np.array([y])))), -12, 12)
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_bridge_coefficients_pins() -> None:
    sde = LinearRefSDE.ornstein_uhlenbeck(0.4)
    start = bridge_coefficients(sde, 0.0, 0.0, 1.0)
    end = bridge_coefficients(sde, 0.0, 1.0, 1.0)
    assert (start.a_hat, start.a_check, start.v_bridge) == pytest.approx((1.0, 0.0, 0.0))
    assert (end.a_hat, end.a_check, end.v_bridge) == pytest.approx((0.0, 1.0, 0.0))


def test_brownian_bridge_moments() -> None:
    sde = LinearRefSDE.brownian(1.0)
    moments = bridge_moments(sde, 0.0, 0.25, 1.0)
    assert moments.a_hat == pytest.approx(0.75)
    assert moments.a_check == pytest.approx(0.25)
    assert moments.v_bridge == pytest.approx(0.25 * 0.75)
    with pytest.raises(CONST.DomainError):
        bridge_moments(sde, 0.0, 1.0, 1.0)


def test_brownian_bridge_drift_points_to_the_pin() -> None:
    sde = LinearRefSDE.brownian(0.7)
    x = np.array([[0.2], [-1.0]])
    x_end = np.array([[1.0], [1.0]])
    drift = bridge_drift(sde, x, 0.6, x_end)
    np.testing.assert_allclose(drift, (x_end - x) / 0.4, rtol=1e-12)
    with pytest.raises(CONST.DomainError):
        bridge_drift(sde, x, 1.0, x_end)


def test_sample_bridge_point_moments(rng: np.random.Generator) -> None:
    sde = LinearRefSDE.brownian(1.0)
    n = 200_000
    x0 = np.full((n, 1), -1.0)
    x_end = np.full((n, 1), 2.0)
    points = sample_bridge_point(sde, x0, x_end, 0.5, rng)
    # mean 0.5, variance 0.25
    assert points.mean() == pytest.approx(0.5, abs=4 * math.sqrt(0.25 / n))
    assert points.var() == pytest.approx(0.25, rel=0.02)
    with pytest.raises(CONST.DomainError):
        sample_bridge_point(sde, x0, x_end, 0.0, rng)


def _random_reference(rng: np.random.Generator) -> LinearRefSDE:
    alpha = float(rng.choice([0.0, rng.uniform(0.01, 2.0)]))
    schedule = BetaSchedule.constant(float(rng.uniform(0.2, 3.0))) if rng.random() < 0.5 else BetaSchedule.ve(0.05, 3.0)
    return LinearRefSDE.ornstein_uhlenbeck(alpha, float(rng.uniform(0.2, 2.0)), beta=schedule)


def test_transitions_compose_as_a_semigroup(rng: np.random.Generator) -> None:
    for _ in range(500):
        sde = _random_reference(rng)
        s, t, u = np.sort(rng.uniform(0.0, 1.0, size=3))
        first = transition_moments(sde, s, t)
        second = transition_moments(sde, t, u)
        whole = transition_moments(sde, s, u)
        assert whole.a == pytest.approx(first.a * second.a, rel=1e-10, abs=1e-13)
        assert whole.v == pytest.approx(second.a ** 2 * first.v + second.v, rel=1e-10, abs=1e-13)


def test_bridge_moments_satisfy_the_tower_identities(rng: np.random.Generator) -> None:
    for _ in range(1000):
        sde = _random_reference(rng)
        s, t, u = np.sort(rng.uniform(0.0, 1.0, size=3))
        bridge = bridge_moments(sde, s, t, u)
        to_t = transition_moments(sde, s, t)
        to_u = transition_moments(sde, s, u)
        assert bridge.a_hat + bridge.a_check * to_u.a == pytest.approx(to_t.a, rel=1e-9, abs=1e-12)
        assert bridge.v_bridge + bridge.a_check ** 2 * to_u.v == pytest.approx(to_t.v, rel=1e-9, abs=1e-12)
        assert bridge.v_bridge > 0


def test_sde_rejects_underflowing_decay() -> None:
    # b_1 of VE(0.01, 40) is about 1.6e4, so exp(-alpha b) is zero in double precision
    with pytest.raises(CONST.DomainError, match="underflows"):
        LinearRefSDE.ornstein_uhlenbeck(1.0, beta=BetaSchedule.ve(0.01, 40.0))
    sde = LinearRefSDE.ornstein_uhlenbeck(0.0, beta=BetaSchedule.ve(0.01, 40.0))
    assert transition_moments(sde, 0.0, 1.0).a == 1.0
