"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_gaussian_closed_form.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the Gaussian oracles: entropic OT coupling, the IDBM correlation map and transfer ODE, IPF half steps and KL trajectories.
# // AR
# +==== END bridgelab =================+
"""
import math

import numpy as np
import pytest
from scipy.stats import multivariate_normal

from bridgelab import constants as CONST
from bridgelab.gaussian_closed_form import (
    GaussianCoupling, GaussianDist, dbm_linear_coefficients, eot_gaussian, gaussian_kl, idbm_kl_trajectory,
    idbm_step_gaussian, idbm_trajectory, integrate_transfer_ode, ipf_initial,
    ipf_kl_trajectory, ipf_step_gaussian, kl_limit_constant, kl_trajectory, pi_joint,
    rho_m_1d, rho_star_1d
)
from bridgelab.experiments import gaussian_scenario
from bridgelab.reference_sde import LinearRefSDE
from bridgelab.sde_engine import simulate_endpoints

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _unit(mean: float) -> GaussianDist:
    return GaussianDist.scalar(mean, 1.0)


def test_eot_correlation_matches_fixed_point_formula() -> None:
    for sigma in (0.2, 1.0, 3.0):
        coupling = eot_gaussian(GaussianDist.scalar(0.0, 4.0), GaussianDist.scalar(1.0, 0.25), sigma)
        assert coupling.correlation() == pytest.approx(rho_star_1d(2.0, 0.5, sigma), rel=1e-12)


def test_eot_zero_noise_is_the_monotone_map() -> None:
    coupling = eot_gaussian(_unit(0.0), GaussianDist.scalar(0.0, 9.0), 0.0)
    assert coupling.correlation() == pytest.approx(1.0)


def test_rho_m_iteration_converges_to_golden_ratio() -> None:
    rho = 0.0
    for _ in range(200):
        rho = rho_m_1d(rho, 1.0, 1.0, 1.0)
    assert rho == pytest.approx(GOLDEN, abs=1e-10)
    assert rho_star_1d(1.0, 1.0, 1.0) == pytest.approx(GOLDEN, abs=1e-14)


def test_rho_m_fixed_point_is_the_eot_correlation() -> None:
    for s0, s1, sigma in ((1.0, 1.0, 1.0), (2.0, 0.5, 0.3), (0.7, 1.4, 2.5)):
        star = rho_star_1d(s0, s1, sigma)
        assert rho_m_1d(star, s0, s1, sigma) == pytest.approx(star, abs=1e-10)


def test_rho_m_rejects_invalid_parameters() -> None:
    with pytest.raises(CONST.DomainError):
        rho_m_1d(1.5, 1.0, 1.0, 1.0)
    with pytest.raises(CONST.DomainError):
        rho_m_1d(0.0, -1.0, 1.0, 1.0)
    assert rho_m_1d(0.3, 1.0, 2.0, 0.0) == 1.0


def test_transfer_ode_agrees_with_correlation_map() -> None:
    draws = np.random.default_rng(7)
    for _ in range(10):
        rho = draws.uniform(-0.9, 0.9)
        s0, s1 = draws.uniform(0.5, 2.0, 2)
        sigma = draws.uniform(0.3, 2.0)
        coupling = GaussianCoupling(
            GaussianDist.scalar(0.0, s0 ** 2), GaussianDist.scalar(0.0, s1 ** 2),
            np.array([[rho * s0 * s1]]),
        )
        p1 = integrate_transfer_ode(coupling, sigma)
        assert s0 * p1[0, 0] / s1 == pytest.approx(rho_m_1d(rho, s0, s1, sigma), abs=1e-6)


def test_idbm_step_keeps_the_optimal_coupling_in_two_dimensions() -> None:
    gamma = GaussianDist(np.array([0.0, 1.0]), np.array([[1.0, 0.3], [0.3, 0.8]]))
    upsilon = GaussianDist(np.array([-1.0, 0.5]), np.array([[0.6, -0.1], [-0.1, 1.2]]))
    optimal = eot_gaussian(gamma, upsilon, 0.8)
    stepped = idbm_step_gaussian(optimal, 0.8)
    np.testing.assert_allclose(stepped.cross, optimal.cross, atol=1e-6)
    np.testing.assert_array_equal(stepped.marg0.cov, gamma.cov)


def test_pi_joint_validates_time() -> None:
    coupling = GaussianCoupling.independent(_unit(0.0), _unit(1.0))
    joint = pi_joint(coupling, 1.0, 0.5)
    # X_{1/2} of the bridge mixture: mean 0.5, variance 1/4 + 1/4 + 1/4
    assert joint.block_mean(1, 1)[0] == pytest.approx(0.5)
    assert joint.block(1, 1, 1)[0, 0] == pytest.approx(0.75)
    with pytest.raises(CONST.DomainError):
        pi_joint(coupling, 1.0, 1.0)


def test_ipf_half_step_installs_the_target_marginal() -> None:
    gamma = _unit(-1.0)
    upsilon = GaussianDist.scalar(1.0, 2.0)
    joint = ipf_step_gaussian(ipf_initial(gamma, 0.5), upsilon, CONST.IpfSide.SECOND)
    assert joint.block_mean(1, 1)[0] == pytest.approx(1.0)
    assert joint.block(1, 1, 1)[0, 0] == pytest.approx(2.0)
    with pytest.raises(CONST.DomainError):
        ipf_step_gaussian(joint, GaussianDist(np.zeros(2), np.eye(2)), CONST.IpfSide.FIRST)


def test_gaussian_kl_basics() -> None:
    p = GaussianDist(np.array([0.0, 1.0]), np.array([[2.0, 0.5], [0.5, 1.0]]))
    assert gaussian_kl(p, p) == pytest.approx(0.0, abs=1e-12)
    # KL(N(1, 1) || N(0, 1)) = 1/2
    assert gaussian_kl(_unit(1.0), _unit(0.0)) == pytest.approx(0.5)
    with pytest.raises(CONST.DomainError):
        gaussian_kl(_unit(0.0), p)


def test_idbm_converges_faster_than_ipf_in_the_unit_scenario() -> None:
    gamma, upsilon = _unit(-1.0), _unit(1.0)
    idbm = idbm_kl_trajectory(gamma, upsilon, 1.0, 10)
    ipf = ipf_kl_trajectory(gamma, upsilon, 1.0, 10)
    assert len(idbm) == len(ipf) == 11
    assert idbm[10] < ipf[10]
    assert all(later <= earlier + 1e-10 for earlier, later in zip(idbm, idbm[1:]))


def test_small_noise_ipf_first_iterate_is_far_worse() -> None:
    gamma, upsilon = _unit(-1.0), _unit(1.0)
    idbm = idbm_kl_trajectory(gamma, upsilon, 0.01, 1)[1]
    ipf = ipf_kl_trajectory(gamma, upsilon, 0.01, 1)[1]
    assert ipf >= 10.0 * idbm


def test_first_iterate_limits() -> None:
    wide0 = GaussianDist.scalar(0.0, 1e4)
    wide1 = GaussianDist.scalar(0.0, 1e4)
    first = idbm_kl_trajectory(wide0, wide1, 1.0, 1)[1]
    assert kl_limit_constant() == pytest.approx(0.0596, abs=1e-4)
    assert first == pytest.approx(kl_limit_constant(), abs=1e-3)
    gamma, upsilon = _unit(-1.0), _unit(1.0)
    assert idbm_kl_trajectory(gamma, upsilon, 100.0, 1)[1] <= 1e-3
    assert ipf_kl_trajectory(gamma, upsilon, 100.0, 1)[1] <= 1e-3


def test_initial_cross_sets_the_starting_coupling() -> None:
    gamma, upsilon = _unit(0.0), _unit(0.0)
    couplings = idbm_trajectory(gamma, upsilon, 1.0, 1, initial_cross=np.array([[0.4]]))
    assert couplings[0].correlation() == pytest.approx(0.4)
    assert couplings[1].correlation() == pytest.approx(rho_m_1d(0.4, 1.0, 1.0, 1.0))
    optimal = eot_gaussian(gamma, upsilon, 1.0)
    assert kl_trajectory([optimal], optimal)[0] == pytest.approx(0.0, abs=1e-12)


def test_idbm_dominates_ipf_on_small_random_scenarios() -> None:
    for scenario in range(2):
        gamma, upsilon = gaussian_scenario(3, 0.2, np.random.default_rng(scenario))
        idbm = idbm_kl_trajectory(gamma, upsilon, 1.0, 3)
        ipf = ipf_kl_trajectory(gamma, upsilon, 1.0, 3)
        assert all(later <= earlier + 1e-10 for earlier, later in zip(idbm, idbm[1:]))
        assert all(i < p for i, p in zip(idbm[1:], ipf[1:]))


@pytest.mark.slow
def test_idbm_dominates_ipf_on_five_dimensional_scenarios() -> None:
    for scenario in range(20):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(2024, spawn_key=(scenario,))))
        gamma, upsilon = gaussian_scenario(5, 0.2, rng)
        idbm = idbm_kl_trajectory(gamma, upsilon, 1.0, 10)
        ipf = ipf_kl_trajectory(gamma, upsilon, 1.0, 10)
        assert all(later <= earlier + 1e-10 for earlier, later in zip(idbm, idbm[1:]))
        assert all(i < p for i, p in zip(idbm[1:], ipf[1:]))


@pytest.mark.slow
def test_transfer_ode_agrees_with_correlation_map_on_many_draws() -> None:
    draws = np.random.default_rng(8)
    for _ in range(100):
        rho = draws.uniform(-0.95, 0.95)
        s0, s1 = draws.uniform(0.3, 3.0, 2)
        sigma = draws.uniform(0.1, 3.0)
        coupling = GaussianCoupling(
            GaussianDist.scalar(0.0, s0 ** 2), GaussianDist.scalar(0.0, s1 ** 2),
            np.array([[rho * s0 * s1]]),
        )
        p1 = integrate_transfer_ode(coupling, sigma)
        assert s0 * p1[0, 0] / s1 == pytest.approx(rho_m_1d(rho, s0, s1, sigma), abs=1e-6)


@pytest.mark.slow
def test_euler_transport_reproduces_the_idbm_cross_covariance() -> None:
    dim, sigma, n = 5, 1.0, 1_000_000
    gamma, upsilon = gaussian_scenario(dim, 0.2, np.random.default_rng(31))
    coupling = GaussianCoupling.independent(gamma, upsilon)
    coefficients = {}

    def drift(x: np.ndarray, t: float) -> np.ndarray:
        if t not in coefficients:
            coefficients[t] = dbm_linear_coefficients(coupling, sigma, t)
        a_t, c_t = coefficients[t]
        return x @ a_t.T + c_t

    x0 = gamma.sample(n, np.random.default_rng(32))
    run = simulate_endpoints(drift, LinearRefSDE.brownian(sigma, dim=dim), x0, 1000, 33)
    expected = idbm_step_gaussian(coupling, sigma).cross
    estimate = run.samples.cross_covariance()
    centred0 = run.samples.x0 - run.samples.x0.mean(axis=0)
    centred1 = run.samples.x_end - run.samples.x_end.mean(axis=0)
    for i in range(dim):
        for j in range(dim):
            std_error = (centred0[:, i] * centred1[:, j]).std() / np.sqrt(n)
            assert abs(estimate[i, j] - expected[i, j]) <= 4.0 * std_error


@pytest.mark.parametrize("s0, s1, sigma", [(1.0, 1.0, 1.0), (0.8, 0.8, 1.0), (1.5, 0.7, 2.0), (1.0, 2.0, 1.5)])
def test_correlation_map_is_a_contraction(s0: float, s1: float, sigma: float, rng: np.random.Generator) -> None:
    pairs = rng.uniform(-0.99, 0.99, size=(1000, 2))
    for rho, other in pairs:
        gap = abs(rho_m_1d(rho, s0, s1, sigma) - rho_m_1d(other, s0, s1, sigma))
        assert gap < abs(rho - other)


def test_small_noise_iteration_converges_from_anticorrelated_starts() -> None:
    # sigma^2 << s0 s1 makes the map steeper than 1 near rho = -1, the fixed point still attracts
    s0, s1, sigma = 0.5, 2.0, 0.3
    rho = -0.99
    for _ in range(60):
        rho = rho_m_1d(rho, s0, s1, sigma)
    assert rho == pytest.approx(rho_star_1d(s0, s1, sigma), abs=1e-8)


def _random_gaussian(dim: int, rng: np.random.Generator) -> GaussianDist:
    factor = rng.standard_normal((dim, dim))
    return GaussianDist(rng.normal(0.0, 0.5, dim), factor @ factor.T / dim + 0.5 * np.eye(dim))


@pytest.mark.slow
def test_gaussian_kl_matches_monte_carlo_in_four_dimensions() -> None:
    draws = np.random.default_rng(41)
    p = _random_gaussian(4, draws)
    q = _random_gaussian(4, draws)
    n = 2_000_000
    samples = p.sample(n, draws)
    log_ratio = multivariate_normal(p.mean, p.cov).logpdf(samples) - multivariate_normal(q.mean, q.cov).logpdf(samples)
    std_error = log_ratio.std(ddof=1) / math.sqrt(n)
    assert gaussian_kl(p, q) == pytest.approx(log_ratio.mean(), abs=4 * std_error)
