"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_sde_engine.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the Euler engine: determinism across worker counts, endpoint runs, control cost, divergence, bridge batches and Girsanov ratios.
# // AR
# +==== END bridgelab =================+
"""
import math

import numpy as np
import pytest

from bridgelab import constants as CONST
from bridgelab.reference_sde import LinearRefSDE
from bridgelab.sde_engine import (
    CouplingSamples, PathBatch, drift_norm_functional, euler_simulate, girsanov_log_ratio,
    girsanov_log_ratios, resolve_seed, reverse_paths, sample_bridge_batch, simulate_endpoints,
    terminal_estimator
)


def _zero(x: np.ndarray, t: float) -> np.ndarray:
    return np.zeros_like(x)


def _constant(value: float):
    def drift(x: np.ndarray, t: float) -> np.ndarray:
        return np.full_like(x, value)

    return drift


def test_path_batch_validation() -> None:
    with pytest.raises(CONST.DomainError):
        PathBatch(times=np.linspace(0, 1, 3), values=np.zeros((2, 4, 1)), dt=0.5)
    with pytest.raises(CONST.DomainError):
        PathBatch(times=np.array([0.0, 0.2, 1.0]), values=np.zeros((2, 3, 1)), dt=0.5)
    values = np.zeros((2, 3, 1))
    values[0, 1, 0] = np.nan
    with pytest.raises(CONST.DomainError):
        PathBatch(times=np.linspace(0, 1, 3), values=values, dt=0.5)


def test_output_does_not_depend_on_worker_count() -> None:
    sde = LinearRefSDE.brownian(1.0)
    x0 = np.zeros((CONST.RNG_CHUNK_SIZE + 500, 1))
    single = euler_simulate(_zero, sde, x0, 10, 42, workers=1)
    many = euler_simulate(_zero, sde, x0, 10, 42, workers=4)
    np.testing.assert_array_equal(single.values, many.values)
    again = euler_simulate(_zero, sde, x0, 10, np.random.SeedSequence(42), workers=2)
    np.testing.assert_array_equal(single.values, again.values)


def test_brownian_terminal_variance() -> None:
    sigma = 0.6
    sde = LinearRefSDE.brownian(sigma, dim=2)
    run = simulate_endpoints(_zero, sde, np.zeros((50_000, 2)), 20, 5)
    variance = run.samples.x_end.var(axis=0)
    np.testing.assert_allclose(variance, sigma ** 2, rtol=0.03)
    assert run.stop_time == pytest.approx(1.0)


def test_endpoints_match_full_paths() -> None:
    sde = LinearRefSDE.ornstein_uhlenbeck(0.5, 0.8)
    x0 = np.linspace(-1.0, 1.0, 100).reshape(-1, 1)
    paths = euler_simulate(sde.reference_drift, sde, x0, 25, 9)
    run = simulate_endpoints(sde.reference_drift, sde, x0, 25, 9)
    np.testing.assert_allclose(run.samples.x_end, paths.terminal, rtol=0, atol=1e-14)
    np.testing.assert_array_equal(run.samples.x0, paths.initial)


def test_stop_step_and_deterministic_last_step() -> None:
    sde = LinearRefSDE.brownian(1.0)
    x0 = np.ones((10, 1))
    run = simulate_endpoints(_constant(2.0), sde, x0, 1, 3, True)
    # a single deterministic step of size 1 with drift 2
    np.testing.assert_allclose(run.samples.x_end, 3.0)
    partial = simulate_endpoints(_zero, sde, x0, 10, 3, stop_step=4)
    assert partial.stop_time == pytest.approx(0.4)
    with pytest.raises(CONST.DomainError):
        simulate_endpoints(_zero, sde, x0, 10, 3, stop_step=11)


def test_control_cost_of_a_constant_adjustment() -> None:
    sigma, u = 0.5, 0.3
    sde = LinearRefSDE.brownian(sigma)
    run = simulate_endpoints(_constant(u), sde, np.zeros((8, 1)), 50, 1, cost_field=_constant(u))
    np.testing.assert_allclose(run.control_cost, u ** 2 / sigma ** 2, rtol=1e-12)


def test_divergence_is_reported_with_its_step() -> None:
    sde = LinearRefSDE.brownian(1.0)

    def explosive(x: np.ndarray, t: float) -> np.ndarray:
        return 1e6 * (x + 1.0)

    with pytest.raises(CONST.SimulationDiverged) as caught:
        euler_simulate(explosive, sde, np.zeros((4, 1)), 100, 0)
    assert caught.value.step is not None and caught.value.step >= 1
    assert isinstance(caught.value, CONST.NumericalFailure)


def test_drift_shape_is_checked() -> None:
    sde = LinearRefSDE.brownian(1.0, dim=2)
    with pytest.raises(CONST.DomainError):
        euler_simulate(lambda x, t: x[:, :1], sde, np.zeros((3, 2)), 4, 0)
    with pytest.raises(CONST.DomainError):
        euler_simulate(_zero, sde, np.zeros((3, 1)), 4, 0)


def test_resolve_seed_rejects_booleans() -> None:
    with pytest.raises(CONST.DomainError):
        resolve_seed(True)
    assert isinstance(resolve_seed(np.random.default_rng(0)), np.random.SeedSequence)


def test_sample_bridge_batch_pins_and_validation(rng: np.random.Generator) -> None:
    sde = LinearRefSDE.brownian(1e-8)
    coupling = CouplingSamples(x0=np.zeros((3, 1)), x_end=np.full((3, 1), 2.0))
    points = sample_bridge_batch(coupling, sde, np.array([0.25, 0.5, 0.75]), rng)
    # a noiseless bridge is the straight line
    np.testing.assert_allclose(points[:, 0], [0.5, 1.0, 1.5], atol=1e-6)
    with pytest.raises(CONST.DomainError):
        sample_bridge_batch(coupling, sde, np.array([0.0, 0.5, 0.75]), rng)
    with pytest.raises(CONST.DomainError):
        sample_bridge_batch(coupling, sde, np.array([0.5, 0.5]), rng)


def test_reverse_paths_flips_time() -> None:
    sde = LinearRefSDE.brownian(1.0)
    paths = euler_simulate(_zero, sde, np.zeros((2, 1)), 5, 0)
    flipped = reverse_paths(paths)
    np.testing.assert_array_equal(flipped.values[:, 0], paths.values[:, -1])
    np.testing.assert_array_equal(flipped.times, paths.times)


def test_drift_norm_of_a_constant_field() -> None:
    sigma = 2.0
    sde = LinearRefSDE.brownian(sigma)
    paths = euler_simulate(_zero, sde, np.zeros((4, 1)), 10, 0)
    assert drift_norm_functional(_constant(1.5), paths, sde) == pytest.approx(1.5 ** 2 / sigma ** 2)


def test_girsanov_ratio_of_a_constant_shift() -> None:
    sigma, c = 0.7, 0.4
    sde = LinearRefSDE.brownian(sigma)
    paths = euler_simulate(_zero, sde, np.zeros((6, 1)), 40, 2)
    ratios = girsanov_log_ratios(paths, _constant(c), _zero, sde)
    expected = c * paths.terminal[:, 0] / sigma ** 2 - 0.5 * c ** 2 / sigma ** 2
    np.testing.assert_allclose(ratios, expected, rtol=1e-10, atol=1e-12)
    assert girsanov_log_ratio(paths, _constant(c), _zero, sde, row=3) == pytest.approx(expected[3])
    np.testing.assert_allclose(girsanov_log_ratios(paths, _zero, _zero, sde), 0.0)


def test_terminal_estimator_recovers_the_pin() -> None:
    sde = LinearRefSDE.brownian(1.0)
    target = np.array([[1.5], [-0.5]])
    t = 0.8

    def bridge(x: np.ndarray, time: float) -> np.ndarray:
        return (target - x) / (1.0 - time)

    np.testing.assert_allclose(terminal_estimator(bridge, np.zeros((2, 1)), t, sde), target)
    with pytest.raises(CONST.DomainError):
        terminal_estimator(bridge, np.zeros((2, 1)), t, LinearRefSDE.ornstein_uhlenbeck(1.0))


def test_coupling_samples_statistics() -> None:
    x0 = np.arange(10, dtype=float).reshape(-1, 1)
    coupling = CouplingSamples(x0=x0, x_end=2.0 * x0 + 1.0)
    assert coupling.correlation() == pytest.approx(1.0)
    assert coupling.swapped().x0[3, 0] == pytest.approx(7.0)
    with pytest.raises(CONST.DomainError):
        CouplingSamples(x0=x0, x_end=x0[:5])
    assert math.isfinite(coupling.cross_covariance()[0, 0])


def test_weak_error_halves_with_the_step() -> None:
    # small noise keeps the Monte-Carlo error far below the O(dt) bias
    sde = LinearRefSDE.ornstein_uhlenbeck(1.0, 1e-3)
    x0 = np.ones((20_000, 1))
    exact = {"x": math.exp(-1.0), "x2": math.exp(-2.0) + 1e-6 * (1.0 - math.exp(-2.0)) / 2.0}
    errors = {"x": [], "x2": []}
    for m_steps in (50, 100, 200):
        x_end = simulate_endpoints(sde.reference_drift, sde, x0, m_steps, 17).samples.x_end[:, 0]
        errors["x"].append(abs(x_end.mean() - exact["x"]))
        errors["x2"].append(abs((x_end ** 2).mean() - exact["x2"]))
    for name, values in errors.items():
        for coarse, fine in zip(values, values[1:]):
            assert 1.8 <= coarse / fine <= 2.3, name
