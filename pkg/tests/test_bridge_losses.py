"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_bridge_losses.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the regression batches and of the weighted squared loss.
# // AR
# +==== END bridgelab =================+
"""
import numpy as np
import pytest

from bridgelab import constants as CONST
from bridgelab.reference_sde import LinearRefSDE
from bridgelab.bridge_losses import (
    LossBatch, make_bdbm_batch, make_dbm_batch, make_drift_matching_batch, make_sgm_batch, weighted_mse
)
from bridgelab.sde_engine import CouplingSamples, euler_simulate


def _pinned_coupling(n: int = 10) -> CouplingSamples:
    return CouplingSamples(x0=np.zeros((n, 1)), x_end=np.ones((n, 1)))


def test_loss_batch_validation() -> None:
    with pytest.raises(CONST.DomainError):
        LossBatch(x_t=np.zeros((3, 1)), t=np.zeros(2), target=np.zeros((3, 1)), weight=np.ones(3))
    with pytest.raises(CONST.DomainError):
        LossBatch(x_t=np.zeros((3, 1)), t=np.zeros(3), target=np.zeros((3, 1)), weight=np.array([1.0, 0.0, 1.0]))
    batch = LossBatch(x_t=np.zeros((3, 1)), t=np.zeros(3), target=np.zeros((3, 1)), weight=np.ones(3))
    assert batch.n == 3


def test_sgm_batch_weighted_target_is_the_scaled_residual(rng: np.random.Generator) -> None:
    sigma = 0.5
    sde = LinearRefSDE.brownian(sigma)
    batch = make_sgm_batch(lambda n, g: np.zeros((n, 1)), sde, 500, rng)
    assert batch.n == 500
    assert np.all((batch.t > 0.0) & (batch.t <= 1.0))
    np.testing.assert_allclose(batch.weight[:, None] * batch.target, -batch.x_t / sigma ** 2, rtol=1e-10)
    with pytest.raises(CONST.DomainError):
        make_sgm_batch(lambda n, g: np.zeros((n, 2)), sde, 5, rng)


def test_dbm_batch_targets(rng: np.random.Generator) -> None:
    sigma = 0.8
    sde = LinearRefSDE.brownian(sigma)
    score = make_dbm_batch(_pinned_coupling(), sde, 400, rng, 0.5)
    assert np.all(score.t <= 0.5)
    np.testing.assert_allclose(score.weight, 1.0 - score.t)
    np.testing.assert_allclose(score.weight[:, None] * score.target, (1.0 - score.x_t) / sigma ** 2, rtol=1e-10)
    drift = make_dbm_batch(_pinned_coupling(), sde, 400, rng, 1.0, CONST.TargetConvention.DRIFT)
    np.testing.assert_allclose(drift.weight, 1.0)
    np.testing.assert_allclose(drift.target, (1.0 - drift.x_t) / (1.0 - drift.t)[:, None], rtol=1e-10)


def test_bdbm_batch_runs_backward_from_the_horizon(rng: np.random.Generator) -> None:
    sigma = 1.2
    sde = LinearRefSDE.brownian(sigma)
    batch = make_bdbm_batch(_pinned_coupling(), sde, 400, rng, 0.3)
    assert np.all(batch.t >= 0.7 - 1e-12)
    np.testing.assert_allclose(batch.weight, batch.t)
    np.testing.assert_allclose(batch.weight[:, None] * batch.target, -batch.x_t / sigma ** 2, rtol=1e-10)
    drift = make_bdbm_batch(_pinned_coupling(), sde, 50, rng, 1.0, CONST.TargetConvention.DRIFT)
    np.testing.assert_allclose(drift.target, -drift.x_t / drift.t[:, None], rtol=1e-10)


def test_invalid_horizon_and_convention(rng: np.random.Generator) -> None:
    sde = LinearRefSDE.brownian(1.0)
    with pytest.raises(CONST.DomainError):
        make_dbm_batch(_pinned_coupling(), sde, 5, rng, 0.0)
    with pytest.raises(CONST.DomainError):
        make_bdbm_batch(_pinned_coupling(), sde, 5, rng, 1.5)
    ou = LinearRefSDE.ornstein_uhlenbeck(1.0)
    with pytest.raises(CONST.DomainError):
        make_dbm_batch(_pinned_coupling(), ou, 5, rng, 1.0, CONST.TargetConvention.DRIFT)


def test_drift_matching_batch_uses_path_increments(rng: np.random.Generator) -> None:
    sde = LinearRefSDE.brownian(1.0)
    # distinct starts keep every row identifiable by its value
    paths = euler_simulate(lambda x, t: np.zeros_like(x), sde, np.linspace(-1.0, 1.0, 5).reshape(-1, 1), 8, 4)
    batch = make_drift_matching_batch(paths, 30, rng)
    steps = np.rint(batch.t / paths.dt).astype(int)
    assert np.all(steps < paths.n_steps)
    for x_t, target, step in zip(batch.x_t, batch.target, steps):
        row = int(np.flatnonzero(paths.values[:, step, 0] == x_t[0])[0])
        expected = (paths.values[row, step + 1] - paths.values[row, step]) / paths.dt
        np.testing.assert_allclose(target, expected)


def test_weighted_mse_value_and_gradient() -> None:
    batch = LossBatch(
        x_t=np.zeros((2, 2)), t=np.array([0.1, 0.2]),
        target=np.array([[1.0, 0.0], [0.0, 2.0]]), weight=np.array([1.0, 3.0]),
    )
    pred = np.array([[0.5, 0.5], [1.0, 1.0]])
    loss, grad = weighted_mse(pred, batch)
    # (0.25 + 0.25) * 1 and (1 + 1) * 3, averaged
    assert loss == pytest.approx((0.5 + 6.0) / 2.0)
    h = 1e-6
    for index in np.ndindex(pred.shape):
        bumped = pred.copy()
        bumped[index] += h
        lowered = pred.copy()
        lowered[index] -= h
        numeric = (weighted_mse(bumped, batch)[0] - weighted_mse(lowered, batch)[0]) / (2 * h)
        assert grad[index] == pytest.approx(numeric, rel=1e-6)
    with pytest.raises(CONST.DomainError):
        weighted_mse(np.zeros((2, 1)), batch)


def _assert_orthogonal(residual: np.ndarray, x_t: np.ndarray, t: np.ndarray) -> None:
    """The weighted residual has zero mean against 1, x, t and t x within 4 standard errors."""
    n = residual.size
    for factor in (np.ones(n), x_t, t, t * x_t):
        product = residual * factor
        assert abs(product.mean()) <= 4.0 * product.std() / np.sqrt(n)


def _empirical_gaussian_coupling(n: int, rng: np.random.Generator) -> CouplingSamples:
    return CouplingSamples(x0=rng.normal(-1.0, 0.8, size=(n, 1)), x_end=rng.normal(1.5, 0.6, size=(n, 1)))


def _bridge_regressions(coupling: CouplingSamples, sigma: float, t: np.ndarray, x_t: np.ndarray) -> "tuple[np.ndarray, np.ndarray]":
    """E[X0 | X_t] and E[X1 | X_t] under the Brownian bridge mixture of the cached pairs."""
    x0 = coupling.x0[:, 0]
    x1 = coupling.x_end[:, 0]
    m0, m1 = x0.mean(), x1.mean()
    v0, v1 = x0.var(), x1.var()
    c01 = np.mean((x0 - m0) * (x1 - m1))
    mean_t = (1.0 - t) * m0 + t * m1
    var_t = (1.0 - t) ** 2 * v0 + t ** 2 * v1 + 2.0 * t * (1.0 - t) * c01 + sigma ** 2 * t * (1.0 - t)
    first = m0 + ((1.0 - t) * v0 + t * c01) / var_t * (x_t - mean_t)
    last = m1 + ((1.0 - t) * c01 + t * v1) / var_t * (x_t - mean_t)
    return first, last


def test_sgm_targets_project_onto_the_marginal_score(rng: np.random.Generator) -> None:
    sigma, m0, s0 = 0.9, 0.5, 0.7
    sde = LinearRefSDE.brownian(sigma)
    batch = make_sgm_batch(lambda n, g: g.normal(m0, s0, size=(n, 1)), sde, 200_000, rng)
    x_t = batch.x_t[:, 0]
    expected_x0 = m0 + s0 ** 2 / (s0 ** 2 + sigma ** 2 * batch.t) * (x_t - m0)
    residual = batch.weight * batch.target[:, 0] + (x_t - expected_x0) / sigma ** 2
    _assert_orthogonal(residual, x_t, batch.t)


def test_dbm_targets_project_onto_the_forward_drift(rng: np.random.Generator) -> None:
    sigma = 0.7
    sde = LinearRefSDE.brownian(sigma)
    coupling = _empirical_gaussian_coupling(50_000, rng)
    batch = make_dbm_batch(coupling, sde, 200_000, rng, 1.0)
    x_t = batch.x_t[:, 0]
    _, expected_x1 = _bridge_regressions(coupling, sigma, batch.t, x_t)
    residual = batch.weight * batch.target[:, 0] - (expected_x1 - x_t) / sigma ** 2
    _assert_orthogonal(residual, x_t, batch.t)


def test_bdbm_targets_project_onto_the_backward_drift(rng: np.random.Generator) -> None:
    sigma = 0.7
    sde = LinearRefSDE.brownian(sigma)
    coupling = _empirical_gaussian_coupling(50_000, rng)
    batch = make_bdbm_batch(coupling, sde, 200_000, rng, 1.0)
    x_t = batch.x_t[:, 0]
    expected_x0, _ = _bridge_regressions(coupling, sigma, batch.t, x_t)
    residual = batch.weight * batch.target[:, 0] - (expected_x0 - x_t) / sigma ** 2
    _assert_orthogonal(residual, x_t, batch.t)
