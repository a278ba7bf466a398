"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: analytic_mixture.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Closed-form densities, scores and transport drifts when the endpoint distributions are isotropic Gaussian mixtures (point masses allowed at the endpoints).
# // AR
# +==== END bridgelab =================+
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

try:
    from . import constants as CONST
    from .reference_sde import LinearRefSDE, bridge_coefficients, delta_moments
except ImportError:
    import constants as CONST
    from reference_sde import LinearRefSDE, bridge_coefficients, delta_moments


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """sum_k weights_k N(means_k, variances_k I); a zero variance is a point mass.

    Attributes:
        weights: (K,) probabilities, all positive, summing to 1.
        means: (K, d) component means.
        variances: (K,) isotropic component variances.
    """
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self) -> None:
        weights = np.atleast_1d(np.asarray(self.weights, dtype=np.float64))
        means = np.asarray(self.means, dtype=np.float64)
        if means.ndim == 1:
            means = means[:, None]
        variances = np.atleast_1d(np.asarray(self.variances, dtype=np.float64))
        k = weights.size
        if means.shape[0] != k or variances.shape != (k,):
            raise CONST.DomainError(
                f"mixture shapes disagree: weights {weights.shape}, means {means.shape}, variances {variances.shape}"
            )
        if np.any(weights <= 0) or abs(float(weights.sum()) - 1.0) > 1e-12:
            raise CONST.DomainError("mixture weights must be positive and sum to 1")
        if np.any(variances < 0) or not np.all(np.isfinite(variances)) or not np.all(np.isfinite(means)):
            raise CONST.DomainError("mixture variances must be finite and nonnegative")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "variances", variances)

    @classmethod
    def from_components(cls, components: Iterable[Tuple[float, Sequence[float], float]]) -> "GaussianMixture":
        """Build from (weight, mean, standard deviation) triples."""
        items = list(components)
        return cls(
            weights=np.array([item[0] for item in items]),
            means=np.array([np.atleast_1d(item[1]) for item in items]),
            variances=np.array([item[2] ** 2 for item in items]),
        )

    @classmethod
    def single(cls, mean: Sequence[float], std: float) -> "GaussianMixture":
        return cls(weights=np.array([1.0]), means=np.atleast_2d(mean), variances=np.array([std ** 2]))

    @property
    def dim(self) -> int:
        return int(self.means.shape[1])

    @property
    def n_components(self) -> int:
        return int(self.weights.size)

    @property
    def has_point_masses(self) -> bool:
        return bool(np.any(self.variances == 0))

    def mean(self) -> np.ndarray:
        return self.weights @ self.means

    def covariance(self) -> np.ndarray:
        centred = self.means - self.mean()
        d = self.dim
        return (centred.T * self.weights) @ centred + float(self.weights @ self.variances) * np.eye(d)

    def _log_terms(self, points: np.ndarray) -> np.ndarray:
        """log w_k + log N(x; m_k, s_k^2 I) for positive-variance components, shape (n, K+)."""
        positive = self.variances > 0
        if not np.any(positive):
            raise CONST.DomainError("a mixture of point masses has no density")
        means = self.means[positive]
        variances = self.variances[positive]
        d = self.dim
        sq = (
            np.sum(points ** 2, axis=1)[:, None]
            - 2.0 * points @ means.T
            + np.sum(means ** 2, axis=1)[None, :]
        )
        sq = np.maximum(sq, 0.0)
        return (
            np.log(self.weights[positive])[None, :]
            - 0.5 * d * np.log(2.0 * math.pi * variances)[None, :]
            - 0.5 * sq / variances[None, :]
        )

    def log_density(self, x: np.ndarray) -> np.ndarray:
        """Log-density at points x; point masses make the density undefined."""
        if self.has_point_masses:
            raise CONST.DomainError("a mixture with point masses has no density")
        points, shape = _as_points(x, self.dim)
        return _restore_scalar(logsumexp(self._log_terms(points), axis=1), shape, self.dim)

    def density(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.log_density(x))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n points, shape (n, d)."""
        components = rng.choice(self.n_components, size=n, p=self.weights)
        noise = rng.standard_normal((n, self.dim))
        return self.means[components] + np.sqrt(self.variances[components])[:, None] * noise


def _as_points(x: np.ndarray, d: int) -> "Tuple[np.ndarray, object]":
    """Return x as (n, d) points and the shape to restore (None when x already is (n, d)).

    For d = 1 a scalar or an (n,) array is read as that many points.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == d:
        return arr, None
    if d == 1 and arr.ndim <= 1:
        return arr.reshape(-1, 1), arr.shape
    if arr.ndim == 1 and arr.size == d:
        return arr.reshape(1, d), arr.shape
    raise CONST.DomainError(f"points of shape {arr.shape} do not match dimension {d}")


def _restore(values: np.ndarray, shape: object) -> np.ndarray:
    """Undo _as_points on an (n, d) result."""
    if shape is None:
        return values
    return values.reshape(shape)


def _restore_scalar(values: np.ndarray, shape: object, d: int) -> np.ndarray:
    """Undo _as_points on an (n,) per-point result."""
    if shape is None:
        return values
    if d == 1:
        return values.reshape(shape)
    return values.reshape(())


def gm_pushforward(gm: GaussianMixture, sde: LinearRefSDE, t: float) -> GaussianMixture:
    """Marginal at time t of the reference started from the mixture.

    Raises:
        DomainError: t outside (0, tau] or non-isotropic Sigma.
    """
    if not 0.0 < t <= sde.tau:
        raise CONST.DomainError(f"pushforward needs t in (0, {sde.tau}], got {t!r}")
    a, v = delta_moments(sde.alpha, sde.beta.integral(t))
    return GaussianMixture(
        weights=gm.weights,
        means=gm.means * a,
        variances=gm.variances * a ** 2 + v * sde.scalar_variance,
    )


def gm_score(gm: GaussianMixture, x: np.ndarray) -> np.ndarray:
    """Score of the mixture, sum_k w_k(x) (m_k - x) / s_k^2, over positive-variance components."""
    points, shape = _as_points(x, gm.dim)
    log_terms = gm._log_terms(points)
    responsibilities = np.exp(log_terms - logsumexp(log_terms, axis=1, keepdims=True))
    positive = gm.variances > 0
    means = gm.means[positive]
    precisions = 1.0 / gm.variances[positive]
    score = (responsibilities * precisions) @ means - (responsibilities @ precisions)[:, None] * points
    return _restore(score, shape)


def gm_reverse_drift(gm_initial: GaussianMixture, sde: LinearRefSDE, x: np.ndarray, t: float) -> np.ndarray:
    """Drift at reverse time t of the time-reversed reference started from gm_initial.

    alpha beta_r x + beta_r Sigma score_r(x), with r = tau - t.

    Raises:
        DomainError: t outside [0, tau).
    """
    if not 0.0 <= t < sde.tau:
        raise CONST.DomainError(f"reverse drift needs t in [0, {sde.tau}), got {t!r}")
    r = sde.tau - t
    beta_r = float(sde.beta.beta(r))
    marginal = gm_pushforward(gm_initial, sde, r)
    points, shape = _as_points(x, gm_initial.dim)
    drift = sde.alpha * beta_r * points + beta_r * sde.scalar_variance * gm_score(marginal, points)
    return _restore(drift, shape)


def gm_bridge_marginal(c0: GaussianMixture, c1: GaussianMixture, sde: LinearRefSDE, t: float) -> GaussianMixture:
    """Marginal at time t of the bridge mixture over the independent coupling c0 x c1."""
    if not 0.0 <= t <= sde.tau:
        raise CONST.DomainError(f"bridge marginal needs t in [0, {sde.tau}], got {t!r}")
    coefficients = bridge_coefficients(sde, 0.0, t, sde.tau)
    a_hat = float(coefficients.a_hat)
    a_check = float(coefficients.a_check)
    weights = np.outer(c0.weights, c1.weights).ravel()
    means = (a_hat * c0.means[:, None, :] + a_check * c1.means[None, :, :]).reshape(-1, c0.dim)
    variances = (
        a_hat ** 2 * c0.variances[:, None]
        + a_check ** 2 * c1.variances[None, :]
        + float(coefficients.v_bridge) * sde.scalar_variance
    ).ravel()
    return GaussianMixture(weights=weights / weights.sum(), means=means, variances=variances)


def _pair_posterior(
    c0: GaussianMixture,
    c1: GaussianMixture,
    sde: LinearRefSDE,
    points: np.ndarray,
    t: float,
    forward: bool
) -> np.ndarray:
    """E[endpoint | X_t = x] under the pairwise bridge mixture, evaluated in log-space.

    forward=True predicts X_tau, forward=False predicts X_0.
    """
    coefficients = bridge_coefficients(sde, 0.0, t, sde.tau)
    a_hat = float(coefficients.a_hat)
    a_check = float(coefficients.a_check)
    d = c0.dim
    pair_means = (a_hat * c0.means[:, None, :] + a_check * c1.means[None, :, :]).reshape(-1, d)
    s0 = np.repeat(c0.variances, c1.n_components)
    s1 = np.tile(c1.variances, c0.n_components)
    pair_vars = a_hat ** 2 * s0 + a_check ** 2 * s1 + float(coefficients.v_bridge) * sde.scalar_variance
    log_prior = np.log(np.outer(c0.weights, c1.weights).ravel())
    sq = (
        np.sum(points ** 2, axis=1)[:, None]
        - 2.0 * points @ pair_means.T
        + np.sum(pair_means ** 2, axis=1)[None, :]
    )
    sq = np.maximum(sq, 0.0)
    positive = pair_vars > 0
    safe_vars = np.where(positive, pair_vars, 1.0)
    log_lik = np.where(
        positive[None, :],
        -0.5 * d * np.log(2.0 * math.pi * safe_vars)[None, :] - 0.5 * sq / safe_vars[None, :],
        np.where(sq <= 1e-24 * (1.0 + np.sum(points ** 2, axis=1))[:, None], 0.0, -np.inf),
    )
    log_resp = log_prior[None, :] + log_lik
    top = np.max(log_resp, axis=1, keepdims=True)
    if np.any(~np.isfinite(top)):
        raise CONST.DomainError("a point lies outside the support of every bridge pair")
    log_resp = np.where(log_resp < top - CONST.PRUNE_LOG_GAP, -np.inf, log_resp)
    responsibilities = np.exp(log_resp - logsumexp(log_resp, axis=1, keepdims=True))
    if forward:
        endpoint_means = np.tile(c1.means, (c0.n_components, 1))
        gains = np.where(positive, a_check * s1 / safe_vars, 0.0)
    else:
        endpoint_means = np.repeat(c0.means, c1.n_components, axis=0)
        gains = np.where(positive, a_hat * s0 / safe_vars, 0.0)
    weighted_gain = responsibilities * gains
    return (
        responsibilities @ endpoint_means
        + weighted_gain.sum(axis=1)[:, None] * points
        - weighted_gain @ pair_means
    )


def gm_dbm_drift(
    c0: GaussianMixture,
    c1: GaussianMixture,
    sde: LinearRefSDE,
    x: np.ndarray,
    t: float,
    direction: CONST.Direction
) -> np.ndarray:
    """Drift of the DBM (forward) or BDBM (backward) transport over the independent coupling c0 x c1.

    Forward at time t: -alpha beta_t x + beta_t (E[X_tau | x] a(t, tau) - x a(t, tau)^2) / v(t, tau).
    Backward at reverse time t, r = tau - t: alpha beta_r x + beta_r (E[X_0 | X_r = x] a(0, r) - x) / v(0, r).

    Arguments:
        c0 (GaussianMixture): Law of X_0.
        c1 (GaussianMixture): Law of X_tau.
        sde (LinearRefSDE): Isotropic reference.
        x (np.ndarray): Points (n, d).
        t (float): Time in [0, tau), forward time for FORWARD and reverse time for BACKWARD.
        direction (CONST.Direction): Which transport.

    Returns:
        np.ndarray: Drift with the shape of x.

    Raises:
        DomainError: t outside [0, tau) or mismatched dimensions.
    """
    if c0.dim != c1.dim:
        raise CONST.DomainError("endpoint mixtures must share a dimension")
    if not 0.0 <= t < sde.tau:
        raise CONST.DomainError(f"DBM drift needs t in [0, {sde.tau}), got {t!r}")
    points, shape = _as_points(x, c0.dim)
    b_tau = sde.beta.integral(sde.tau)
    if direction == CONST.Direction.FORWARD:
        terminal = _pair_posterior(c0, c1, sde, points, t, forward=True)
        beta_t = float(sde.beta.beta(t))
        a, v = delta_moments(sde.alpha, b_tau - sde.beta.integral(t))
        drift = -sde.alpha * beta_t * points + beta_t * (a * terminal - a * a * points) / v
    else:
        r = sde.tau - t
        initial = _pair_posterior(c0, c1, sde, points, r, forward=False)
        beta_r = float(sde.beta.beta(r))
        a, v = delta_moments(sde.alpha, sde.beta.integral(r))
        drift = sde.alpha * beta_r * points + beta_r * (a * initial - points) / v
    return _restore(drift, shape)


def mixture_drift_field(c0: GaussianMixture, c1: GaussianMixture, sde: LinearRefSDE, direction: CONST.Direction) -> Callable[[np.ndarray, float], np.ndarray]:
    """The DBM/BDBM drift as a (points, time) evaluator."""

    def drift(x: np.ndarray, t: float) -> np.ndarray:
        return gm_dbm_drift(c0, c1, sde, x, t, direction)

    return drift


def reverse_drift_field(gm_initial: GaussianMixture, sde: LinearRefSDE) -> Callable[[np.ndarray, float], np.ndarray]:
    """The time-reversed reference drift as a (points, time) evaluator."""

    def drift(x: np.ndarray, t: float) -> np.ndarray:
        return gm_reverse_drift(gm_initial, sde, x, t)

    return drift


def drift_field_grid(drift: Callable[[np.ndarray, float], np.ndarray], xs: np.ndarray, ts: np.ndarray) -> List[Tuple[float, float, float]]:
    """Evaluate a 1D drift on the grid xs x ts, as (x, t, drift) rows ordered by t then x."""
    points = np.asarray(xs, dtype=np.float64).reshape(-1, 1)
    rows: List[Tuple[float, float, float]] = []
    for t in np.asarray(ts, dtype=np.float64):
        values = np.asarray(drift(points, float(t))).reshape(-1)
        rows.extend(zip(points[:, 0].tolist(), [float(t)] * points.shape[0], values.tolist()))
    return rows
