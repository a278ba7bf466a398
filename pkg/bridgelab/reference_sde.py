"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: reference_sde.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Exact transition, score and bridge arithmetic for the linear reference process dY = -alpha beta_t Y dt + sqrt(beta_t) Sigma^1/2 dW.
# // AR
# +==== END bridgelab =================+
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

try:
    from . import constants as CONST
except ImportError:
    import constants as CONST

TimeLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class BetaSchedule:
    """Instantaneous intensity beta_t of the time change and its integral b_t.

    Use the `constant` and `ve` constructors rather than the raw fields.

    Attributes:
        kind: which closed form applies.
        value: the constant intensity (CONSTANT only).
        sigma_min: lower noise level (VE only).
        sigma_max: upper noise level (VE only).
    """
    kind: CONST.ScheduleKind = CONST.ScheduleKind.CONSTANT
    value: float = 1.0
    sigma_min: float = 0.01
    sigma_max: float = 50.0

    def __post_init__(self) -> None:
        if self.kind == CONST.ScheduleKind.CONSTANT:
            if not (math.isfinite(self.value) and self.value > 0):
                raise CONST.DomainError(
                    f"constant schedule needs a positive intensity, got {self.value!r}"
                )
        elif self.kind == CONST.ScheduleKind.VE:
            if not (0 < self.sigma_min < self.sigma_max and math.isfinite(self.sigma_max)):
                raise CONST.DomainError(
                    f"ve schedule needs sigma_max > sigma_min > 0, got ({self.sigma_min!r}, {self.sigma_max!r})"
                )
        else:
            raise CONST.DomainError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def constant(cls, value: float = 1.0) -> "BetaSchedule":
        return cls(kind=CONST.ScheduleKind.CONSTANT, value=float(value))

    @classmethod
    def ve(cls, sigma_min: float, sigma_max: float) -> "BetaSchedule":
        return cls(kind=CONST.ScheduleKind.VE, sigma_min=float(sigma_min), sigma_max=float(sigma_max))

    @property
    def is_constant(self) -> bool:
        return self.kind == CONST.ScheduleKind.CONSTANT

    def beta(self, t: TimeLike) -> TimeLike:
        """Evaluate beta_t.

        Arguments:
            t (TimeLike): Scalar time or array of times.

        Returns:
            TimeLike: beta at each time, same shape as t.
        """
        if self.kind == CONST.ScheduleKind.CONSTANT:
            if np.ndim(t) == 0:
                return self.value
            return np.full(np.shape(t), self.value, dtype=np.float64)
        ratio = self.sigma_max / self.sigma_min
        return self.sigma_min ** 2 * np.power(ratio, 2.0 * np.asarray(t, dtype=np.float64)) * 2.0 * math.log(ratio)

    def integral(self, t: TimeLike) -> TimeLike:
        """Closed form of b_t = int_0^t beta_u du (never quadrature)."""
        if self.kind == CONST.ScheduleKind.CONSTANT:
            return self.value * np.asarray(t, dtype=np.float64) if np.ndim(t) else self.value * float(t)
        ratio = self.sigma_max / self.sigma_min
        return self.sigma_min ** 2 * np.expm1(2.0 * np.asarray(t, dtype=np.float64) * math.log(ratio))


@dataclass(frozen=True, eq=False)
class LinearRefSDE:
    """The reference diffusion dY_t = -alpha beta_t Y_t dt + sqrt(beta_t) Sigma^1/2 dW_t on [0, tau].

    Attributes:
        alpha: mean reversion, nonnegative.
        sigma_cov: the SPD noise covariance Sigma (d x d).
        beta: the time change schedule.
        tau: the horizon.
    """
    alpha: float
    sigma_cov: np.ndarray
    beta: BetaSchedule = field(default_factory=BetaSchedule.constant)
    tau: float = 1.0
    _chol: np.ndarray = field(init=False, repr=False)
    _cov_inv: np.ndarray = field(init=False, repr=False)
    _diag: Optional[np.ndarray] = field(init=False, repr=False)
    _scalar: Optional[float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise CONST.DomainError(f"alpha must be finite and nonnegative, got {self.alpha!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise CONST.DomainError(f"tau must be positive, got {self.tau!r}")
        decay = self.alpha * float(self.beta.integral(float(self.tau)))
        if not decay <= CONST.MAX_DECAY_EXPONENT:
            raise CONST.DomainError(
                f"alpha * b_tau = {decay:.6g} exceeds {CONST.MAX_DECAY_EXPONENT}; the transition factor exp(-alpha b) underflows, "
                "lower alpha, tau or sigma_max"
            )
        cov = np.atleast_2d(np.asarray(self.sigma_cov, dtype=np.float64))
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise CONST.DomainError(f"sigma_cov must be square, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)) or not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(cov).max()))):
            raise CONST.DomainError("sigma_cov must be finite and symmetric")
        cov = 0.5 * (cov + cov.T)
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as error:
            raise CONST.DomainError("sigma_cov must be positive definite") from error
        off_diagonal = cov - np.diag(np.diag(cov))
        diag = np.diag(cov).copy() if not np.any(off_diagonal) else None
        scalar = float(diag[0]) if diag is not None and np.all(diag == diag[0]) else None
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "sigma_cov", cov)
        object.__setattr__(self, "_chol", chol)
        object.__setattr__(self, "_cov_inv", np.linalg.inv(cov))
        object.__setattr__(self, "_diag", diag)
        object.__setattr__(self, "_scalar", scalar)

    @classmethod
    def brownian(cls, sigma: float, dim: int = 1, tau: float = 1.0) -> "LinearRefSDE":
        """The scaled Brownian reference dX = sigma dW."""
        return cls(alpha=0.0, sigma_cov=sigma ** 2 * np.eye(dim), beta=BetaSchedule.constant(1.0), tau=tau)

    @classmethod
    def ornstein_uhlenbeck(cls, alpha: float, sigma: float = 1.0, dim: int = 1, tau: float = 1.0, beta: Optional[BetaSchedule] = None) -> "LinearRefSDE":
        """An isotropic Ornstein-Uhlenbeck reference."""
        return cls(alpha=alpha, sigma_cov=sigma ** 2 * np.eye(dim), beta=beta or BetaSchedule.constant(1.0), tau=tau)

    @property
    def dim(self) -> int:
        return int(self.sigma_cov.shape[0])

    @property
    def chol(self) -> np.ndarray:
        return self._chol

    @property
    def cov_inv(self) -> np.ndarray:
        return self._cov_inv

    @property
    def is_isotropic(self) -> bool:
        return self._scalar is not None

    @property
    def is_brownian(self) -> bool:
        """True for alpha = 0 with a constant schedule, where drifts and terminal predictions coincide."""
        return self.alpha == 0.0 and self.beta.is_constant

    @property
    def scalar_variance(self) -> float:
        """The scalar s of Sigma = s I.

        Raises:
            DomainError: when Sigma is not a multiple of the identity.
        """
        if self._scalar is None:
            raise CONST.DomainError("this operation needs an isotropic Sigma = s I")
        return self._scalar

    def apply_cov(self, vectors: np.ndarray) -> np.ndarray:
        """Multiply row vectors by Sigma."""
        if self._diag is not None:
            return vectors * self._diag
        return vectors @ self.sigma_cov

    def apply_cov_inv(self, vectors: np.ndarray) -> np.ndarray:
        """Multiply row vectors by Sigma^-1."""
        if self._diag is not None:
            return vectors / self._diag
        return vectors @ self._cov_inv

    def correlate(self, normals: np.ndarray) -> np.ndarray:
        """Map standard normal rows to N(0, Sigma) rows."""
        if self._diag is not None:
            return normals * np.sqrt(self._diag)
        return normals @ self._chol.T

    def reference_drift(self, x: np.ndarray, t: TimeLike) -> np.ndarray:
        """mu_R(x, t) = -alpha beta_t x."""
        if self.alpha == 0.0:
            return np.zeros_like(x)
        return -self.alpha * _expand(self.beta.beta(t), x) * x


@dataclass(frozen=True)
class TransitionMoments:
    """Y_t | Y_s ~ N(a Y_s, v Sigma).

    Attributes:
        a: the mean factor in (0, 1].
        v: the variance factor, strictly positive.
    """
    a: TimeLike
    v: TimeLike

    def __post_init__(self) -> None:
        a = np.asarray(self.a)
        v = np.asarray(self.v)
        if np.any(~(a > 0)) or np.any(a > 1):
            raise CONST.DomainError("transition factor a must lie in (0, 1]")
        if np.any(~(v > 0)):
            raise CONST.DomainError("transition variance v must be positive (requires t > s)")


@dataclass(frozen=True)
class BridgeMoments:
    """Y_t | (Y_s, Y_u) ~ N(a_hat Y_s + a_check Y_u, v_bridge Sigma)."""
    a_hat: TimeLike
    a_check: TimeLike
    v_bridge: TimeLike


def _expand(coefficient: TimeLike, points: np.ndarray) -> TimeLike:
    """Make a per-row coefficient broadcast against an (n, d) array of points."""
    if np.ndim(coefficient) == 0 or np.ndim(points) < 2:
        return coefficient
    return np.asarray(coefficient)[..., None]


def _check_times(sde: LinearRefSDE, *times: TimeLike) -> None:
    for t in times:
        arr = np.asarray(t, dtype=np.float64)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > sde.tau):
            raise CONST.DomainError(f"time outside [0, {sde.tau}]: {t!r}")


def delta_moments(alpha: float, delta_b: TimeLike) -> "tuple[TimeLike, TimeLike]":
    """Transition factors for an elapsed b-time delta_b >= 0, with no validation.

    delta_b = 0 gives (1, 0), which the bridge formulas rely on at the pins.

    Arguments:
        alpha (float): Mean reversion.
        delta_b (TimeLike): Elapsed integrated intensity.

    Returns:
        tuple[TimeLike, TimeLike]: (a, v).
    """
    db = np.asarray(delta_b, dtype=np.float64)
    if alpha == 0.0:
        a = np.ones_like(db)
        v = db.copy()
    else:
        x = alpha * db
        a = np.exp(-x)
        series = db - alpha * db ** 2 + (2.0 / 3.0) * alpha ** 2 * db ** 3
        with np.errstate(divide="ignore", invalid="ignore"):
            closed = -np.expm1(-2.0 * x) / (2.0 * alpha)
        v = np.where(x < CONST.SERIES_THRESHOLD, series, closed)
    if np.ndim(delta_b) == 0:
        return float(a), float(v)
    return a, v


def integrate_beta(sde: LinearRefSDE, t: TimeLike) -> TimeLike:
    """Integrated intensity b_t.

    Arguments:
        sde (LinearRefSDE): The reference.
        t (TimeLike): Time(s) in [0, tau].

    Returns:
        TimeLike: b_t, zero at t = 0 and strictly increasing.

    Raises:
        DomainError: t outside [0, tau].
    """
    _check_times(sde, t)
    return sde.beta.integral(t)


def transition_moments(sde: LinearRefSDE, s: TimeLike, t: TimeLike) -> TransitionMoments:
    """Moments of Y_t given Y_s, evaluated in b-time.

    Raises:
        DomainError: when s >= t or either time is outside [0, tau].
    """
    _check_times(sde, s, t)
    if np.any(np.asarray(s) >= np.asarray(t)):
        raise CONST.DomainError(f"transition needs s < t, got s={s!r}, t={t!r}")
    a, v = delta_moments(sde.alpha, sde.beta.integral(t) - sde.beta.integral(s))
    return TransitionMoments(a=a, v=v)


def transition_log_density(sde: LinearRefSDE, s: TimeLike, t: TimeLike, y_s: np.ndarray, y_t: np.ndarray) -> TimeLike:
    """log p_{t|s}(y_t | y_s), the Gaussian N(a y_s, v Sigma) log-density."""
    moments = transition_moments(sde, s, t)
    y_s = np.asarray(y_s, dtype=np.float64)
    y_t = np.asarray(y_t, dtype=np.float64)
    residual = y_t - _expand(moments.a, y_t) * y_s
    quad = np.sum(sde.apply_cov_inv(residual) * residual, axis=-1) / moments.v
    _, logdet = np.linalg.slogdet(sde.sigma_cov)
    d = sde.dim
    return -0.5 * (quad + d * np.log(2.0 * np.pi * np.asarray(moments.v)) + logdet)


def score_backward(sde: LinearRefSDE, s: TimeLike, t: TimeLike, y_s: np.ndarray, y_t: np.ndarray) -> np.ndarray:
    """Gradient in y_t of log p_{t|s}(y_t | y_s): Sigma^-1 (a y_s - y_t) / v."""
    moments = transition_moments(sde, s, t)
    y_s = np.asarray(y_s, dtype=np.float64)
    y_t = np.asarray(y_t, dtype=np.float64)
    residual = (_expand(moments.a, y_t) * y_s - y_t) / _expand(moments.v, y_t)
    return sde.apply_cov_inv(residual)


def score_forward(sde: LinearRefSDE, s: TimeLike, t: TimeLike, y_s: np.ndarray, y_t: np.ndarray) -> np.ndarray:
    """Gradient in y_s of log p_{t|s}(y_t | y_s): Sigma^-1 (y_t / a - y_s) a^2 / v."""
    moments = transition_moments(sde, s, t)
    y_s = np.asarray(y_s, dtype=np.float64)
    y_t = np.asarray(y_t, dtype=np.float64)
    a = _expand(moments.a, y_s)
    residual = (a * y_t - a * a * y_s) / _expand(moments.v, y_s)
    return sde.apply_cov_inv(residual)


def bridge_coefficients(sde: LinearRefSDE, s: TimeLike, t: TimeLike, u: TimeLike) -> BridgeMoments:
    """Bridge factors for s <= t <= u with s < u, pins included.

    At t = s this returns (1, 0, 0) and at t = u it returns (0, 1, 0).
    """
    b_s = sde.beta.integral(s)
    b_t = sde.beta.integral(t)
    b_u = sde.beta.integral(u)
    a_st, v_st = delta_moments(sde.alpha, np.maximum(b_t - b_s, 0.0))
    a_tu, v_tu = delta_moments(sde.alpha, np.maximum(b_u - b_t, 0.0))
    denominator = v_st * a_tu ** 2 + v_tu
    return BridgeMoments(
        a_hat=v_tu * a_st / denominator,
        a_check=v_st * a_tu / denominator,
        v_bridge=v_st * v_tu / denominator,
    )


def bridge_moments(sde: LinearRefSDE, s: TimeLike, t: TimeLike, u: TimeLike) -> BridgeMoments:
    """Moments of Y_t given (Y_s, Y_u) for 0 <= s < t < u <= tau.

    Raises:
        DomainError: ordering violation or times outside [0, tau].
    """
    _check_times(sde, s, t, u)
    if np.any(np.asarray(s) >= np.asarray(t)) or np.any(np.asarray(t) >= np.asarray(u)):
        raise CONST.DomainError(f"bridge needs s < t < u, got ({s!r}, {t!r}, {u!r})")
    return bridge_coefficients(sde, s, t, u)


def bridge_drift(sde: LinearRefSDE, x: np.ndarray, t: TimeLike, x_end: np.ndarray) -> np.ndarray:
    """Drift of the reference pinned to hit x_end at tau.

    mu_R(x, t) + Sigma_R score_forward(t, tau, x, x_end); Sigma cancels so the
    result is -alpha beta_t x + beta_t (a x_end - a^2 x) / v.

    Raises:
        DomainError: t >= tau.
    """
    _check_times(sde, t)
    if np.any(np.asarray(t) >= sde.tau):
        raise CONST.DomainError(f"bridge drift needs t < tau, got {t!r}")
    x = np.asarray(x, dtype=np.float64)
    x_end = np.asarray(x_end, dtype=np.float64)
    a, v = delta_moments(sde.alpha, sde.beta.integral(sde.tau) - sde.beta.integral(t))
    beta_t = _expand(sde.beta.beta(t), x)
    a = _expand(a, x)
    v = _expand(v, x)
    return -sde.alpha * beta_t * x + beta_t * (a * x_end - a * a * x) / v


def sample_bridge_point(sde: LinearRefSDE, x0: np.ndarray, x_end: np.ndarray, t: TimeLike, rng: np.random.Generator) -> np.ndarray:
    """Exact draw of X_t from the reference pinned at x0 (time 0) and x_end (time tau).

    Raises:
        DomainError: t outside (0, tau).
    """
    _check_times(sde, t)
    if np.any(np.asarray(t) <= 0) or np.any(np.asarray(t) >= sde.tau):
        raise CONST.DomainError(f"bridge point needs 0 < t < tau, got {t!r}")
    x0 = np.asarray(x0, dtype=np.float64)
    x_end = np.asarray(x_end, dtype=np.float64)
    moments = bridge_coefficients(sde, 0.0, t, sde.tau)
    shape = np.broadcast_shapes(x0.shape, x_end.shape)
    noise = sde.correlate(rng.standard_normal(shape))
    return (
        _expand(moments.a_hat, x0) * x0
        + _expand(moments.a_check, x0) * x_end
        + _expand(np.sqrt(moments.v_bridge), noise) * noise
    )
