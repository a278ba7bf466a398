"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: bridge_losses.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Regression batches for score matching, bridge matching in both directions and drift matching, plus the weighted squared loss.
# // AR
# +==== END bridgelab =================+
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

try:
    from . import constants as CONST
    from .reference_sde import LinearRefSDE, delta_moments, score_backward, score_forward, transition_moments
    from .sde_engine import CouplingSamples, PathBatch, sample_bridge_batch
except ImportError:
    import constants as CONST
    from reference_sde import LinearRefSDE, delta_moments, score_backward, score_forward, transition_moments
    from sde_engine import CouplingSamples, PathBatch, sample_bridge_batch

Sampler = Callable[[int, np.random.Generator], np.ndarray]


@dataclass(frozen=True, eq=False)
class LossBatch:
    """One regression batch.

    Attributes:
        x_t: (n, d) inputs.
        t: (n,) forward times fed to the model next to x_t.
        target: (n, d) regression targets.
        weight: (n,) positive loss weights.
    """
    x_t: np.ndarray
    t: np.ndarray
    target: np.ndarray
    weight: np.ndarray

    def __post_init__(self) -> None:
        x_t = np.asarray(self.x_t, dtype=np.float64)
        n = x_t.shape[0] if x_t.ndim == 2 else -1
        if n < 1 or np.shape(self.t) != (n,) or np.shape(self.target) != x_t.shape or np.shape(self.weight) != (n,):
            raise CONST.DomainError(
                f"inconsistent loss batch: x_t {x_t.shape}, t {np.shape(self.t)}, target {np.shape(self.target)}, weight {np.shape(self.weight)}"
            )
        weight = np.asarray(self.weight, dtype=np.float64)
        if not np.all(np.isfinite(weight)) or np.any(weight <= 0):
            raise CONST.DomainError("loss weights must be finite and positive")
        object.__setattr__(self, "x_t", x_t)
        object.__setattr__(self, "t", np.asarray(self.t, dtype=np.float64))
        object.__setattr__(self, "target", np.asarray(self.target, dtype=np.float64))
        object.__setattr__(self, "weight", weight)

    @property
    def n(self) -> int:
        return int(self.x_t.shape[0])


def _uniform_times(rng: np.random.Generator, n: int, low: float, high: float) -> np.ndarray:
    return np.clip(rng.uniform(low, high, size=n), CONST.TIME_FLOOR, None)


def _check_horizon(sde: LinearRefSDE, t_max: float) -> float:
    t_max = float(t_max)
    if not 0.0 < t_max <= sde.tau:
        raise CONST.DomainError(f"t_max must lie in (0, {sde.tau}], got {t_max!r}")
    return min(t_max, sde.tau - CONST.TIME_FLOOR)


def _check_convention(sde: LinearRefSDE, convention: CONST.TargetConvention) -> None:
    if convention is CONST.TargetConvention.DRIFT and not sde.is_brownian:
        raise CONST.DomainError("drift targets need alpha = 0 and a constant schedule")


def make_sgm_batch(gamma_sampler: Sampler, sde: LinearRefSDE, n: int, rng: np.random.Generator) -> LossBatch:
    """t ~ U(0, tau), X0 ~ Gamma, X_t ~ R_{t|0}, target the score of R_{t|0} at X_t, weight v(0, t)."""
    x0 = np.asarray(gamma_sampler(n, rng), dtype=np.float64)
    if x0.shape != (n, sde.dim):
        raise CONST.DomainError(f"Gamma sampler returned {x0.shape}, expected ({n}, {sde.dim})")
    t = _uniform_times(rng, n, 0.0, sde.tau)
    a, v = delta_moments(sde.alpha, sde.beta.integral(t))
    x_t = a[:, None] * x0 + np.sqrt(v)[:, None] * sde.correlate(rng.standard_normal(x0.shape))
    return LossBatch(x_t=x_t, t=t, target=score_backward(sde, 0.0, t, x0, x_t), weight=v)


def _coupling_rows(coupling: CouplingSamples, n: int, rng: np.random.Generator) -> CouplingSamples:
    rows = rng.integers(0, coupling.n, size=n)
    return CouplingSamples(x0=coupling.x0[rows], x_end=coupling.x_end[rows])


def make_bdbm_batch(
    coupling: CouplingSamples,
    sde: LinearRefSDE,
    n: int,
    rng: np.random.Generator,
    t_max: float,
    convention: CONST.TargetConvention = CONST.TargetConvention.SCORE
) -> LossBatch:
    """Backward bridge matching batch.

    The time runs backward from tau: t = tau - r with r ~ U(0, t_max), so
    t_max plays for the backward model the role it plays for make_dbm_batch.

    Arguments:
        coupling (CouplingSamples): Cached endpoint pairs, resampled with replacement.
        sde (LinearRefSDE): The reference.
        n (int): Batch size.
        rng (np.random.Generator): Caller stream.
        t_max (float): Horizon in reverse time.
        convention (TargetConvention): SCORE regresses grad log r_{t|0}(X_t | X0) with weight v(0, t); DRIFT regresses (X0 - X_t) / t with unit weight. Default: TargetConvention.SCORE

    Returns:
        LossBatch: The batch.
    """
    _check_convention(sde, convention)
    horizon = _check_horizon(sde, t_max)
    rows = _coupling_rows(coupling, n, rng)
    t = np.clip(sde.tau - rng.uniform(0.0, horizon, size=n), CONST.TIME_FLOOR, sde.tau - CONST.TIME_FLOOR)
    x_t = sample_bridge_batch(rows, sde, t, rng)
    if convention is CONST.TargetConvention.DRIFT:
        return LossBatch(x_t=x_t, t=t, target=(rows.x0 - x_t) / t[:, None], weight=np.ones(n))
    weight = transition_moments(sde, 0.0, t).v
    return LossBatch(x_t=x_t, t=t, target=score_backward(sde, 0.0, t, rows.x0, x_t), weight=weight)


def make_dbm_batch(
    coupling: CouplingSamples,
    sde: LinearRefSDE,
    n: int,
    rng: np.random.Generator,
    t_max: float,
    convention: CONST.TargetConvention = CONST.TargetConvention.SCORE
) -> LossBatch:
    """Forward bridge matching batch: t ~ U(0, t_max).

    SCORE regresses grad_{X_t} log r_{tau|t}(X_tau | X_t) with weight v(t, tau);
    DRIFT regresses (X_tau - X_t) / (tau - t) with unit weight.
    """
    _check_convention(sde, convention)
    horizon = _check_horizon(sde, t_max)
    rows = _coupling_rows(coupling, n, rng)
    t = _uniform_times(rng, n, 0.0, horizon)
    x_t = sample_bridge_batch(rows, sde, t, rng)
    if convention is CONST.TargetConvention.DRIFT:
        return LossBatch(x_t=x_t, t=t, target=(rows.x_end - x_t) / (sde.tau - t)[:, None], weight=np.ones(n))
    weight = transition_moments(sde, t, sde.tau).v
    return LossBatch(x_t=x_t, t=t, target=score_forward(sde, t, sde.tau, x_t, rows.x_end), weight=weight)


def make_drift_matching_batch(paths: PathBatch, n: int, rng: np.random.Generator) -> LossBatch:
    """Random (path, step) pairs with target (X_{t+dt} - X_t) / dt and unit weight."""
    rows = rng.integers(0, paths.n_paths, size=n)
    steps = rng.integers(0, paths.n_steps, size=n)
    x_t = paths.values[rows, steps]
    target = (paths.values[rows, steps + 1] - x_t) / paths.dt
    return LossBatch(x_t=x_t, t=paths.times[steps], target=target, weight=np.ones(n))


def weighted_mse(pred: np.ndarray, batch: LossBatch) -> Tuple[float, np.ndarray]:
    """Mean over the batch of weight * ||pred - target||^2, and its gradient wrt pred.

    Raises:
        DomainError: pred shape differs from the targets.
    """
    pred = np.asarray(pred, dtype=np.float64)
    if pred.shape != batch.target.shape:
        raise CONST.DomainError(f"prediction shape {pred.shape} differs from target shape {batch.target.shape}")
    residual = pred - batch.target
    loss = float(np.mean(batch.weight * np.sum(residual * residual, axis=1)))
    grad = 2.0 * batch.weight[:, None] * residual / batch.n
    return loss, grad
