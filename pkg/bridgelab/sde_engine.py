"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: sde_engine.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Path simulation on uniform grids, exact bridge batch sampling, time reversal and the path functionals (control cost, Girsanov log ratio, terminal estimator).
# // AR
# +==== END bridgelab =================+
"""

from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Union

import numpy as np

try:
    from . import constants as CONST
    from .rogger import RI
    from .reference_sde import LinearRefSDE, bridge_coefficients
except ImportError:
    import constants as CONST
    from rogger import RI
    from reference_sde import LinearRefSDE, bridge_coefficients

DriftField = Callable[[np.ndarray, float], np.ndarray]
RngLike = Union[int, np.random.Generator, np.random.SeedSequence]


@dataclass(frozen=True, eq=False)
class PathBatch:
    """Sample paths on the uniform grid 0 = t_0 < ... < t_m = tau.

    Attributes:
        times: (m+1,) grid.
        values: (n, m+1, d) states.
        dt: the grid step.
    """
    times: np.ndarray
    values: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 3 or times.ndim != 1 or values.shape[1] != times.size or times.size < 2:
            raise CONST.DomainError(f"path values {values.shape} do not fit a grid of {times.size} times")
        if not np.allclose(np.diff(times), self.dt, rtol=1e-9, atol=1e-12):
            raise CONST.DomainError("path grids must be uniform with step dt")
        if not np.all(np.isfinite(values)):
            raise CONST.DomainError("path values must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def n_paths(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_steps(self) -> int:
        return int(self.values.shape[1] - 1)

    @property
    def dim(self) -> int:
        return int(self.values.shape[2])

    @property
    def initial(self) -> np.ndarray:
        return self.values[:, 0, :]

    @property
    def terminal(self) -> np.ndarray:
        return self.values[:, -1, :]

    def endpoints(self) -> "CouplingSamples":
        return CouplingSamples(x0=self.initial.copy(), x_end=self.terminal.copy())


@dataclass(frozen=True, eq=False)
class CouplingSamples:
    """Endpoint pairs (x0[i], x_end[i]) of an empirical coupling."""
    x0: np.ndarray
    x_end: np.ndarray

    def __post_init__(self) -> None:
        x0 = np.asarray(self.x0, dtype=np.float64)
        x_end = np.asarray(self.x_end, dtype=np.float64)
        if x0.ndim != 2 or x0.shape != x_end.shape or x0.shape[0] == 0:
            raise CONST.DomainError(f"coupling samples need equal nonempty (n, d) arrays, got {x0.shape} and {x_end.shape}")
        if not (np.all(np.isfinite(x0)) and np.all(np.isfinite(x_end))):
            raise CONST.DomainError("coupling samples must be finite")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "x_end", x_end)

    @property
    def n(self) -> int:
        return int(self.x0.shape[0])

    @property
    def dim(self) -> int:
        return int(self.x0.shape[1])

    def swapped(self) -> "CouplingSamples":
        return CouplingSamples(x0=self.x_end, x_end=self.x0)

    def cross_covariance(self) -> np.ndarray:
        centred0 = self.x0 - self.x0.mean(axis=0)
        centred1 = self.x_end - self.x_end.mean(axis=0)
        return centred0.T @ centred1 / (self.n - 1)

    def correlation(self) -> float:
        """Mean over coordinates of the correlation between x0[:, k] and x_end[:, k]."""
        std0 = self.x0.std(axis=0, ddof=1)
        std1 = self.x_end.std(axis=0, ddof=1)
        return float(np.mean(np.diag(self.cross_covariance()) / (std0 * std1)))


@dataclass(frozen=True, eq=False)
class EndpointRun:
    """Result of an endpoint-only simulation.

    Attributes:
        samples: starting points and the state reached at stop_time.
        stop_time: the grid time of samples.x_end.
        control_cost: per-path accumulated int ||u||^2_{Sigma_R^-1} dt, when requested.
    """
    samples: CouplingSamples
    stop_time: float
    control_cost: Optional[np.ndarray] = None


def resolve_seed(rng: RngLike) -> np.random.SeedSequence:
    """Turn an int seed, a Generator or a SeedSequence into the SeedSequence keying the streams."""
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(0, 2 ** 63 - 1)))
    if isinstance(rng, (int, np.integer)) and not isinstance(rng, bool):
        return np.random.SeedSequence(int(rng))
    raise CONST.DomainError(f"cannot build a random stream from {rng!r}")


def stream(seed: np.random.SeedSequence, *key: int) -> np.random.Generator:
    """Counter-based Philox generator keyed by (seed, key...)."""
    child = np.random.SeedSequence(entropy=seed.entropy, spawn_key=tuple(seed.spawn_key) + tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(child))


def make_generator(rng: RngLike) -> np.random.Generator:
    """A Generator for caller-side sampling (batch construction, endpoint draws)."""
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(resolve_seed(rng))


def _check_drift_output(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if values.shape != x.shape:
        raise CONST.DomainError(f"drift returned shape {values.shape} for points of shape {x.shape}")
    return values


def _beta_at(sde: LinearRefSDE, t: float, reverse_time: bool) -> float:
    return float(sde.beta.beta(sde.tau - t if reverse_time else t))


def _simulate_chunk(
    drift: DriftField,
    sde: LinearRefSDE,
    x0: np.ndarray,
    m_steps: int,
    generator: np.random.Generator,
    deterministic_last_step: bool,
    reverse_time: bool,
    keep_paths: bool,
    stop_step: int,
    cost_field: Optional[DriftField],
) -> "tuple[Optional[np.ndarray], np.ndarray, Optional[np.ndarray]]":
    dt = sde.tau / m_steps
    x = x0.copy()
    paths = None
    if keep_paths:
        paths = np.empty((x.shape[0], stop_step + 1, x.shape[1]))
        paths[:, 0, :] = x
    cost = np.zeros(x.shape[0]) if cost_field is not None else None
    for k in range(stop_step):
        t = k * dt
        beta = _beta_at(sde, t, reverse_time)
        increment = _check_drift_output(drift(x, t), x) * dt
        if cost is not None:
            u = _check_drift_output(cost_field(x, t), x)
            cost += np.sum(sde.apply_cov_inv(u) * u, axis=1) / beta * dt
        normals = generator.standard_normal(x.shape)
        if not (deterministic_last_step and k == m_steps - 1):
            increment = increment + np.sqrt(beta * dt) * sde.correlate(normals)
        x = x + increment
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > CONST.DIVERGENCE_THRESHOLD:
            raise CONST.SimulationDiverged("Euler simulation diverged", at_time=(k + 1) * dt, step=k + 1)
        if paths is not None:
            paths[:, k + 1, :] = x
    return paths, x, cost


def _run_chunks(
    drift: DriftField,
    sde: LinearRefSDE,
    x0: np.ndarray,
    m_steps: int,
    rng: RngLike,
    deterministic_last_step: bool,
    reverse_time: bool,
    keep_paths: bool,
    stop_step: int,
    cost_field: Optional[DriftField],
    workers: Optional[int],
) -> "List[tuple[Optional[np.ndarray], np.ndarray, Optional[np.ndarray]]]":
    if m_steps < 1:
        raise CONST.DomainError(f"m_steps must be at least 1, got {m_steps}")
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.ndim != 2 or x0.shape[1] != sde.dim:
        raise CONST.DomainError(f"starting points must be (n, {sde.dim}), got {x0.shape}")
    seed = resolve_seed(rng)
    size = CONST.RNG_CHUNK_SIZE
    starts = list(range(0, x0.shape[0], size))

    def run(index: int) -> "tuple[Optional[np.ndarray], np.ndarray, Optional[np.ndarray]]":
        start = starts[index]
        return _simulate_chunk(
            drift, sde, x0[start:start + size], m_steps, stream(seed, index),
            deterministic_last_step, reverse_time, keep_paths, stop_step, cost_field
        )

    n_workers = min(workers or CONST.max_workers(), len(starts))
    RI.log_debug(f"simulating {x0.shape[0]} paths over {m_steps} steps with {n_workers} worker(s)")
    if n_workers <= 1:
        return [run(index) for index in range(len(starts))]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(run, range(len(starts))))


def euler_simulate(
    drift: DriftField,
    sde: LinearRefSDE,
    x0: np.ndarray,
    m_steps: int,
    rng: RngLike,
    deterministic_last_step: bool = False,
    *,
    reverse_time: bool = False,
    workers: Optional[int] = None
) -> PathBatch:
    """Euler-Maruyama paths of dY = drift(Y, t) dt + sqrt(beta) Sigma^1/2 dW.

    Paths are split in fixed-size chunks, each with its own counter-based
    stream keyed by (seed, chunk index), so the worker count never changes
    the output.

    Arguments:
        drift (DriftField): (points, time) -> drift, safe for concurrent calls.
        sde (LinearRefSDE): The reference supplying beta and Sigma.
        x0 (np.ndarray): Starting points (n, d).
        m_steps (int): Number of Euler steps, dt = tau / m_steps.
        rng (RngLike): Seed, Generator or SeedSequence.
        deterministic_last_step (bool): Drop the noise of the final step. Default: False

    Keyword Arguments:
        reverse_time (bool): The process runs in reverse time, beta is read at tau - t. Default: False
        workers (Optional[int]): Thread cap, BRIDGELAB_THREADS or cpu count when None. Default: None

    Returns:
        PathBatch: The simulated paths.

    Raises:
        SimulationDiverged: a state left the finite range, carrying the step index.
    """
    chunks = _run_chunks(
        drift, sde, x0, m_steps, rng, deterministic_last_step,
        reverse_time, True, m_steps, None, workers
    )
    values = np.concatenate([chunk[0] for chunk in chunks], axis=0)
    return PathBatch(times=np.linspace(0.0, sde.tau, m_steps + 1), values=values, dt=sde.tau / m_steps)


def simulate_endpoints(
    drift: DriftField,
    sde: LinearRefSDE,
    x0: np.ndarray,
    m_steps: int,
    rng: RngLike,
    deterministic_last_step: bool = False,
    *,
    reverse_time: bool = False,
    cost_field: Optional[DriftField] = None,
    stop_step: Optional[int] = None,
    workers: Optional[int] = None
) -> EndpointRun:
    """Like euler_simulate but keeps only the endpoints, and optionally the control cost.

    Keyword Arguments:
        cost_field (Optional[DriftField]): Drift adjustment u whose cost int ||u||^2_{Sigma_R^-1} dt is accumulated. Default: None
        stop_step (Optional[int]): Stop after this many steps instead of m_steps. Default: None
    """
    stop = m_steps if stop_step is None else int(stop_step)
    if not 1 <= stop <= m_steps:
        raise CONST.DomainError(f"stop_step must lie in [1, {m_steps}], got {stop_step!r}")
    chunks = _run_chunks(
        drift, sde, x0, m_steps, rng, deterministic_last_step,
        reverse_time, False, stop, cost_field, workers
    )
    x_end = np.concatenate([chunk[1] for chunk in chunks], axis=0)
    cost = None
    if cost_field is not None:
        cost = np.concatenate([chunk[2] for chunk in chunks], axis=0)
    return EndpointRun(
        samples=CouplingSamples(x0=np.asarray(x0, dtype=np.float64), x_end=x_end),
        stop_time=stop * sde.tau / m_steps,
        control_cost=cost,
    )


def sample_bridge_batch(c: CouplingSamples, sde: LinearRefSDE, t_batch: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Exact draws of X_t from the reference pinned at (x0[i], x_end[i]), one time per row.

    Raises:
        DomainError: a time outside (0, tau) or a length mismatch.
    """
    t_batch = np.asarray(t_batch, dtype=np.float64)
    if t_batch.shape != (c.n,):
        raise CONST.DomainError(f"need one time per coupling row, got {t_batch.shape} for {c.n} rows")
    if np.any(t_batch <= 0) or np.any(t_batch >= sde.tau):
        raise CONST.DomainError("bridge batch times must lie in (0, tau)")
    coefficients = bridge_coefficients(sde, 0.0, t_batch, sde.tau)
    noise = sde.correlate(rng.standard_normal(c.x0.shape))
    return (
        coefficients.a_hat[:, None] * c.x0
        + coefficients.a_check[:, None] * c.x_end
        + np.sqrt(coefficients.v_bridge)[:, None] * noise
    )


def reverse_paths(p: PathBatch) -> PathBatch:
    """X_bar_t = X_{tau - t}: values reversed along time, grid unchanged."""
    return PathBatch(times=p.times, values=p.values[:, ::-1, :].copy(), dt=p.dt)


def drift_norm_functional(drift: DriftField, p: PathBatch, sde: LinearRefSDE, *, reverse_time: bool = False) -> float:
    """Monte Carlo estimate of E[int_0^tau ||u(X_t, t)||^2_{Sigma_R^-1} dt] by a left Riemann sum.

    Arguments:
        drift (DriftField): The drift adjustment u (mu_R already subtracted).
        p (PathBatch): Paths of the process.
        sde (LinearRefSDE): Supplies Sigma_R = beta_t Sigma.

    Keyword Arguments:
        reverse_time (bool): The paths run in reverse time. Default: False

    Returns:
        float: The estimate.
    """
    total = 0.0
    for k in range(p.n_steps):
        t = float(p.times[k])
        x = p.values[:, k, :]
        u = _check_drift_output(drift(x, t), x)
        beta = _beta_at(sde, t, reverse_time)
        total += float(np.mean(np.sum(sde.apply_cov_inv(u) * u, axis=1))) / beta * p.dt
    return total


def girsanov_log_ratios(p: PathBatch, mu: DriftField, gamma_drift: DriftField, sde: LinearRefSDE, *, reverse_time: bool = False) -> np.ndarray:
    """Discretised log dP^mu / dP^gamma of every path.

    sum_k (mu - gamma)^T Sigma_R^-1 dx_k - 1/2 sum_k (mu - gamma)^T Sigma_R^-1 (mu + gamma) dt
    """
    result = np.zeros(p.n_paths)
    for k in range(p.n_steps):
        t = float(p.times[k])
        x = p.values[:, k, :]
        dx = p.values[:, k + 1, :] - x
        mu_k = _check_drift_output(mu(x, t), x)
        gamma_k = _check_drift_output(gamma_drift(x, t), x)
        weighted = sde.apply_cov_inv(mu_k - gamma_k) / _beta_at(sde, t, reverse_time)
        result += np.sum(weighted * dx, axis=1) - 0.5 * np.sum(weighted * (mu_k + gamma_k), axis=1) * p.dt
    return result


def girsanov_log_ratio(path: PathBatch, mu: DriftField, gamma_drift: DriftField, sde: LinearRefSDE, row: int = 0) -> float:
    """Girsanov log ratio of a single path (row of the batch)."""
    single = PathBatch(times=path.times, values=path.values[row:row + 1], dt=path.dt)
    return float(girsanov_log_ratios(single, mu, gamma_drift, sde)[0])


def terminal_estimator(prediction: DriftField, x_t: np.ndarray, t: float, sde: LinearRefSDE) -> np.ndarray:
    """E_t = x_t + (tau - t) prediction(x_t, t), the terminal point implied by a DBM drift.

    Raises:
        DomainError: t >= tau, or a reference other than a constant-schedule Brownian motion.
    """
    if not sde.is_brownian:
        raise CONST.DomainError("the terminal estimator needs alpha = 0 and a constant schedule")
    if not 0.0 <= t < sde.tau:
        raise CONST.DomainError(f"terminal estimator needs t in [0, {sde.tau}), got {t!r}")
    x_t = np.asarray(x_t, dtype=np.float64)
    return x_t + (sde.tau - t) * _check_drift_output(prediction(x_t, t), x_t)
