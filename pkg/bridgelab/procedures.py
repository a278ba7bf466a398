"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: procedures.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Sampling-based training loops: iterated bridge matching (forward, backward or alternating), diffusion IPF, score matching generation and single-pass backward bridge matching.
# // AR
# +==== END bridgelab =================+
"""

import time
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

try:
    from . import constants as CONST
    from .rogger import RI
    from .reference_sde import LinearRefSDE, delta_moments
    from .gaussian_closed_form import GaussianDist
    from .analytic_mixture import GaussianMixture
    from .sde_engine import (
        CouplingSamples, DriftField, PathBatch, euler_simulate, reverse_paths,
        simulate_endpoints, stream, terminal_estimator
    )
    from .drift_model import (
        AdamState, EMAState, MLPParams, MLPSpec, adam_init, adam_step,
        ema_init, ema_update, mlp_backward, mlp_forward, mlp_init, mlp_predict
    )
    from .bridge_losses import (
        LossBatch, make_bdbm_batch, make_dbm_batch, make_drift_matching_batch,
        make_sgm_batch, weighted_mse
    )
except ImportError:
    import constants as CONST
    from rogger import RI
    from reference_sde import LinearRefSDE, delta_moments
    from gaussian_closed_form import GaussianDist
    from analytic_mixture import GaussianMixture
    from sde_engine import (
        CouplingSamples, DriftField, PathBatch, euler_simulate, reverse_paths,
        simulate_endpoints, stream, terminal_estimator
    )
    from drift_model import (
        AdamState, EMAState, MLPParams, MLPSpec, adam_init, adam_step,
        ema_init, ema_update, mlp_backward, mlp_forward, mlp_init, mlp_predict
    )
    from bridge_losses import (
        LossBatch, make_bdbm_batch, make_dbm_batch, make_drift_matching_batch,
        make_sgm_batch, weighted_mse
    )

Sampler = Callable[[int, np.random.Generator], np.ndarray]
PairedSampler = Callable[[int, np.random.Generator], Tuple[np.ndarray, np.ndarray]]
Model = Union[MLPParams, DriftField]

# Stream roles, combined with the iteration index to key every random draw.
_ROLE_ENDPOINTS = 0
_ROLE_BATCHES = 1
_ROLE_SIMULATION = 2
_ROLE_INIT = 3
_ROLE_REFERENCE = 4
_ROLE_PATHS = 5

DIAGNOSTICS_HEADER: Tuple[str, ...] = (
    "iteration", "direction", "loss", "control_cost", "mean_error", "cov_error", "correlation"
)


def gaussian_sampler(dist: GaussianDist) -> Sampler:
    return dist.sample


def mixture_sampler(gm: GaussianMixture) -> Sampler:
    return gm.sample


def array_sampler(points: np.ndarray) -> Sampler:
    """Resample rows of a fixed point cloud with replacement."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]

    def sample(n: int, rng: np.random.Generator) -> np.ndarray:
        return points[rng.integers(0, points.shape[0], size=n)]

    return sample


@dataclass
class ProcedureConfig:
    """Everything a training loop needs.

    Attributes:
        sde: the reference process.
        gamma, upsilon: samplers of the initial and terminal distributions.
        n_iterations: outer iterations.
        sgd_steps: SGD steps per iteration.
        batch_size: regression batch size.
        m_steps: Euler steps, dt = tau / m_steps.
        n_samples: cached endpoint pairs per iteration, and simulated paths for diagnostics.
        n_cache_paths: paths cached by DIPF between refreshes.
        direction_policy: forward only, backward only or alternating.
        convention: score or drift regression targets.
        hidden_widths: network hidden layers.
        t_max: bridge time horizon, tau - dt / 2 when None.
        seed: run seed.
        warm_start: keep training the same model (and optimiser) across iterations.
        estimator_lag: 0 keeps the simulated terminal point, k > 0 replaces it by the terminal estimator at tau - k dt.
        deterministic_last_step: drop the noise of the final Euler step when generating.
        initial_coupling: paired sampler of C(0), independent Gamma x Upsilon when None.
    """
    sde: LinearRefSDE
    gamma: Sampler
    upsilon: Sampler
    n_iterations: int = 1
    sgd_steps: int = 1000
    batch_size: int = 256
    m_steps: int = 100
    n_samples: int = 10_000
    n_cache_paths: int = 1000
    direction_policy: CONST.DirectionPolicy = CONST.DirectionPolicy.FORWARD_ONLY
    convention: CONST.TargetConvention = CONST.TargetConvention.SCORE
    hidden_widths: Tuple[int, ...] = CONST.TOY_HIDDEN_WIDTHS
    t_max: Optional[float] = None
    seed: int = 0
    lr: float = CONST.ADAM_LR
    beta1: float = CONST.ADAM_BETA1
    beta2: float = CONST.ADAM_BETA2
    adam_eps: float = CONST.ADAM_EPS
    ema_decay: float = CONST.EMA_DECAY
    warm_start: bool = False
    estimator_lag: int = 0
    deterministic_last_step: bool = False
    path_refresh: int = CONST.DIPF_PATH_REFRESH
    initial_coupling: Optional[PairedSampler] = None

    def __post_init__(self) -> None:
        counts = {
            "n_iterations": self.n_iterations, "batch_size": self.batch_size,
            "m_steps": self.m_steps, "n_samples": self.n_samples,
            "n_cache_paths": self.n_cache_paths, "path_refresh": self.path_refresh,
        }
        for name, value in counts.items():
            if int(value) < 1:
                raise CONST.ConfigError(f"{name} must be positive, got {value!r}")
        if self.sgd_steps < 0 or self.estimator_lag < 0:
            raise CONST.ConfigError("sgd_steps and estimator_lag cannot be negative")
        if self.estimator_lag >= self.m_steps:
            raise CONST.ConfigError(f"estimator_lag must be below m_steps={self.m_steps}")
        if self.estimator_lag > 0 and not self.sde.is_brownian:
            raise CONST.ConfigError("the terminal estimator needs alpha = 0 and a constant schedule")
        if self.convention is CONST.TargetConvention.DRIFT and not self.sde.is_brownian:
            raise CONST.ConfigError("drift targets need alpha = 0 and a constant schedule")
        if self.t_max is not None and not 0.0 < self.t_max <= self.sde.tau:
            raise CONST.ConfigError(f"t_max must lie in (0, {self.sde.tau}], got {self.t_max!r}")

    @property
    def dt(self) -> float:
        return self.sde.tau / self.m_steps

    @property
    def horizon(self) -> float:
        return self.sde.tau - 0.5 * self.dt if self.t_max is None else float(self.t_max)

    def seed_for(self, role: int, iteration: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=(role, iteration))

    def generator(self, role: int, iteration: int) -> np.random.Generator:
        return stream(self.seed_for(role, iteration))


@dataclass
class FitResult:
    """EMA snapshot of a fitted model and the per-step losses."""
    snapshot: MLPParams
    loss_history: List[float]

    def recent_loss(self, window: int = CONST.LOSS_WINDOW) -> float:
        if not self.loss_history:
            return float("nan")
        return float(np.mean(self.loss_history[-window:]))


@dataclass
class IterationDiagnostics:
    iteration: int
    direction: str
    loss: float
    control_cost: float
    mean_error: float
    cov_error: float
    correlation: float

    def as_row(self) -> Tuple[object, ...]:
        return (
            self.iteration, self.direction, self.loss, self.control_cost,
            self.mean_error, self.cov_error, self.correlation,
        )


@dataclass
class _Trainer:
    params: MLPParams
    optimizer: AdamState
    ema: EMAState


def _new_trainer(cfg: ProcedureConfig, iteration: int, slot: int) -> _Trainer:
    init_seed = int(cfg.seed_for(_ROLE_INIT, 2 * iteration + slot).generate_state(1)[0])
    params = mlp_init(MLPSpec.for_dimension(cfg.sde.dim, cfg.hidden_widths, init_seed))
    return _Trainer(
        params=params,
        optimizer=adam_init(params, cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps),
        ema=ema_init(params, cfg.ema_decay, warmup=True),
    )


def fit_drift(
    batch_maker: Callable[[np.random.Generator], LossBatch],
    model: MLPParams,
    optimizer: AdamState,
    ema: EMAState,
    sgd_steps: int,
    rng: np.random.Generator
) -> FitResult:
    """Run sgd_steps of forward, backward, Adam and EMA updates.

    Arguments:
        batch_maker (Callable): rng -> LossBatch.
        model (MLPParams): Trained in place.
        optimizer (AdamState): Its Adam state.
        ema (EMAState): Its moving average.
        sgd_steps (int): Number of steps, zero returns the initial snapshot.
        rng (np.random.Generator): Stream for batches.

    Returns:
        FitResult: A copy of the EMA shadow and the loss history.

    Raises:
        NumericalFailure: a non-finite loss, with the step index.
    """
    losses: List[float] = []
    for step in range(sgd_steps):
        batch = batch_maker(rng)
        pred = mlp_forward(model, batch.x_t, batch.t)
        loss, grad = weighted_mse(pred, batch)
        if not np.isfinite(loss):
            raise CONST.NumericalFailure("training loss is not finite", step=step)
        grads = mlp_backward(model, batch.x_t, batch.t, grad)
        adam_step(model, grads, optimizer)
        ema_update(ema, model)
        losses.append(loss)
        if (step + 1) % CONST.LOSS_WINDOW == 0:
            RI.log_debug(f"step {step + 1}/{sgd_steps}: mean loss {np.mean(losses[-CONST.LOSS_WINDOW:]):.6g}")
    return FitResult(snapshot=ema.shadow.copy(), loss_history=losses)


def _predictor(model: Model) -> DriftField:
    if isinstance(model, MLPParams):
        params = model

        def predict(x: np.ndarray, t: float) -> np.ndarray:
            return mlp_predict(params, x, t)

        return predict
    return model


def adjustment_field(model: Model, sde: LinearRefSDE, direction: CONST.Direction, convention: CONST.TargetConvention = CONST.TargetConvention.SCORE) -> DriftField:
    """The part of the assembled drift added to the reference term, u = drift - reference term."""
    if convention is CONST.TargetConvention.DRIFT and not sde.is_brownian:
        raise CONST.DomainError("drift convention models can only be assembled for alpha = 0 and a constant schedule")
    predict = _predictor(model)
    backward = direction is CONST.Direction.BACKWARD

    def adjustment(x: np.ndarray, t: float) -> np.ndarray:
        model_time = sde.tau - t if backward else t
        out = predict(x, model_time)
        if convention is CONST.TargetConvention.DRIFT:
            return out
        return float(sde.beta.beta(model_time)) * sde.apply_cov(out)

    return adjustment


def assemble_drift(model: Model, sde: LinearRefSDE, direction: CONST.Direction, convention: CONST.TargetConvention = CONST.TargetConvention.SCORE) -> DriftField:
    """Turn a score (or drift) model into the drift of the transport.

    forward: -alpha beta_t x + beta_t Sigma model(x, t).
    backward, at reverse time t with r = tau - t: alpha beta_r x + beta_r Sigma model(x, r).
    The drift convention returns model(x, t) or model(x, r) as is.

    Raises:
        DomainError: drift convention on a reference other than a constant-schedule Brownian motion.
    """
    adjustment = adjustment_field(model, sde, direction, convention)
    backward = direction is CONST.Direction.BACKWARD

    def drift(x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if backward:
            reference = sde.alpha * float(sde.beta.beta(sde.tau - t)) * x
        else:
            reference = sde.reference_drift(x, t)
        return reference + adjustment(x, t)

    return drift


def _direction_for(policy: CONST.DirectionPolicy, iteration: int) -> CONST.Direction:
    if policy is CONST.DirectionPolicy.FORWARD_ONLY:
        return CONST.Direction.FORWARD
    if policy is CONST.DirectionPolicy.BACKWARD_ONLY:
        return CONST.Direction.BACKWARD
    return CONST.Direction.FORWARD if iteration % 2 == 1 else CONST.Direction.BACKWARD


def _moment_errors(samples: np.ndarray, reference: np.ndarray) -> Tuple[float, float]:
    mean_error = float(np.linalg.norm(samples.mean(axis=0) - reference.mean(axis=0)))
    cov_a = np.atleast_2d(np.cov(samples, rowvar=False))
    cov_b = np.atleast_2d(np.cov(reference, rowvar=False))
    return mean_error, float(np.linalg.norm(cov_a - cov_b))


def _draw(sampler: Sampler, n: int, dim: int, rng: np.random.Generator, name: str) -> np.ndarray:
    values = np.asarray(sampler(n, rng), dtype=np.float64)
    if values.shape != (n, dim):
        raise CONST.ConfigError(f"{name} sampler returned {values.shape}, expected ({n}, {dim})")
    return values


def initial_coupling(cfg: ProcedureConfig) -> CouplingSamples:
    """C(0): the paired sampler when given, the independent coupling otherwise."""
    rng = cfg.generator(_ROLE_ENDPOINTS, 0)
    if cfg.initial_coupling is not None:
        x0, x_end = cfg.initial_coupling(cfg.n_samples, rng)
        return CouplingSamples(x0=x0, x_end=x_end)
    return CouplingSamples(
        x0=_draw(cfg.gamma, cfg.n_samples, cfg.sde.dim, rng, "Gamma"),
        x_end=_draw(cfg.upsilon, cfg.n_samples, cfg.sde.dim, rng, "Upsilon"),
    )


def _terminal_points(
    cfg: ProcedureConfig,
    drift: DriftField,
    adjustment: DriftField,
    start: np.ndarray,
    reverse_time: bool,
    seed: np.random.SeedSequence
) -> Tuple[np.ndarray, float]:
    stop_step = cfg.m_steps - cfg.estimator_lag
    run = simulate_endpoints(
        drift, cfg.sde, start, cfg.m_steps, seed, cfg.deterministic_last_step,
        reverse_time=reverse_time, cost_field=adjustment, stop_step=stop_step,
    )
    end = run.samples.x_end
    if cfg.estimator_lag > 0:
        end = terminal_estimator(drift, end, run.stop_time, cfg.sde)
    return end, float(np.mean(run.control_cost))


@dataclass
class IdbmResult:
    """Couplings C(0..n), the model snapshot of every iteration and per-iteration diagnostics."""
    couplings: List[CouplingSamples]
    models: List[MLPParams]
    directions: List[CONST.Direction]
    diagnostics: List[IterationDiagnostics]
    timings: List[float] = field(default_factory=list)

    def diagnostic_rows(self) -> List[Tuple[object, ...]]:
        return [d.as_row() for d in self.diagnostics]


def run_idbm(cfg: ProcedureConfig) -> IdbmResult:
    """Iterated bridge matching.

    Every iteration fits a drift on bridge batches drawn from the cached
    endpoint pairs of the previous coupling, then simulates the transport
    from Gamma (forward) or Upsilon (backward) to get the next coupling.

    Raises:
        SimulationDiverged: the transport left the finite range; the iteration is logged before re-raising.
        NumericalFailure: the training loss blew up.
    """
    couplings = [initial_coupling(cfg)]
    models: List[MLPParams] = []
    directions: List[CONST.Direction] = []
    diagnostics: List[IterationDiagnostics] = []
    timings: List[float] = []
    trainers: "dict[CONST.Direction, _Trainer]" = {}
    reference_rng = cfg.generator(_ROLE_REFERENCE, 0)
    references = {
        CONST.Direction.FORWARD: _draw(cfg.upsilon, cfg.n_samples, cfg.sde.dim, reference_rng, "Upsilon"),
        CONST.Direction.BACKWARD: _draw(cfg.gamma, cfg.n_samples, cfg.sde.dim, reference_rng, "Gamma"),
    }
    for iteration in range(1, cfg.n_iterations + 1):
        started = time.perf_counter()
        direction = _direction_for(cfg.direction_policy, iteration)
        previous = couplings[-1]
        slot = 0 if direction is CONST.Direction.FORWARD else 1
        if not cfg.warm_start or direction not in trainers:
            trainers[direction] = _new_trainer(cfg, iteration, slot)
        trainer = trainers[direction]
        make_batch = make_dbm_batch if direction is CONST.Direction.FORWARD else make_bdbm_batch

        def batch_maker(rng: np.random.Generator) -> LossBatch:
            return make_batch(previous, cfg.sde, cfg.batch_size, rng, cfg.horizon, cfg.convention)

        fit = fit_drift(
            batch_maker, trainer.params, trainer.optimizer, trainer.ema,
            cfg.sgd_steps, cfg.generator(_ROLE_BATCHES, iteration)
        )
        drift = assemble_drift(fit.snapshot, cfg.sde, direction, cfg.convention)
        adjustment = adjustment_field(fit.snapshot, cfg.sde, direction, cfg.convention)
        endpoint_rng = cfg.generator(_ROLE_ENDPOINTS, iteration)
        backward = direction is CONST.Direction.BACKWARD
        if backward:
            start = _draw(cfg.upsilon, cfg.n_samples, cfg.sde.dim, endpoint_rng, "Upsilon")
        else:
            start = _draw(cfg.gamma, cfg.n_samples, cfg.sde.dim, endpoint_rng, "Gamma")
        try:
            end, control_cost = _terminal_points(
                cfg, drift, adjustment, start, backward, cfg.seed_for(_ROLE_SIMULATION, iteration)
            )
        except CONST.NumericalFailure:
            RI.log_error(f"iteration {iteration} ({direction.value}) diverged after training loss {fit.recent_loss():.6g}")
            raise
        coupling = CouplingSamples(x0=end, x_end=start) if backward else CouplingSamples(x0=start, x_end=end)
        mean_error, cov_error = _moment_errors(end, references[direction])
        record = IterationDiagnostics(
            iteration=iteration, direction=direction.value, loss=fit.recent_loss(),
            control_cost=control_cost, mean_error=mean_error, cov_error=cov_error,
            correlation=coupling.correlation(),
        )
        RI.log_metrics("idbm", **vars(record))
        couplings.append(coupling)
        models.append(fit.snapshot)
        directions.append(direction)
        diagnostics.append(record)
        timings.append(time.perf_counter() - started)
    return IdbmResult(couplings=couplings, models=models, directions=directions, diagnostics=diagnostics, timings=timings)


def run_bdbm(cfg: ProcedureConfig) -> IdbmResult:
    """Single backward bridge matching pass from C(0)."""
    return run_idbm(replace(cfg, n_iterations=1, direction_policy=CONST.DirectionPolicy.BACKWARD_ONLY))


@dataclass
class DipfStage:
    """One half-bridge process: its drift, the side it starts from and its time direction."""
    drift: DriftField
    start_side: CONST.IpfSide
    reverse_time: bool


@dataclass
class DipfResult:
    stages: List[DipfStage]
    models: List[MLPParams]
    couplings: List[CouplingSamples]
    diagnostics: List[IterationDiagnostics]
    timings: List[float] = field(default_factory=list)

    def diagnostic_rows(self) -> List[Tuple[object, ...]]:
        return [d.as_row() for d in self.diagnostics]


def _reference_stage(sde: LinearRefSDE) -> DipfStage:
    return DipfStage(drift=sde.reference_drift, start_side=CONST.IpfSide.FIRST, reverse_time=False)


def _stage_reference_part(sde: LinearRefSDE, reverse_time: bool) -> DriftField:
    if not reverse_time:
        return sde.reference_drift

    def reference(x: np.ndarray, t: float) -> np.ndarray:
        return sde.alpha * float(sde.beta.beta(sde.tau - t)) * np.asarray(x, dtype=np.float64)

    return reference


def run_dipf(cfg: ProcedureConfig) -> DipfResult:
    """Diffusion IPF.

    F(0) is the reference started at Gamma. Iteration i simulates paths of
    F(i-1), reverses them and fits the reversed drift by drift matching,
    refreshing the cached paths every path_refresh steps. The fitted process
    starts from Upsilon on odd iterations and from Gamma on even ones.
    """
    stages = [_reference_stage(cfg.sde)]
    models: List[MLPParams] = []
    couplings: List[CouplingSamples] = []
    diagnostics: List[IterationDiagnostics] = []
    timings: List[float] = []
    samplers = {CONST.IpfSide.FIRST: cfg.gamma, CONST.IpfSide.SECOND: cfg.upsilon}
    reference_rng = cfg.generator(_ROLE_REFERENCE, 0)
    references = {
        CONST.IpfSide.FIRST: _draw(cfg.gamma, cfg.n_samples, cfg.sde.dim, reference_rng, "Gamma"),
        CONST.IpfSide.SECOND: _draw(cfg.upsilon, cfg.n_samples, cfg.sde.dim, reference_rng, "Upsilon"),
    }
    for iteration in range(1, cfg.n_iterations + 1):
        started = time.perf_counter()
        previous = stages[-1]
        path_rng = cfg.generator(_ROLE_PATHS, iteration)
        cache: "dict[str, object]" = {"paths": None, "used": 0, "refresh": 0}

        def refreshed_paths() -> PathBatch:
            if cache["paths"] is None or cache["used"] >= cfg.path_refresh:
                start = _draw(samplers[previous.start_side], cfg.n_cache_paths, cfg.sde.dim, path_rng, "start")
                seed = cfg.seed_for(_ROLE_PATHS, 1_000_000 * iteration + int(cache["refresh"]))
                simulated = euler_simulate(previous.drift, cfg.sde, start, cfg.m_steps, seed, reverse_time=previous.reverse_time)
                cache["paths"] = reverse_paths(simulated)
                cache["used"] = 0
                cache["refresh"] = int(cache["refresh"]) + 1
            cache["used"] = int(cache["used"]) + 1
            return cache["paths"]

        def batch_maker(rng: np.random.Generator) -> LossBatch:
            return make_drift_matching_batch(refreshed_paths(), cfg.batch_size, rng)

        trainer = _new_trainer(cfg, iteration, 0)
        fit = fit_drift(
            batch_maker, trainer.params, trainer.optimizer, trainer.ema,
            cfg.sgd_steps, cfg.generator(_ROLE_BATCHES, iteration)
        )
        side = CONST.IpfSide.SECOND if iteration % 2 == 1 else CONST.IpfSide.FIRST
        reverse_time = not previous.reverse_time
        drift = _predictor(fit.snapshot)
        stage = DipfStage(drift=drift, start_side=side, reverse_time=reverse_time)
        reference_part = _stage_reference_part(cfg.sde, reverse_time)

        def adjustment(x: np.ndarray, t: float, drift: DriftField = drift, reference_part: DriftField = reference_part) -> np.ndarray:
            return drift(x, t) - reference_part(x, t)

        start = _draw(samplers[side], cfg.n_samples, cfg.sde.dim, cfg.generator(_ROLE_ENDPOINTS, iteration), "start")
        try:
            run = simulate_endpoints(
                drift, cfg.sde, start, cfg.m_steps, cfg.seed_for(_ROLE_SIMULATION, iteration), True,
                reverse_time=reverse_time, cost_field=adjustment,
            )
        except CONST.NumericalFailure:
            RI.log_error(f"dipf iteration {iteration} diverged after training loss {fit.recent_loss():.6g}")
            raise
        end = run.samples.x_end
        if side is CONST.IpfSide.SECOND:
            coupling = CouplingSamples(x0=end, x_end=start)
            target_side = CONST.IpfSide.FIRST
        else:
            coupling = CouplingSamples(x0=start, x_end=end)
            target_side = CONST.IpfSide.SECOND
        mean_error, cov_error = _moment_errors(end, references[target_side])
        direction = CONST.Direction.BACKWARD if reverse_time else CONST.Direction.FORWARD
        record = IterationDiagnostics(
            iteration=iteration, direction=direction.value, loss=fit.recent_loss(),
            control_cost=float(np.mean(run.control_cost)), mean_error=mean_error,
            cov_error=cov_error, correlation=coupling.correlation(),
        )
        RI.log_metrics("dipf", **vars(record))
        stages.append(stage)
        models.append(fit.snapshot)
        couplings.append(coupling)
        diagnostics.append(record)
        timings.append(time.perf_counter() - started)
    return DipfResult(stages=stages, models=models, couplings=couplings, diagnostics=diagnostics, timings=timings)


def sgm_prior(sde: LinearRefSDE) -> GaussianDist:
    """N(0, v(0, tau) Sigma), the default generation prior."""
    _, v = delta_moments(sde.alpha, sde.beta.integral(sde.tau))
    return GaussianDist(mean=np.zeros(sde.dim), cov=float(v) * sde.sigma_cov)


@dataclass
class SgmResult:
    """A trained score model and its generator."""
    snapshot: MLPParams
    loss_history: List[float]
    prior: GaussianDist
    sde: LinearRefSDE
    m_steps: int
    deterministic_last_step: bool = False

    def drift(self) -> DriftField:
        return assemble_drift(self.snapshot, self.sde, CONST.Direction.BACKWARD)

    def generate(self, n: int, seed: Union[int, np.random.SeedSequence]) -> np.ndarray:
        """Samples from the learned generative process started at the prior."""
        seed = np.random.SeedSequence(seed) if isinstance(seed, int) else seed
        start = self.prior.sample(n, stream(seed, 0))
        simulation_seed = np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + (1,))
        run = simulate_endpoints(
            self.drift(), self.sde, start, self.m_steps, simulation_seed,
            self.deterministic_last_step, reverse_time=True,
        )
        return run.samples.x_end


def run_sgm(cfg: ProcedureConfig) -> SgmResult:
    """Fit the score of the reference started at Gamma; cfg.upsilon is not used."""
    trainer = _new_trainer(cfg, 0, 0)

    def batch_maker(rng: np.random.Generator) -> LossBatch:
        return make_sgm_batch(cfg.gamma, cfg.sde, cfg.batch_size, rng)

    fit = fit_drift(
        batch_maker, trainer.params, trainer.optimizer, trainer.ema,
        cfg.sgd_steps, cfg.generator(_ROLE_BATCHES, 0)
    )
    RI.log_metrics("sgm", loss=fit.recent_loss(), steps=cfg.sgd_steps)
    return SgmResult(
        snapshot=fit.snapshot, loss_history=fit.loss_history, prior=sgm_prior(cfg.sde),
        sde=cfg.sde, m_steps=cfg.m_steps, deterministic_last_step=cfg.deterministic_last_step,
    )
