"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: experiments.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: The experiment commands run by the CLI, each a function of a validated configuration and an artifact folder, plus the toy datasets they draw from.
# // AR
# +==== END bridgelab =================+
"""

import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from . import constants as CONST
    from .rogger import RI
    from .reference_sde import BetaSchedule, LinearRefSDE
    from .gaussian_closed_form import (
        GaussianDist, eot_gaussian, idbm_kl_trajectory, idbm_trajectory,
        ipf_kl_trajectory, kl_limit_constant, kl_trajectory
    )
    from .analytic_mixture import (
        GaussianMixture, drift_field_grid, mixture_drift_field, reverse_drift_field
    )
    from .sde_engine import CouplingSamples, DriftField, euler_simulate, simulate_endpoints, stream
    from .drift_model import checkpoint_bytes
    from .procedures import (
        DIAGNOSTICS_HEADER, ProcedureConfig, Sampler, assemble_drift, gaussian_sampler, mixture_sampler,
        run_bdbm, run_dipf, run_idbm, run_sgm, sgm_prior
    )
    from .sinkhorn import DiscreteEOTProblem, discretize_density, plan_correlation, sinkhorn_solve
    from .metrics import density_rows, histogram2d_rows, kde_fit, moment_summary, tv_histogram
    from .experiment_config import ExperimentConfig
    from .artifact_files import ArtifactFolder, path_batch_rows
except ImportError:
    import constants as CONST
    from rogger import RI
    from reference_sde import BetaSchedule, LinearRefSDE
    from gaussian_closed_form import (
        GaussianDist, eot_gaussian, idbm_kl_trajectory, idbm_trajectory,
        ipf_kl_trajectory, kl_limit_constant, kl_trajectory
    )
    from analytic_mixture import (
        GaussianMixture, drift_field_grid, mixture_drift_field, reverse_drift_field
    )
    from sde_engine import CouplingSamples, DriftField, euler_simulate, simulate_endpoints, stream
    from drift_model import checkpoint_bytes
    from procedures import (
        DIAGNOSTICS_HEADER, ProcedureConfig, Sampler, assemble_drift, gaussian_sampler, mixture_sampler,
        run_bdbm, run_dipf, run_idbm, run_sgm, sgm_prior
    )
    from sinkhorn import DiscreteEOTProblem, discretize_density, plan_correlation, sinkhorn_solve
    from metrics import density_rows, histogram2d_rows, kde_fit, moment_summary, tv_histogram
    from experiment_config import ExperimentConfig
    from artifact_files import ArtifactFolder, path_batch_rows

Command = Callable[[ExperimentConfig, ArtifactFolder], None]

KL_HEADER: Tuple[str, ...] = ("procedure", "sigma", "rho_c0", "iteration", "kl")
GAUSSND_HEADER: Tuple[str, ...] = ("dim", "sigma", "scenario", "procedure", "iteration", "kl")
TIMINGS_HEADER: Tuple[str, ...] = ("iteration", "wall_time")

PROCEDURE_IDBM = "idbm"
PROCEDURE_IPF = "ipf"

# Stream keys of the commands, disjoint from the ones the procedures use
_KEY_SCENARIOS = 100
_KEY_ANALYTIC = 101
_KEY_GENERATE = 102
_KEY_PATHS = 103

# Sampled paths are also written as CSV up to this many
PATHS_CSV_LIMIT = 16

# Figure mixture: three narrow modes against a wide Gaussian
MIXTURE_COMPONENTS: Tuple[Tuple[float, float, float], ...] = (
    (1.0 / 3.0, -3.0, 0.2),
    (1.0 / 3.0, 0.5, 0.2),
    (1.0 / 3.0, 3.0, 0.2),
)
MIXTURE_TERMINAL_STD: float = 2.0


def figure_mixture() -> GaussianMixture:
    """The 1D three-mode mixture used as Gamma by the mixture experiments."""
    return GaussianMixture.from_components((w, [m], s) for w, m, s in MIXTURE_COMPONENTS)


def two_moons(n: int, rng: np.random.Generator, noise: float = 0.05) -> np.ndarray:
    """Two interleaved half circles, centred on the origin, shape (n, 2)."""
    upper = n // 2
    angles = rng.uniform(0.0, math.pi, n)
    points = np.empty((n, 2))
    points[:upper, 0] = np.cos(angles[:upper])
    points[:upper, 1] = np.sin(angles[:upper])
    points[upper:, 0] = 1.0 - np.cos(angles[upper:])
    points[upper:, 1] = 0.5 - np.sin(angles[upper:])
    points -= np.array([0.5, 0.25])
    return points + noise * rng.standard_normal((n, 2))


def two_rings(n: int, rng: np.random.Generator, noise: float = 0.05) -> np.ndarray:
    """Two concentric circles of radius 0.5 and 1, shape (n, 2)."""
    radii = np.where(np.arange(n) < n // 2, 0.5, 1.0)
    angles = rng.uniform(0.0, 2.0 * math.pi, n)
    points = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    return points + noise * rng.standard_normal((n, 2))


def _point_cloud_sampler(generator: Callable[[int, np.random.Generator, float], np.ndarray], noise: float) -> Sampler:
    def sample(n: int, rng: np.random.Generator) -> np.ndarray:
        return generator(n, rng, noise)

    return sample


def build_sde(params: Dict[str, Any]) -> LinearRefSDE:
    """Reference process from the alpha, sigma, tau, dim and schedule parameters."""
    if params["schedule"] == CONST.SCHEDULE_VE:
        beta = BetaSchedule.ve(params["sigma_min"], params["sigma_max"])
    else:
        beta = BetaSchedule.constant(1.0)
    try:
        return LinearRefSDE.ornstein_uhlenbeck(params["alpha"], params["sigma"], params["dim"], params["tau"], beta)
    except CONST.DomainError as error:
        raise CONST.ConfigError(f"invalid reference process: {error}") from error


def endpoint_samplers(params: Dict[str, Any]) -> Tuple[Sampler, Sampler]:
    """(Gamma, Upsilon) samplers of the configured dataset.

    Raises:
        ConfigError: the dataset does not exist in the configured dimension.
    """
    dim = params["dim"]
    dataset = params["dataset"]
    upsilon = gaussian_sampler(GaussianDist(
        mean=np.full(dim, params["upsilon_mean"]), cov=params["upsilon_std"] ** 2 * np.eye(dim)
    ))
    if dataset == "gaussian":
        gamma = gaussian_sampler(GaussianDist(
            mean=np.full(dim, params["gamma_mean"]), cov=params["gamma_std"] ** 2 * np.eye(dim)
        ))
        return gamma, upsilon
    if dataset == "mixture":
        if dim != 1:
            raise CONST.ConfigError(f"the mixture dataset is one dimensional, got dim={dim}")
        return mixture_sampler(figure_mixture()), upsilon
    if dim != 2:
        raise CONST.ConfigError(f"the moons_rings dataset is two dimensional, got dim={dim}")
    noise = params["dataset_noise"]
    return _point_cloud_sampler(two_moons, noise), _point_cloud_sampler(two_rings, noise)


def procedure_config(config: ExperimentConfig, sde: LinearRefSDE, gamma: Sampler, upsilon: Sampler, **overrides: Any) -> ProcedureConfig:
    """Map the training parameters of a document onto a ProcedureConfig."""
    p = config.params
    values: Dict[str, Any] = {
        "sde": sde,
        "gamma": gamma,
        "upsilon": upsilon,
        "n_iterations": p.get("n_iterations", 1),
        "sgd_steps": p["sgd_steps"],
        "batch_size": p["batch_size"],
        "m_steps": p["m_steps"],
        "n_samples": p["n_samples"],
        "n_cache_paths": p["n_cache_paths"],
        "direction_policy": CONST.DirectionPolicy(p.get("direction_policy", CONST.POLICY_BACKWARD_ONLY)),
        "convention": CONST.TargetConvention(p.get("convention", CONST.CONVENTION_SCORE)),
        "hidden_widths": tuple(p["hidden_widths"]),
        "seed": config.seed,
        "lr": p.get("lr", CONST.ADAM_LR),
        "ema_decay": p.get("ema_decay", CONST.EMA_DECAY),
        "warm_start": p.get("warm_start", False),
        "estimator_lag": p.get("estimator_lag", 0),
        "deterministic_last_step": p.get("deterministic_last_step", False),
    }
    values.update(overrides)
    return ProcedureConfig(**values)


def _kl_rows(procedure: str, sigma: float, rho_c0: Any, kls: Sequence[float], first: int = 0) -> List[Tuple[Any, ...]]:
    return [(procedure, sigma, rho_c0, iteration, kl) for iteration, kl in enumerate(kls) if iteration >= first]


def _idbm_kls(gamma: GaussianDist, upsilon: GaussianDist, sigma: float, rho_c0: float, n_iterations: int) -> List[float]:
    s0 = math.sqrt(float(gamma.cov[0, 0]))
    s1 = math.sqrt(float(upsilon.cov[0, 0]))
    cross = np.array([[rho_c0 * s0 * s1]])
    couplings = idbm_trajectory(gamma, upsilon, sigma, n_iterations, initial_cross=cross)
    return kl_trajectory(couplings, eot_gaussian(gamma, upsilon, sigma))


def cmd_gauss1d(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Closed-form KL trajectories of IDBM and IPF for 1D Gaussians.

    Writes the trajectory of the configured scenario, the sweep over
    sigma = 10^s and the first-iterate table with the large variance limit.
    """
    p = config.params
    gamma = GaussianDist.scalar(p["mu0"], p["var0"])
    upsilon = GaussianDist.scalar(p["mu1"], p["var1"])
    n = p["n_iterations"]
    rho = p["rho_c0"]

    rows = _kl_rows(PROCEDURE_IDBM, p["sigma"], rho, _idbm_kls(gamma, upsilon, p["sigma"], rho, n))
    rows += _kl_rows(PROCEDURE_IPF, p["sigma"], "", ipf_kl_trajectory(gamma, upsilon, p["sigma"], n))
    folder.write_csv("kl_trajectory.csv", KL_HEADER, rows)

    sweep: List[Tuple[Any, ...]] = []
    for exponent in p["sigma_exponents"]:
        sigma = 10.0 ** exponent
        sweep += _kl_rows(PROCEDURE_IDBM, sigma, rho, _idbm_kls(gamma, upsilon, sigma, rho, n))
        sweep += _kl_rows(PROCEDURE_IPF, sigma, "", ipf_kl_trajectory(gamma, upsilon, sigma, n))
    folder.write_csv("kl_sigma_sweep.csv", KL_HEADER, sweep)

    unit0 = GaussianDist.scalar(p["mu0"], 1.0)
    unit1 = GaussianDist.scalar(p["mu1"], 1.0)
    table: List[Tuple[Any, ...]] = []
    for sigma in p["table_sigmas"]:
        table.append((PROCEDURE_IDBM, sigma, 0.0, 1, _idbm_kls(unit0, unit1, sigma, 0.0, 1)[1]))
        table.append((PROCEDURE_IPF, sigma, "", 1, ipf_kl_trajectory(unit0, unit1, sigma, 1)[1]))
    folder.write_csv("kl_first_iterate.csv", KL_HEADER, table)

    wide = 1e4
    limit_kl = _idbm_kls(GaussianDist.scalar(p["mu0"], wide), GaussianDist.scalar(p["mu1"], wide), 1.0, 0.0, 1)[1]
    folder.write_csv(
        "kl_limit.csv", ("sigma", "variance", "kl", "limit_constant"),
        [(1.0, wide, limit_kl, kl_limit_constant())],
    )
    RI.log_metrics("gauss1d", idbm_last=rows[n][4], ipf_last=rows[-1][4], limit_kl=limit_kl)


def wishart_covariance(dim: int, scale: float, rng: np.random.Generator, max_attempts: int = 100) -> np.ndarray:
    """W = G^T G with dim rows G_k ~ N(0, scale I), redrawn until it is positive definite.

    Raises:
        NumericalFailure: no positive definite draw within max_attempts.
    """
    for attempt in range(1, max_attempts + 1):
        g = math.sqrt(scale) * rng.standard_normal((dim, dim))
        w = g.T @ g
        try:
            np.linalg.cholesky(w)
            return w
        except np.linalg.LinAlgError:
            RI.log_warning(f"Wishart draw {attempt} is not positive definite, drawing again")
    raise CONST.NumericalFailure(f"no positive definite Wishart draw in {max_attempts} attempts")


def gaussian_scenario(dim: int, scale: float, rng: np.random.Generator) -> Tuple[GaussianDist, GaussianDist]:
    """Random (Gamma, Upsilon): Wishart covariances and means uniform on [-1, 1]^d."""
    cov0 = wishart_covariance(dim, scale, rng)
    cov1 = wishart_covariance(dim, scale, rng)
    mean0 = rng.uniform(-1.0, 1.0, dim)
    mean1 = rng.uniform(-1.0, 1.0, dim)
    return GaussianDist(mean0, cov0), GaussianDist(mean1, cov1)


def cmd_gaussnd(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Closed-form IDBM and IPF KL trajectories over random Gaussian scenarios.

    Scenario k of dimension d is drawn from its own stream, so the same
    scenarios are used for every sigma.
    """
    p = config.params
    root = np.random.SeedSequence(config.seed)
    rows: List[Tuple[Any, ...]] = []
    for dim in p["dims"]:
        scenarios = []
        for scenario in range(p["n_scenarios"]):
            rng = np.random.Generator(np.random.Philox(
                np.random.SeedSequence(root.entropy, spawn_key=(_KEY_SCENARIOS, dim, scenario))
            ))
            scenarios.append(gaussian_scenario(dim, p["wishart_scale"], rng))
        for sigma in p["sigmas"]:
            for scenario, (gamma, upsilon) in enumerate(scenarios):
                idbm = idbm_kl_trajectory(gamma, upsilon, sigma, p["n_iterations"])
                ipf = ipf_kl_trajectory(gamma, upsilon, sigma, p["n_iterations"])
                rows += [(dim, sigma, scenario, PROCEDURE_IDBM, i, kl) for i, kl in enumerate(idbm)]
                rows += [(dim, sigma, scenario, PROCEDURE_IPF, i, kl) for i, kl in enumerate(ipf)]
            RI.log_info(f"gaussnd d={dim} sigma={sigma}: {p['n_scenarios']} scenarios done")
    folder.write_csv("kl_scenarios.csv", GAUSSND_HEADER, rows)


def _density_of(gm: GaussianMixture) -> Callable[[np.ndarray], np.ndarray]:
    def density(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return np.asarray(gm.density(x.ravel())).reshape(x.shape)

    return density


def _kde_table(folder: ArtifactFolder, name: str, samples: np.ndarray, grid: np.ndarray) -> None:
    folder.write_csv(name, ("x", "density"), density_rows(grid, kde_fit(samples[:, 0])))


def cmd_mixture1d(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Figure data of the three-mode mixture transport.

    Emits the analytic IDBM and time-reversal drift fields, an analytic-drift
    reference run, the neural first iterations of IDBM and DIPF (unless
    train is false) and the Sinkhorn coupling, with a summary of TV
    distances and coupling correlations.
    """
    p = config.params
    sigma = p["sigma"]
    low, high = p["grid_low"], p["grid_high"]
    sde = LinearRefSDE.brownian(sigma, 1, 1.0)
    gamma_gm = figure_mixture()
    upsilon_gm = GaussianMixture.single([0.0], MIXTURE_TERMINAL_STD)
    gamma_density = _density_of(gamma_gm)
    summary: List[Tuple[str, float]] = []

    xs = np.linspace(low, high, p["field_points"])
    ts = np.linspace(0.0, sde.tau, p["field_times"], endpoint=False)
    idbm_field = mixture_drift_field(gamma_gm, upsilon_gm, sde, CONST.Direction.BACKWARD)
    folder.write_csv("drift_idbm_analytic.csv", ("x", "t", "drift"), drift_field_grid(idbm_field, xs, ts))
    folder.write_csv(
        "drift_dipf_analytic.csv", ("x", "t", "drift"),
        drift_field_grid(reverse_drift_field(gamma_gm, sde), xs, ts),
    )

    grid = np.linspace(low, high, p["kde_points"])
    folder.write_csv("gamma_density.csv", ("x", "density"), density_rows(grid, gamma_density))
    tv_range = (low, high)

    start = upsilon_gm.sample(p["n_samples"], np.random.Generator(np.random.Philox(
        np.random.SeedSequence(config.seed, spawn_key=(_KEY_ANALYTIC, 0))
    )))
    analytic = simulate_endpoints(
        idbm_field, sde, start, p["m_steps"],
        np.random.SeedSequence(config.seed, spawn_key=(_KEY_ANALYTIC, 1)), True, reverse_time=True,
    )
    _kde_table(folder, "terminal_kde_analytic.csv", analytic.samples.x_end, grid)
    summary.append(("tv_analytic", tv_histogram(analytic.samples.x_end, gamma_density, value_range=tv_range)))
    summary.append(("correlation_analytic", analytic.samples.correlation()))

    if p["train"]:
        pcfg = procedure_config(
            config, sde, mixture_sampler(gamma_gm), mixture_sampler(upsilon_gm),
            n_iterations=1, direction_policy=CONST.DirectionPolicy.BACKWARD_ONLY,
            deterministic_last_step=True,
        )
        idbm = run_bdbm(pcfg)
        coupling = idbm.couplings[-1]
        _kde_table(folder, "terminal_kde_idbm.csv", coupling.x0, grid)
        summary.append(("tv_idbm", tv_histogram(coupling.x0, gamma_density, value_range=tv_range)))
        summary.append(("correlation_idbm", coupling.correlation()))
        folder.write_csv(
            "coupling_idbm.csv", ("x0", "x1", "density"),
            histogram2d_rows(coupling.x0, coupling.x_end, value_range=(tv_range, tv_range)),
        )
        learned = assemble_drift(idbm.models[-1], sde, CONST.Direction.BACKWARD)
        folder.write_csv("drift_idbm_learned.csv", ("x", "t", "drift"), drift_field_grid(learned, xs, ts))

        dipf = run_dipf(pcfg)
        coupling = dipf.couplings[-1]
        _kde_table(folder, "terminal_kde_dipf.csv", coupling.x0, grid)
        summary.append(("tv_dipf", tv_histogram(coupling.x0, gamma_density, value_range=tv_range)))
        summary.append(("correlation_dipf", coupling.correlation()))
        folder.write_csv(
            "coupling_dipf.csv", ("x0", "x1", "density"),
            histogram2d_rows(coupling.x0, coupling.x_end, value_range=(tv_range, tv_range)),
        )
        folder.write_csv("drift_dipf_learned.csv", ("x", "t", "drift"), drift_field_grid(dipf.stages[-1].drift, xs, ts))

    bins = np.linspace(low, high, p["sinkhorn_bins"])
    problem = DiscreteEOTProblem.on_grids(
        discretize_density(gamma_density, bins), discretize_density(_density_of(upsilon_gm), bins),
        bins, bins, 2.0 * sigma ** 2,
    )
    solved = sinkhorn_solve(problem)
    folder.dump_plan("coupling_sinkhorn.pbv1", solved.plan)
    summary.append(("sinkhorn_iterations", float(solved.iterations)))
    summary.append(("correlation_sinkhorn", plan_correlation(solved.plan, bins, bins)))

    folder.write_csv("mixture_summary.csv", ("quantity", "value"), summary)
    RI.log_metrics("mixture1d", **dict(summary))


def _write_training_outputs(folder: ArtifactFolder, params: Dict[str, Any], result: Any, final: CouplingSamples) -> None:
    folder.write_csv("diagnostics.csv", DIAGNOSTICS_HEADER, result.diagnostic_rows())
    folder.write_csv(CONST.TIMINGS_NAME, TIMINGS_HEADER, enumerate(result.timings, start=1), record=False)
    dim = final.dim
    header = [f"x0_{k}" for k in range(dim)] + [f"x1_{k}" for k in range(dim)]
    folder.write_csv("coupling_final.csv", header, np.hstack([final.x0, final.x_end]).tolist())
    if params["save_checkpoints"]:
        for iteration, model in enumerate(result.models, start=1):
            folder.write_bytes(f"model_iter{iteration:03d}.mlpv1", checkpoint_bytes(model))


def _write_sample_paths(
    folder: ArtifactFolder,
    config: ExperimentConfig,
    sde: LinearRefSDE,
    drift: DriftField,
    start_sampler: Sampler,
    reverse_time: bool
) -> None:
    """Full paths of the final transport as PBV1, and as CSV when there are only a few."""
    n = config.params["sample_paths"]
    if n <= 0:
        return
    seed = np.random.SeedSequence(config.seed, spawn_key=(_KEY_PATHS,))
    start = start_sampler(n, stream(seed, 0))
    paths = euler_simulate(drift, sde, start, config.params["m_steps"], np.random.SeedSequence(config.seed, spawn_key=(_KEY_PATHS, 1)), reverse_time=reverse_time)
    folder.dump_path_batch("paths_final.pbv1", paths)
    if n <= PATHS_CSV_LIMIT:
        header = ["path", "step", "t"] + [f"x_{k}" for k in range(sde.dim)]
        folder.write_csv("paths_final.csv", header, path_batch_rows(paths))


def cmd_idbm(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Iterated bridge matching on the configured dataset."""
    gamma, upsilon = endpoint_samplers(config.params)
    sde = build_sde(config.params)
    pcfg = procedure_config(config, sde, gamma, upsilon)
    result = run_idbm(pcfg)
    _write_training_outputs(folder, config.params, result, result.couplings[-1])
    direction = result.directions[-1]
    backward = direction is CONST.Direction.BACKWARD
    drift = assemble_drift(result.models[-1], sde, direction, pcfg.convention)
    _write_sample_paths(folder, config, sde, drift, upsilon if backward else gamma, backward)


def cmd_dipf(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Diffusion IPF on the configured dataset."""
    gamma, upsilon = endpoint_samplers(config.params)
    sde = build_sde(config.params)
    result = run_dipf(procedure_config(config, sde, gamma, upsilon))
    _write_training_outputs(folder, config.params, result, result.couplings[-1])
    last = result.stages[-1]
    start_sampler = gamma if last.start_side is CONST.IpfSide.FIRST else upsilon
    _write_sample_paths(folder, config, sde, last.drift, start_sampler, last.reverse_time)


def _moment_rows(generator: str, samples: np.ndarray) -> List[Tuple[Any, ...]]:
    summary = moment_summary(samples)
    return [
        (generator, k, float(summary.mean[k]), float(summary.covariance[k, k]), float(summary.std_error[k]))
        for k in range(summary.mean.size)
    ]


def cmd_sgm_toy(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Score matching generation next to a single backward bridge matching pass from the same prior.

    Both generators and a reference sample of Gamma are summarised by their moments.
    """
    p = config.params
    sde = build_sde(p)
    gamma, _ = endpoint_samplers(p)
    prior = sgm_prior(sde)
    pcfg = procedure_config(config, sde, gamma, gaussian_sampler(prior), n_iterations=1)
    sgm = run_sgm(pcfg)
    generated = sgm.generate(p["n_samples"], np.random.SeedSequence(config.seed, spawn_key=(_KEY_GENERATE,)))
    bdbm = run_bdbm(pcfg)
    reference = gamma(p["n_samples"], np.random.Generator(np.random.Philox(
        np.random.SeedSequence(config.seed, spawn_key=(_KEY_GENERATE, 1))
    )))
    folder.write_csv("sgm_loss.csv", ("step", "loss"), enumerate(sgm.loss_history, start=1))
    dim = sde.dim
    folder.write_csv("sgm_samples.csv", [f"x_{k}" for k in range(dim)], generated.tolist())
    rows = _moment_rows("gamma", reference) + _moment_rows("sgm", generated) + _moment_rows("bdbm", bdbm.couplings[-1].x0)
    folder.write_csv("moments.csv", ("generator", "coordinate", "mean", "variance", "std_error"), rows)
    folder.write_csv("diagnostics.csv", DIAGNOSTICS_HEADER, bdbm.diagnostic_rows())
    if p["save_checkpoints"]:
        folder.write_bytes("model_sgm.mlpv1", checkpoint_bytes(sgm.snapshot))
        folder.write_bytes("model_bdbm.mlpv1", checkpoint_bytes(bdbm.models[-1]))


def cmd_sinkhorn_compare(config: ExperimentConfig, folder: ArtifactFolder) -> None:
    """Sinkhorn plans of two discretised standard Gaussians against the closed-form EOT correlation."""
    p = config.params
    grid = np.linspace(p["low"], p["high"], p["bins"])
    standard = GaussianDist.scalar(0.0, 1.0)
    weights = discretize_density(_density_of(GaussianMixture.single([0.0], 1.0)), grid)
    rows: List[Tuple[Any, ...]] = []
    for sigma in p["sigmas"]:
        eps = 2.0 * sigma ** 2
        solved = sinkhorn_solve(DiscreteEOTProblem.on_grids(weights, weights, grid, grid, eps), p["tol"], p["max_iter"])
        empirical = plan_correlation(solved.plan, grid, grid)
        exact = eot_gaussian(standard, standard, sigma).correlation()
        rows.append((
            sigma, eps, p["bins"], solved.iterations, solved.residual,
            int(solved.converged), empirical, exact, abs(empirical - exact),
        ))
    folder.write_csv(
        "sinkhorn_compare.csv",
        ("sigma", "eps", "bins", "iterations", "residual", "converged", "plan_correlation", "closed_form_correlation", "abs_error"),
        rows,
    )


COMMANDS: Dict[CONST.ExperimentKind, Command] = {
    CONST.ExperimentKind.GAUSS1D: cmd_gauss1d,
    CONST.ExperimentKind.GAUSSND: cmd_gaussnd,
    CONST.ExperimentKind.MIXTURE1D: cmd_mixture1d,
    CONST.ExperimentKind.IDBM_RUN: cmd_idbm,
    CONST.ExperimentKind.DIPF_RUN: cmd_dipf,
    CONST.ExperimentKind.SGM_TOY: cmd_sgm_toy,
    CONST.ExperimentKind.SINKHORN_COMPARE: cmd_sinkhorn_compare,
}


_TRAINING_KINDS = frozenset({
    CONST.ExperimentKind.IDBM_RUN, CONST.ExperimentKind.DIPF_RUN, CONST.ExperimentKind.SGM_TOY,
})


def validate_config(config: ExperimentConfig) -> None:
    """Build the reference, samplers and procedure settings of a training document without computing.

    Raises:
        ConfigError: a combination of parameters that the run would reject.
    """
    if config.kind not in _TRAINING_KINDS:
        return
    sde = build_sde(config.params)
    gamma, upsilon = endpoint_samplers(config.params)
    procedure_config(config, sde, gamma, upsilon)


def run_experiment(config: ExperimentConfig, folder: Optional[ArtifactFolder] = None) -> ArtifactFolder:
    """Run the command of config.kind into folder (config.output_dir when None) and write the manifest."""
    folder = folder or ArtifactFolder(config.output_dir)
    RI.log_info(f"running {config.kind.value} with seed {config.seed} into {folder.folder}")
    COMMANDS[config.kind](config, folder)
    folder.write_manifest(config.document(), config.seed)
    RI.log_success(f"{config.kind.value} finished, {len(folder.written())} artifacts")
    return folder
