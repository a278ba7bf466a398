"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: experiment_config.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Parsing and validation of the JSON experiment documents, with a defaults table per experiment kind.
# // AR
# +==== END bridgelab =================+
"""

import json
import math
from copy import deepcopy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

try:
    from . import constants as CONST
except ImportError:
    import constants as CONST

TOP_LEVEL_KEYS = frozenset({"schema_version", "kind", "seed", "output_dir", "params"})

_TRAINING_DEFAULTS: Dict[str, Any] = {
    "dataset": "gaussian",
    "dim": 1,
    "alpha": 0.0,
    "sigma": 1.0,
    "tau": 1.0,
    "schedule": CONST.SCHEDULE_CONSTANT,
    "sigma_min": 0.01,
    "sigma_max": 10.0,
    "gamma_mean": -1.0,
    "gamma_std": 1.0,
    "upsilon_mean": 1.0,
    "upsilon_std": 1.0,
    "n_iterations": 4,
    "sgd_steps": 2000,
    "batch_size": 256,
    "m_steps": 100,
    "n_samples": 10000,
    "n_cache_paths": 1000,
    "hidden_widths": list(CONST.TOY_HIDDEN_WIDTHS),
    "direction_policy": CONST.POLICY_ALTERNATE,
    "convention": CONST.CONVENTION_SCORE,
    "warm_start": False,
    "estimator_lag": 0,
    "deterministic_last_step": False,
    "lr": CONST.ADAM_LR,
    "ema_decay": CONST.EMA_DECAY,
    "dataset_noise": 0.05,
    "save_checkpoints": True,
}

DEFAULT_PARAMS: Dict[str, Dict[str, Any]] = {
    CONST.KIND_GAUSS1D: {
        "mu0": -1.0,
        "mu1": 1.0,
        "var0": 1.0,
        "var1": 1.0,
        "sigma": 1.0,
        "rho_c0": 0.0,
        "n_iterations": 10,
        "sigma_exponents": [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0],
        "table_sigmas": [0.01, 0.1, 1.0, 10.0, 100.0],
    },
    CONST.KIND_GAUSSND: {
        "dims": [5, 10],
        "sigmas": [0.2, 1.0],
        "n_scenarios": 20,
        "n_iterations": 10,
        "wishart_scale": 0.2,
    },
    CONST.KIND_MIXTURE1D: {
        "sigma": 0.2,
        "n_samples": 100000,
        "m_steps": 1000,
        "sgd_steps": 5000,
        "batch_size": 512,
        "hidden_widths": list(CONST.DEFAULT_HIDDEN_WIDTHS),
        "n_cache_paths": 1000,
        "sinkhorn_bins": 1000,
        "grid_low": -5.0,
        "grid_high": 5.0,
        "field_points": 200,
        "field_times": 200,
        "kde_points": 400,
        "train": True,
    },
    CONST.KIND_IDBM_RUN: dict(_TRAINING_DEFAULTS, sample_paths=0),
    CONST.KIND_DIPF_RUN: dict(_TRAINING_DEFAULTS, direction_policy=CONST.POLICY_FORWARD_ONLY, sample_paths=0),
    CONST.KIND_SGM_TOY: dict(_TRAINING_DEFAULTS, n_iterations=1, direction_policy=CONST.POLICY_BACKWARD_ONLY),
    CONST.KIND_SINKHORN_COMPARE: {
        "sigmas": [0.2, 1.0],
        "bins": 2000,
        "low": -6.0,
        "high": 6.0,
        "tol": CONST.SINKHORN_TOL,
        "max_iter": CONST.SINKHORN_MAX_ITER,
    },
}

_CHOICES: Dict[str, frozenset] = {
    "dataset": frozenset({"gaussian", "mixture", "moons_rings"}),
    "schedule": frozenset({CONST.SCHEDULE_CONSTANT, CONST.SCHEDULE_VE}),
    "direction_policy": frozenset({CONST.POLICY_FORWARD_ONLY, CONST.POLICY_BACKWARD_ONLY, CONST.POLICY_ALTERNATE}),
    "convention": frozenset({CONST.CONVENTION_SCORE, CONST.CONVENTION_DRIFT}),
}

_INT_MINIMUMS: Dict[str, int] = {
    "dim": 1, "dims": 1, "n_iterations": 1, "batch_size": 1, "m_steps": 1,
    "n_samples": 1, "n_cache_paths": 1, "hidden_widths": 1, "n_scenarios": 1,
    "max_iter": 1, "sgd_steps": 0, "estimator_lag": 0, "sample_paths": 0,
    "bins": 2, "sinkhorn_bins": 2, "field_points": 2, "field_times": 2, "kde_points": 2,
}

_POSITIVE_REALS = frozenset({
    "sigma", "sigmas", "table_sigmas", "tau", "sigma_min", "sigma_max", "gamma_std",
    "upsilon_std", "var0", "var1", "lr", "wishart_scale", "tol",
})

_NONNEGATIVE_REALS = frozenset({"alpha", "dataset_noise"})

_DATASET_DIMS: Dict[str, int] = {"mixture": 1, "moons_rings": 2}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce(key: str, value: Any, default: Any) -> Any:
    """Check value against the type of its default; ints widen to floats."""
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise CONST.ConfigError(f"params.{key} must be a boolean, got {value!r}")
        return value
    if isinstance(default, int):
        if not isinstance(value, int) or isinstance(value, bool):
            raise CONST.ConfigError(f"params.{key} must be an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if not _is_number(value):
            raise CONST.ConfigError(f"params.{key} must be a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise CONST.ConfigError(f"params.{key} must be a string, got {value!r}")
        if key in _CHOICES and value not in _CHOICES[key]:
            raise CONST.ConfigError(f"params.{key} must be one of {sorted(_CHOICES[key])}, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list) or not value:
            raise CONST.ConfigError(f"params.{key} must be a nonempty list, got {value!r}")
        return [_coerce(f"{key}[{index}]", item, default[0]) for index, item in enumerate(value)]
    raise CONST.ConfigError(f"params.{key} has no known type")


def _check_domains(params: Dict[str, Any]) -> None:
    """Range and cross-parameter checks on coerced params.

    Raises:
        ConfigError: the first value outside its domain.
    """
    for key, value in params.items():
        values = value if isinstance(value, list) else [value]
        for item in values:
            if isinstance(item, float) and not math.isfinite(item):
                raise CONST.ConfigError(f"params.{key} must be finite, got {item!r}")
            if key in _INT_MINIMUMS and item < _INT_MINIMUMS[key]:
                raise CONST.ConfigError(f"params.{key} must be at least {_INT_MINIMUMS[key]}, got {item!r}")
            if key in _POSITIVE_REALS and not item > 0:
                raise CONST.ConfigError(f"params.{key} must be positive, got {item!r}")
            if key in _NONNEGATIVE_REALS and item < 0:
                raise CONST.ConfigError(f"params.{key} cannot be negative, got {item!r}")
    if "rho_c0" in params and not -1.0 < params["rho_c0"] < 1.0:
        raise CONST.ConfigError(f"params.rho_c0 must lie in (-1, 1), got {params['rho_c0']!r}")
    if "ema_decay" in params and not 0.0 <= params["ema_decay"] < 1.0:
        raise CONST.ConfigError(f"params.ema_decay must lie in [0, 1), got {params['ema_decay']!r}")
    for low, high in (("low", "high"), ("grid_low", "grid_high")):
        if low in params and not params[low] < params[high]:
            raise CONST.ConfigError(f"params.{low} must be below params.{high}")
    if params.get("schedule") == CONST.SCHEDULE_VE and not params["sigma_min"] < params["sigma_max"]:
        raise CONST.ConfigError("params.sigma_min must be below params.sigma_max")
    if "estimator_lag" in params and params["estimator_lag"] >= params["m_steps"]:
        raise CONST.ConfigError(f"params.estimator_lag must be below m_steps={params['m_steps']}")
    needed = _DATASET_DIMS.get(params.get("dataset", ""))
    if needed is not None and params["dim"] != needed:
        raise CONST.ConfigError(f"the {params['dataset']} dataset needs dim={needed}, got {params['dim']}")


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment document with every parameter filled in."""
    kind: CONST.ExperimentKind
    seed: int = 0
    output_dir: str = CONST.DEFAULT_OUTPUT_FOLDER
    params: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = CONST.CONFIG_SCHEMA_VERSION

    def document(self) -> Dict[str, Any]:
        """The canonical document, suitable for hashing and round trips through parse_config."""
        return {
            "schema_version": self.schema_version,
            "kind": self.kind.value,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "params": deepcopy(self.params),
        }

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[Union[str, Path]] = None) -> "ExperimentConfig":
        return ExperimentConfig(
            kind=self.kind,
            seed=self.seed if seed is None else int(seed),
            output_dir=self.output_dir if output_dir is None else str(output_dir),
            params=deepcopy(self.params),
            schema_version=self.schema_version,
        )


def parse_config(document: Any) -> ExperimentConfig:
    """Validate a decoded JSON document.

    Raises:
        ConfigError: unknown keys, missing kind, wrong schema version, mistyped parameters
            or values outside their domain.
    """
    if not isinstance(document, dict):
        raise CONST.ConfigError("the configuration must be a JSON object")
    unknown = set(document) - TOP_LEVEL_KEYS
    if unknown:
        raise CONST.ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    version = document.get("schema_version")
    if version != CONST.CONFIG_SCHEMA_VERSION:
        raise CONST.ConfigError(f"schema_version must be {CONST.CONFIG_SCHEMA_VERSION}, got {version!r}")
    try:
        kind = CONST.ExperimentKind(document.get("kind"))
    except ValueError as error:
        raise CONST.ConfigError(f"unknown experiment kind {document.get('kind')!r}") from error
    seed = document.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise CONST.ConfigError(f"seed must be a nonnegative integer, got {seed!r}")
    output_dir = document.get("output_dir", CONST.DEFAULT_OUTPUT_FOLDER)
    if not isinstance(output_dir, str) or not output_dir:
        raise CONST.ConfigError(f"output_dir must be a nonempty string, got {output_dir!r}")
    raw_params = document.get("params", {})
    if not isinstance(raw_params, dict):
        raise CONST.ConfigError("params must be a JSON object")
    defaults = DEFAULT_PARAMS[kind.value]
    unknown = set(raw_params) - set(defaults)
    if unknown:
        raise CONST.ConfigError(f"unknown parameters for {kind.value}: {sorted(unknown)}")
    params = deepcopy(defaults)
    for key, value in raw_params.items():
        params[key] = _coerce(key, value, defaults[key])
    _check_domains(params)
    return ExperimentConfig(kind=kind, seed=seed, output_dir=output_dir, params=params, schema_version=version)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate a UTF-8 JSON configuration file.

    Raises:
        ArtifactIOError: the file cannot be read.
        ConfigError: the content is not UTF-8 JSON or fails validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding=CONST.DEFAULT_ENCODING)
    except OSError as error:
        raise CONST.ArtifactIOError(f"cannot read configuration: {error}", path=path) from error
    except UnicodeDecodeError as error:
        raise CONST.ConfigError(f"configuration {path} is not UTF-8: {error}") from error
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise CONST.ConfigError(f"configuration {path} is not valid JSON: {error}") from error
    return parse_config(document)
