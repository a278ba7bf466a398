"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: constants.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: This is the file that contains the values that are not meant to change, the shared enums, the shared dataclasses and the error types of the package.
# // AR
# +==== END bridgelab =================+
"""

import os
import sys
from enum import Enum
from dataclasses import dataclass
from typing import Final, Optional
from io import TextIOWrapper

MODULE_NAME: str = "[bridgelab]"

SUCCESS: int = 0
CONFIG_ERROR: int = 1
IO_ERROR: int = 2
NUMERICAL_ERROR: int = 3
ERROR: int = CONFIG_ERROR

# Reference process
SCHEDULE_CONSTANT: str = "constant"
SCHEDULE_VE: str = "ve"


class ScheduleKind(Enum):
    """Time-change schedules supported for the reference SDE.

    CONSTANT is beta_t = c, VE is the variance exploding schedule
    parametrised by (sigma_min, sigma_max).
    """
    CONSTANT = SCHEDULE_CONSTANT
    VE = SCHEDULE_VE


# Alpha * delta_b below this value switches the variance to its series form
SERIES_THRESHOLD: float = 1e-8

# Largest alpha * b_tau for which exp(-alpha * b) stays a normal float
MAX_DECAY_EXPONENT: float = 700.0

# Transports
DIRECTION_FORWARD: str = "forward"
DIRECTION_BACKWARD: str = "backward"


class Direction(Enum):
    """Time direction of a transport.

    FORWARD runs from the first marginal to the second one, BACKWARD runs
    from the second marginal to the first one in reverse time.
    """
    FORWARD = DIRECTION_FORWARD
    BACKWARD = DIRECTION_BACKWARD


POLICY_FORWARD_ONLY: str = "forward_only"
POLICY_BACKWARD_ONLY: str = "backward_only"
POLICY_ALTERNATE: str = "alternate"


class DirectionPolicy(Enum):
    """Which direction each outer iteration of a procedure trains."""
    FORWARD_ONLY = POLICY_FORWARD_ONLY
    BACKWARD_ONLY = POLICY_BACKWARD_ONLY
    ALTERNATE = POLICY_ALTERNATE


IPF_SIDE_FIRST: str = "first"
IPF_SIDE_SECOND: str = "second"


class IpfSide(Enum):
    """The block of a joint Gaussian that an IPF half step replaces."""
    FIRST = IPF_SIDE_FIRST
    SECOND = IPF_SIDE_SECOND


CONVENTION_SCORE: str = "score"
CONVENTION_DRIFT: str = "drift"


class TargetConvention(Enum):
    """What a drift model regresses.

    SCORE: the conditional score, scaled by Sigma_R when the drift is assembled.
    DRIFT: the drift itself, (X_tau - X_t) / (tau - t) with unit weight.
    """
    SCORE = CONVENTION_SCORE
    DRIFT = CONVENTION_DRIFT


# Gaussian closed forms
ODE_UNIFORM_STEPS: int = 10_000
ODE_UNIFORM_END: float = 0.99
ODE_GEOMETRIC_STEPS: int = 200
ODE_EPS_END: float = 1e-6
PSD_TOLERANCE: float = 1e-10
COMPLEX_RESIDUAL_TOLERANCE: float = 1e-10

# Mixtures
PRUNE_LOG_GAP: float = 45.0

# Simulation
DIVERGENCE_THRESHOLD: float = 1e12
RNG_CHUNK_SIZE: int = 4096
TIME_FLOOR: float = 1e-9

# Sinkhorn
SINKHORN_TOL: float = 1e-9
SINKHORN_MAX_ITER: int = 10_000

# Drift model defaults
DEFAULT_HIDDEN_WIDTHS: tuple = (512, 512, 512)
TOY_HIDDEN_WIDTHS: tuple = (256, 256, 256)
ADAM_LR: float = 1e-3
ADAM_BETA1: float = 0.9
ADAM_BETA2: float = 0.999
ADAM_EPS: float = 1e-8
EMA_DECAY: float = 0.999

# Procedures
DIPF_PATH_REFRESH: int = 100
LOSS_WINDOW: int = 100

# Artifacts
DEFAULT_ENCODING: str = "utf-8"
CSV_FLOAT_FORMAT: str = "{:.17g}"
PATH_BATCH_MAGIC: bytes = b"PBV1"
CHECKPOINT_MAGIC: bytes = b"MLPV1"
MANIFEST_NAME: str = "manifest.json"
TIMINGS_NAME: str = "timings.csv"
WRITE_CHECK_NAME: str = ".bridgelab_write_check"
CONFIG_SCHEMA_VERSION: int = 1
DEFAULT_OUTPUT_FOLDER: str = "bridgelab_out"

# Experiments
KIND_GAUSS1D: str = "gauss1d"
KIND_GAUSSND: str = "gaussnd"
KIND_MIXTURE1D: str = "mixture1d"
KIND_IDBM_RUN: str = "idbm_run"
KIND_DIPF_RUN: str = "dipf_run"
KIND_SGM_TOY: str = "sgm_toy"
KIND_SINKHORN_COMPARE: str = "sinkhorn_compare"


class ExperimentKind(Enum):
    """The experiments the command line can run."""
    GAUSS1D = KIND_GAUSS1D
    GAUSSND = KIND_GAUSSND
    MIXTURE1D = KIND_MIXTURE1D
    IDBM_RUN = KIND_IDBM_RUN
    DIPF_RUN = KIND_DIPF_RUN
    SGM_TOY = KIND_SGM_TOY
    SINKHORN_COMPARE = KIND_SINKHORN_COMPARE


def _read_positive_int(name: str) -> Optional[int]:
    raw = os.environ.get(name, "").strip()
    if raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    if value < 1:
        return None
    return value


THREADS_ENV: Optional[int] = _read_positive_int("BRIDGELAB_THREADS")

PROGRAM_LOG_ENV: bool = os.environ.get(
    "BRIDGELAB_LOG",
    "false"
).lower() in ("1", "true", "yes")

PROGRAM_DEBUG_ENV: bool = os.environ.get(
    "BRIDGELAB_DEBUG",
    "false"
).lower() in ("1", "true", "yes")


def max_workers() -> int:
    """Return the number of worker threads simulations may use.

    Returns:
        int: BRIDGELAB_THREADS when set, otherwise the cpu count.
    """
    if THREADS_ENV is not None:
        return THREADS_ENV
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class LogToggle:
    """
    The settings for the logger to know if it can output the line for the given level.
    """
    program_log: bool = True
    success: bool = True
    info: bool = True
    warning: bool = True
    error: bool = True
    critical: bool = True
    debug: bool = True


class BridgeLabError(Exception):
    """Base class of every error raised on purpose by the package."""

    def __init__(self, message: str) -> None:
        super().__init__(f"{MODULE_NAME} {message}")


class DomainError(BridgeLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(BridgeLabError, ValueError):
    """An experiment configuration document is invalid."""


class CacheContractError(BridgeLabError, RuntimeError):
    """A backward pass was requested for a batch the forward cache does not hold."""


class NumericalFailure(BridgeLabError, ArithmeticError):
    """A computation produced non-finite values.

    Attributes:
        at_time: the process time where the failure was detected, if any.
        step: the iteration or step index where the failure was detected, if any.
    """

    def __init__(self, message: str, *, at_time: Optional[float] = None, step: Optional[int] = None) -> None:
        self.at_time: Optional[float] = at_time
        self.step: Optional[int] = step
        details = []
        if at_time is not None:
            details.append(f"t={at_time!r}")
        if step is not None:
            details.append(f"step={step}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class SimulationDiverged(NumericalFailure):
    """An Euler simulation left the finite range."""


class ArtifactIOError(BridgeLabError, OSError):
    """An output artifact could not be read or written.

    Attributes:
        path: the offending path.
    """

    def __init__(self, message: str, path: object = None) -> None:
        self.path = path
        if path is not None:
            message = f"{message}: {path}"
        super().__init__(message)


RAW_STDERR: Final[Optional[TextIOWrapper]] = sys.__stderr__
