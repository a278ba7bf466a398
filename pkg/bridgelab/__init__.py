"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: __init__.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: This is the file that python reads when you do import bridgelab or from bridgelab import <component from the module>
# // AR
# +==== END bridgelab =================+
"""

try:
    from bridgelab.entrypoint import Runner
    from bridgelab.reference_sde import BetaSchedule, LinearRefSDE
    from bridgelab.gaussian_closed_form import GaussianCoupling, GaussianDist, JointGaussian
    from bridgelab.analytic_mixture import GaussianMixture
    from bridgelab.sde_engine import CouplingSamples, PathBatch, euler_simulate, simulate_endpoints
    from bridgelab.procedures import ProcedureConfig, run_bdbm, run_dipf, run_idbm, run_sgm
    from bridgelab.sinkhorn import DiscreteEOTProblem, sinkhorn_solve
    from bridgelab.experiment_config import ExperimentConfig, load_config, parse_config
    from bridgelab.artifact_files import ArtifactFolder
    from bridgelab import constants as BL_CONST
except ImportError:
    try:
        from .entrypoint import Runner
        from .reference_sde import BetaSchedule, LinearRefSDE
        from .gaussian_closed_form import GaussianCoupling, GaussianDist, JointGaussian
        from .analytic_mixture import GaussianMixture
        from .sde_engine import CouplingSamples, PathBatch, euler_simulate, simulate_endpoints
        from .procedures import ProcedureConfig, run_bdbm, run_dipf, run_idbm, run_sgm
        from .sinkhorn import DiscreteEOTProblem, sinkhorn_solve
        from .experiment_config import ExperimentConfig, load_config, parse_config
        from .artifact_files import ArtifactFolder
        from . import constants as BL_CONST
    except ImportError as e:
        raise RuntimeError("Failed to import required dependencies") from e

__all__ = [
    "Runner",
    "BetaSchedule",
    "LinearRefSDE",
    "GaussianCoupling",
    "GaussianDist",
    "JointGaussian",
    "GaussianMixture",
    "CouplingSamples",
    "PathBatch",
    "euler_simulate",
    "simulate_endpoints",
    "ProcedureConfig",
    "run_bdbm",
    "run_dipf",
    "run_idbm",
    "run_sgm",
    "DiscreteEOTProblem",
    "sinkhorn_solve",
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "ArtifactFolder",
    "BL_CONST",
]
