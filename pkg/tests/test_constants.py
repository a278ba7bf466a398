"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_constants.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: This is the file in charge of testing the critical variables of the constants file to make sure that they are still accurate.
# // AR
# +==== END bridgelab =================+
"""
from bridgelab import constants as CONST


def test_exit_codes() -> None:
    assert CONST.SUCCESS == 0
    assert CONST.CONFIG_ERROR == 1
    assert CONST.IO_ERROR == 2
    assert CONST.NUMERICAL_ERROR == 3
    assert CONST.ERROR == CONST.CONFIG_ERROR


def test_default_values() -> None:
    assert CONST.DEFAULT_ENCODING.lower() == 'utf-8'
    assert CONST.CSV_FLOAT_FORMAT.format(0.1) == "0.10000000000000001"
    assert CONST.PATH_BATCH_MAGIC == b"PBV1"
    assert CONST.CHECKPOINT_MAGIC == b"MLPV1"
    assert CONST.CONFIG_SCHEMA_VERSION == 1
    assert CONST.SINKHORN_MAX_ITER == 10_000


def test_enum_values_match_their_literals() -> None:
    assert CONST.Direction("forward") is CONST.Direction.FORWARD
    assert CONST.DirectionPolicy(CONST.POLICY_ALTERNATE) is CONST.DirectionPolicy.ALTERNATE
    assert CONST.TargetConvention(CONST.CONVENTION_DRIFT) is CONST.TargetConvention.DRIFT
    assert CONST.ScheduleKind(CONST.SCHEDULE_VE) is CONST.ScheduleKind.VE
    # every experiment kind has a literal the configuration files can use
    kinds = {kind.value for kind in CONST.ExperimentKind}
    assert kinds == {
        "gauss1d", "gaussnd", "mixture1d", "idbm_run", "dipf_run", "sgm_toy", "sinkhorn_compare"
    }


def test_error_hierarchy() -> None:
    assert issubclass(CONST.DomainError, ValueError)
    assert issubclass(CONST.ConfigError, ValueError)
    assert issubclass(CONST.CacheContractError, RuntimeError)
    assert issubclass(CONST.SimulationDiverged, CONST.NumericalFailure)
    assert issubclass(CONST.NumericalFailure, ArithmeticError)
    assert issubclass(CONST.ArtifactIOError, OSError)
    for error in (CONST.DomainError, CONST.ConfigError, CONST.ArtifactIOError):
        assert issubclass(error, CONST.BridgeLabError)


def test_error_messages_carry_context() -> None:
    failure = CONST.NumericalFailure("loss is not finite", at_time=0.5, step=7)
    assert str(failure).startswith(CONST.MODULE_NAME)
    assert "t=0.5" in str(failure) and "step=7" in str(failure)
    assert failure.step == 7
    io_error = CONST.ArtifactIOError("cannot write", path="/tmp/x")
    assert io_error.path == "/tmp/x"
    assert str(io_error).endswith("/tmp/x")


def test_max_workers_is_positive() -> None:
    assert CONST.max_workers() >= 1


def test_log_toggle_defaults_all_true() -> None:
    toggle = CONST.LogToggle()
    assert toggle.program_log and toggle.info and toggle.debug
