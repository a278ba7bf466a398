"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_entrypoint.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the command line runner: overrides, dry runs and the exit code of every failure class.
# // AR
# +==== END bridgelab =================+
"""
import json
from pathlib import Path
from typing import Any

import pytest

from bridgelab import constants as CONST
from bridgelab import experiments
from bridgelab.entrypoint import Runner, main


def _config_file(tmp_path: Path, **document: Any) -> str:
    content = {"schema_version": 1, "kind": "gauss1d", "output_dir": str(tmp_path / "configured"),
               "params": {"sigma_exponents": [0.0], "table_sigmas": [1.0]}}
    content.update(document)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(content), encoding="utf-8")
    return str(path)


def test_dry_run_validates_without_writing(tmp_path: Path) -> None:
    config = _config_file(tmp_path)
    assert Runner(["--config", config, "--dry-run"]).run() == CONST.SUCCESS
    assert not (tmp_path / "configured").exists()


def test_run_honours_seed_and_out_overrides(tmp_path: Path) -> None:
    config = _config_file(tmp_path)
    out = tmp_path / "overridden"
    assert Runner(["-c", config, "-s", "7", "-o", str(out)]).run() == CONST.SUCCESS
    manifest = json.loads((out / CONST.MANIFEST_NAME).read_text(encoding="utf-8"))
    assert manifest["seed"] == 7
    assert manifest["config"]["output_dir"] == str(out)
    assert (out / "kl_trajectory.csv").exists()
    assert not (tmp_path / "configured").exists()


def test_missing_configuration_is_an_io_error(tmp_path: Path) -> None:
    assert Runner(["--config", str(tmp_path / "nope.json")]).run() == CONST.IO_ERROR


def test_invalid_configuration_is_a_config_error(tmp_path: Path) -> None:
    assert Runner(["--config", _config_file(tmp_path, kind="images")]).run() == CONST.CONFIG_ERROR
    assert Runner(["--config", _config_file(tmp_path), "--seed", "-1"]).run() == CONST.CONFIG_ERROR


def test_blocked_output_folder_is_an_io_error(tmp_path: Path) -> None:
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a folder", encoding="utf-8")
    config = _config_file(tmp_path)
    assert Runner(["--config", config, "--out", str(blocker / "inner")]).run() == CONST.IO_ERROR


def test_numerical_failure_exit_code(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    def diverging(config, folder) -> None:
        raise CONST.SimulationDiverged("transport left the finite range", step=4)

    monkeypatch.setitem(experiments.COMMANDS, CONST.ExperimentKind.GAUSS1D, diverging)
    assert Runner(["--config", _config_file(tmp_path)]).run() == CONST.NUMERICAL_ERROR


def test_main_exits_with_the_run_code(tmp_path: Path) -> None:
    with pytest.raises(SystemExit) as caught:
        main(["--config", _config_file(tmp_path), "--dry-run", "--verbose"])
    assert caught.value.code == CONST.SUCCESS


@pytest.mark.parametrize("params", [
    {"m_steps": 0},
    {"batch_size": -3},
    {"alpha": 0.5, "convention": "drift"},
    {"alpha": 1.0, "schedule": "ve", "sigma_min": 0.01, "sigma_max": 40.0},
])
def test_dry_run_and_run_reject_the_same_training_documents(tmp_path: Path, params: dict) -> None:
    config = _config_file(tmp_path, kind="idbm_run", params=params)
    dry = Runner(["--config", config, "--dry-run"]).run()
    real = Runner(["--config", config]).run()
    assert dry == real == CONST.CONFIG_ERROR
    assert not (tmp_path / "configured").exists()


def test_undecodable_configuration_is_a_config_error(tmp_path: Path) -> None:
    path = tmp_path / "latin.json"
    path.write_bytes(b'{"schema_version": 1, "kind": "gauss1d", "output_dir": "\xff\xfe"}')
    assert Runner(["--config", str(path), "--dry-run"]).run() == CONST.CONFIG_ERROR
