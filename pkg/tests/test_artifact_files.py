"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: test_artifact_files.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Checks of the artifact writer: folder creation, CSV formatting, binary dumps, content hashes and the manifest.
# // AR
# +==== END bridgelab =================+
"""
import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np
import pytest

from bridgelab import constants as CONST
from bridgelab.artifact_files import (
    ArtifactFolder, content_hash, csv_bytes, ensure_output_folder, format_cell,
    load_path_batch_bytes, path_batch_bytes, path_batch_rows, plan_bytes
)
from bridgelab.sde_engine import PathBatch


def _small_batch() -> PathBatch:
    values = np.arange(12, dtype=float).reshape(2, 3, 2) / 7.0
    return PathBatch(times=np.linspace(0.0, 1.0, 3), values=values, dt=0.5)


def test_missing_folder_is_created(tmp_path: Path) -> None:
    target = tmp_path / "a" / "b"
    assert ensure_output_folder(target) == target
    assert target.is_dir()
    # the write check leaves nothing behind
    assert list(target.iterdir()) == []


@pytest.mark.skipif(os.name != "posix" or os.geteuid() == 0, reason="needs a non-root POSIX user")
def test_unwritable_folder_raises(tmp_path: Path) -> None:
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    try:
        with pytest.raises(CONST.ArtifactIOError) as caught:
            ensure_output_folder(locked)
        assert isinstance(caught.value, OSError)
    finally:
        locked.chmod(0o700)


def test_file_in_the_way_raises(tmp_path: Path) -> None:
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    with pytest.raises(CONST.ArtifactIOError):
        ensure_output_folder(blocker / "out")


def test_floats_use_seventeen_significant_digits() -> None:
    assert format_cell(0.1) == "0.10000000000000001"
    assert float(format_cell(1.0 / 3.0)) == 1.0 / 3.0
    assert format_cell(np.int64(4)) == "4"
    assert format_cell("idbm") == "idbm"
    assert csv_bytes(("a", "b"), [(1, 0.5)]) == b"a,b\n1,0.5\n"


def test_content_hash_matches_git_blob_hash() -> None:
    payload = b"hello\n"
    expected = hashlib.sha1(b"blob 6\0hello\n").hexdigest()
    assert content_hash(payload) == expected
    # git hash-object of an empty file
    assert content_hash(b"") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391"


def test_path_batch_binary_layout() -> None:
    batch = _small_batch()
    payload = path_batch_bytes(batch)
    assert payload[:4] == CONST.PATH_BATCH_MAGIC
    assert len(payload) == 4 + 12 + 8 * 12
    restored = load_path_batch_bytes(payload)
    np.testing.assert_array_equal(restored.values, batch.values)
    np.testing.assert_allclose(restored.times, batch.times)
    with pytest.raises(CONST.DomainError):
        load_path_batch_bytes(payload[:-1])
    with pytest.raises(CONST.DomainError):
        load_path_batch_bytes(b"MLPV" + payload[4:])


def test_path_rows_and_plan_layout() -> None:
    rows = path_batch_rows(_small_batch())
    assert len(rows) == 6
    assert rows[4][:3] == [1, 1, 0.5]
    plan = np.array([[0.25, 0.25], [0.0, 0.5]])
    payload = plan_bytes(plan)
    assert struct.unpack_from("<III", payload, 4) == (2, 1, 2)
    np.testing.assert_array_equal(np.frombuffer(payload, dtype="<f8", offset=16).reshape(2, 2), plan)


def test_folder_records_written_files(tmp_path: Path) -> None:
    folder = ArtifactFolder(tmp_path / "run")
    folder.write_csv("table.csv", ("x",), [(1.5,)])
    folder.write_bytes("blob.bin", b"abc", record=False)
    assert set(folder.written()) == {"table.csv"}
    assert (tmp_path / "run" / "table.csv").read_bytes() == b"x\n1.5\n"
    with pytest.raises(CONST.ArtifactIOError):
        folder.write_bytes("../escape.bin", b"")
    nested = folder.write_bytes("sub/inner.bin", b"1")
    assert nested.exists()


def test_manifest_is_reproducible(tmp_path: Path) -> None:
    documents = []
    for name in ("first", "second"):
        folder = ArtifactFolder(tmp_path / name)
        folder.write_csv("table.csv", ("x",), [(0.1,)])
        path = folder.write_manifest({"kind": "gauss1d", "seed": 3}, 3, {"config": "abc"})
        documents.append(path.read_bytes())
    assert documents[0] == documents[1]
    manifest = json.loads(documents[0])
    assert manifest["seed"] == 3
    assert manifest["files"]["table.csv"] == content_hash(b"x\n0.10000000000000001\n")
    assert manifest["schema_version"] == CONST.CONFIG_SCHEMA_VERSION
