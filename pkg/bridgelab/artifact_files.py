"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: artifact_files.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Lock-guarded writer for the artifacts of a run: CSV tables, binary path and plan dumps, checkpoints and the manifest.
# // AR
# +==== END bridgelab =================+
"""

import csv
import io
import json
import struct
import hashlib
from pathlib import Path
from threading import RLock
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

try:
    from . import constants as CONST
    from .rogger import Rogger, RI
    from .sde_engine import PathBatch
except ImportError:
    import constants as CONST
    from rogger import Rogger, RI
    from sde_engine import PathBatch

_PBV1_HEADER = struct.Struct("<III")


def ensure_output_folder(path: Union[str, Path]) -> Path:
    """Create the output folder when missing and check it can be written.

    Arguments:
        path (Union[str, Path]): The output folder.

    Returns:
        Path: The resolved folder.

    Raises:
        ArtifactIOError: the folder cannot be created or written.
    """
    folder = Path(path)
    marker = folder / CONST.WRITE_CHECK_NAME
    try:
        folder.mkdir(parents=True, exist_ok=True)
        marker.write_bytes(b"")
        marker.unlink()
    except OSError as error:
        raise CONST.ArtifactIOError(f"output folder is not writable: {error}", path=folder) from error
    return folder


def format_cell(value: Any) -> str:
    """CSV rendering: floats with 17 significant digits, everything else as str."""
    if isinstance(value, (float, np.floating)):
        return CONST.CSV_FLOAT_FORMAT.format(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue().encode(CONST.DEFAULT_ENCODING)


def content_hash(payload: bytes) -> str:
    """Git-style blob hash: sha1 of b"blob <len>\\0" + payload."""
    digest = hashlib.sha1()
    digest.update(b"blob " + str(len(payload)).encode("ascii") + b"\0")
    digest.update(payload)
    return digest.hexdigest()


def path_batch_bytes(batch: PathBatch) -> bytes:
    """PBV1: magic, u32 n, u32 m+1, u32 d, little-endian float64 values row-major."""
    n, steps, d = batch.values.shape
    return CONST.PATH_BATCH_MAGIC + _PBV1_HEADER.pack(n, steps, d) + batch.values.astype("<f8").tobytes(order="C")


def load_path_batch_bytes(payload: bytes, tau: float = 1.0) -> PathBatch:
    """Rebuild a PathBatch from PBV1 bytes on the uniform grid of [0, tau].

    Raises:
        DomainError: bad magic or a payload of the wrong size.
    """
    magic = CONST.PATH_BATCH_MAGIC
    if payload[:len(magic)] != magic or len(payload) < len(magic) + _PBV1_HEADER.size:
        raise CONST.DomainError("not a PBV1 payload")
    n, steps, d = _PBV1_HEADER.unpack_from(payload, len(magic))
    offset = len(magic) + _PBV1_HEADER.size
    if len(payload) != offset + 8 * n * steps * d or steps < 2:
        raise CONST.DomainError(f"PBV1 payload size does not match the header ({n}, {steps}, {d})")
    values = np.frombuffer(payload, dtype="<f8", offset=offset).astype(np.float64).reshape(n, steps, d)
    return PathBatch(times=np.linspace(0.0, tau, steps), values=values, dt=tau / (steps - 1))


def plan_bytes(plan: np.ndarray) -> bytes:
    """A plan in the PBV1 layout: m rows, one time slice, n columns."""
    plan = np.asarray(plan, dtype=np.float64)
    rows, cols = plan.shape
    return CONST.PATH_BATCH_MAGIC + _PBV1_HEADER.pack(rows, 1, cols) + plan.astype("<f8").tobytes(order="C")


def path_batch_rows(batch: PathBatch) -> List[List[Any]]:
    """(path, step, t, x_0, ..., x_d-1) rows for small batches."""
    rows: List[List[Any]] = []
    for path in range(batch.n_paths):
        for step, t in enumerate(batch.times):
            rows.append([path, step, float(t), *batch.values[path, step].tolist()])
    return rows


def canonical_json(document: Dict[str, Any]) -> bytes:
    return json.dumps(document, sort_keys=True, separators=(",", ":")).encode(CONST.DEFAULT_ENCODING)


class ArtifactFolder:
    """Write the artifacts of one run under a single folder.

    Public methods are thread-safe. Every written file is recorded with its
    content hash so the manifest can list them.
    """

    def __init__(self, folder: Union[str, Path], *, create: bool = True) -> None:
        """Open (and by default create) the output folder.

        Arguments:
            folder (Union[str, Path]): Destination folder.

        Keyword Arguments:
            create (bool): Create the folder and check it is writable. Default: True

        Raises:
            ArtifactIOError: the folder is not writable.
        """
        self.rogger: Rogger = RI
        self._lock: RLock = RLock()
        self.folder: Path = ensure_output_folder(folder) if create else Path(folder)
        self._written: Dict[str, str] = {}
        self.rogger.log_debug(f"artifact folder ready at {self.folder}")

    def _target(self, name: str) -> Path:
        if not name or Path(name).is_absolute() or ".." in Path(name).parts:
            raise CONST.ArtifactIOError(f"invalid artifact name {name!r}", path=name)
        return self.folder / name

    def write_bytes(self, name: str, payload: bytes, *, lock: bool = True, record: bool = True) -> Path:
        """Write raw bytes and, unless record is False, list their hash in the manifest.

        Raises:
            ArtifactIOError: the write failed, with the path.
        """
        if lock:
            with self._lock:
                return self.write_bytes(name, payload, lock=False, record=record)
        target = self._target(name)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(payload)
        except OSError as error:
            raise CONST.ArtifactIOError(f"could not write artifact: {error}", path=target) from error
        if record:
            self._written[name] = content_hash(payload)
        self.rogger.log_info(f"wrote {target} ({len(payload)} bytes)")
        return target

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]], *, lock: bool = True, record: bool = True) -> Path:
        """Write a CSV table with 17-significant-digit floats."""
        return self.write_bytes(name, csv_bytes(header, rows), lock=lock, record=record)

    def dump_path_batch(self, name: str, batch: PathBatch) -> Path:
        return self.write_bytes(name, path_batch_bytes(batch))

    def dump_plan(self, name: str, plan: np.ndarray) -> Path:
        return self.write_bytes(name, plan_bytes(plan))

    def written(self, *, lock: bool = True) -> Dict[str, str]:
        """Copy of the {name: content hash} table of the files written so far."""
        if lock:
            with self._lock:
                return dict(self._written)
        return dict(self._written)

    def write_manifest(self, config_document: Dict[str, Any], seed: int, inputs: Optional[Dict[str, str]] = None) -> Path:
        """Write the manifest: config hash, seed, inputs and the hash of every artifact.

        The manifest holds no timestamps, so identical runs give identical manifests.
        """
        with self._lock:
            manifest = {
                "schema_version": CONST.CONFIG_SCHEMA_VERSION,
                "config": config_document,
                "config_hash": content_hash(canonical_json(config_document)),
                "seed": int(seed),
                "inputs": dict(sorted((inputs or {}).items())),
                "files": dict(sorted(self._written.items())),
            }
            payload = json.dumps(manifest, sort_keys=True, indent=2).encode(CONST.DEFAULT_ENCODING) + b"\n"
            return self.write_bytes(CONST.MANIFEST_NAME, payload, lock=False)
