"""Minimal binary container shared by matrix dumps and spectrum files.

Layout: 8 magic bytes, little-endian uint64 header length, UTF-8 JSON header,
then raw little-endian payload blocks back to back.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import ProvenanceError

MAGIC = b"DICKEBIN"
FORMAT_VERSION = 1


def write(path, header: dict, blocks) -> int:
    header = {"format_version": FORMAT_VERSION, **header}
    raw = json.dumps(header, sort_keys=True).encode()
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(raw)))
        fh.write(raw)
        for block in blocks:
            arr = np.asarray(block)
            arr = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
            fh.write(np.ascontiguousarray(arr).tobytes())
    tmp.replace(path)
    return path.stat().st_size


def read(path, kind: str | None = None) -> tuple[dict, memoryview]:
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise ProvenanceError(f"{path}: not a container file")
    (size,) = struct.unpack("<Q", data[8:16])
    header = json.loads(data[16 : 16 + size])
    if header.get("format_version") != FORMAT_VERSION:
        raise ProvenanceError(
            f"{path}: format version {header.get('format_version')} != {FORMAT_VERSION}"
        )
    if kind is not None and header.get("kind") != kind:
        raise ProvenanceError(f"{path}: holds {header.get('kind')!r}, expected {kind!r}")
    return header, memoryview(data)[16 + size :]


def check_hash(header: dict, expected: str):
    if header.get("params_hash") != expected:
        raise ProvenanceError(
            f"params hash mismatch: file has {header.get('params_hash')}, wanted {expected}"
        )
