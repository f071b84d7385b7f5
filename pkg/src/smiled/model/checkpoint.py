"""Checkpoint I/O.

Layout: 8-byte magic ``SMITED01``, an 8-byte little-endian manifest
length, the JSON manifest (config plus named parameter records with
shapes and byte offsets into the data section), then the raw
little-endian float32 data.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from ..errors import ConfigMismatch, CorruptCheckpoint
from ..nn import Tensor
from .config import ModelConfig

MAGIC = b"SMITED01"


def save_checkpoint(params: dict[str, Tensor], config: ModelConfig, path) -> None:
    records = []
    offset = 0
    blobs = []
    for name, tensor in params.items():
        data = np.ascontiguousarray(tensor.data, dtype="<f4")
        records.append(
            {
                "name": name,
                "shape": list(data.shape),
                "offset": offset,
                "size": int(data.size),
                "trainable": bool(tensor.requires_grad),
            }
        )
        blobs.append(data.tobytes())
        offset += data.size * 4
    manifest = json.dumps(
        {"config": config.to_dict(), "dtype": "<f4", "params": records}
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(manifest)))
        fh.write(manifest)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(
    path, expect_config: ModelConfig | None = None, dtype=np.float32
) -> tuple[dict[str, Tensor], ModelConfig]:
    """Inverse of save; bit-identical values for float32 parameters.
    Raises CorruptCheckpoint on magic/version/length problems and
    ConfigMismatch when ``expect_config`` disagrees."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 8:
        raise CorruptCheckpoint(f"{path}: file shorter than header")
    if blob[: len(MAGIC)] != MAGIC:
        raise CorruptCheckpoint(f"{path}: bad magic {blob[:8]!r}")
    manifest_len = struct.unpack("<Q", blob[8:16])[0]
    manifest_end = 16 + manifest_len
    if len(blob) < manifest_end:
        raise CorruptCheckpoint(f"{path}: truncated manifest")
    try:
        manifest = json.loads(blob[16:manifest_end].decode("utf-8"))
        config = ModelConfig.from_dict(manifest["config"])
        records = manifest["params"]
    except (ValueError, KeyError, TypeError) as err:
        raise CorruptCheckpoint(f"{path}: unreadable manifest: {err}") from None

    if expect_config is not None and config != expect_config:
        raise ConfigMismatch(
            f"{path}: checkpoint config {config.to_dict()} != expected "
            f"{expect_config.to_dict()}"
        )

    data = blob[manifest_end:]
    params: dict[str, Tensor] = {}
    for rec in records:
        start = rec["offset"]
        stop = start + rec["size"] * 4
        if stop > len(data):
            raise CorruptCheckpoint(
                f"{path}: data section truncated at parameter {rec['name']!r}"
            )
        arr = np.frombuffer(data[start:stop], dtype="<f4").reshape(rec["shape"])
        params[rec["name"]] = Tensor(
            arr.astype(dtype), requires_grad=bool(rec["trainable"])
        )
    return params, config
