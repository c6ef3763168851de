"""
Model Checkpoints
8-byte magic header followed by a UTF-8 JSON document
"""

import json
from pathlib import Path
from typing import Union

import numpy as np

from graphs import atomic_write_text

from .model import GnnConfigurationError, GnnModel

MAGIC = b"RGCUTGNN"
FORMAT_VERSION = 1


def dumps(model: GnnModel) -> bytes:
    model.validate()
    doc = {
        "version": FORMAT_VERSION,
        "widths": list(model.widths),
        "J": model.hops,
        "K": model.layers,
        "lossKind": model.loss_kind,
        "use_degree_term": model.use_degree_term,
        "normalize": model.normalize,
        "params": {
            name: {"shape": list(value.shape), "data": value.ravel(order="C").tolist()}
            for name, value in sorted(model.params.items())
        },
    }
    return MAGIC + json.dumps(doc, sort_keys=True).encode("utf-8")


def loads(blob: bytes) -> GnnModel:
    if blob[:len(MAGIC)] != MAGIC:
        raise GnnConfigurationError("Not a model checkpoint (bad magic header)")
    try:
        doc = json.loads(blob[len(MAGIC):].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise GnnConfigurationError(f"Corrupt checkpoint payload: {e}") from e
    if doc.get("version") != FORMAT_VERSION:
        raise GnnConfigurationError(f"Unsupported checkpoint version {doc.get('version')}")

    model = GnnModel(
        widths=doc["widths"],
        hops=doc["J"],
        loss_kind=doc["lossKind"],
        use_degree_term=doc["use_degree_term"],
        normalize=doc.get("normalize", True),
        params={
            name: np.asarray(entry["data"], dtype=np.float64).reshape(entry["shape"])
            for name, entry in doc["params"].items()
        },
    )
    if model.layers != doc["K"]:
        raise GnnConfigurationError(f"Checkpoint K={doc['K']} disagrees with {len(model.widths)} widths")
    model.validate()
    return model


def save_checkpoint(model: GnnModel, path: Union[str, Path]) -> None:
    path = Path(path)
    # header and JSON are ASCII-safe (json.dumps escapes non-ASCII by default)
    atomic_write_text(path, dumps(model).decode("ascii"))


def load_checkpoint(path: Union[str, Path]) -> GnnModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    return loads(path.read_bytes())
