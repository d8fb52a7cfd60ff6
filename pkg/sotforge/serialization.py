"""JSON codecs for operators and channels.

Floats are written with Python's shortest round-trip ``repr`` so that re-reading
an emitted document reproduces every double bit-exactly. Non-finite values are
written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.

Documents ending in ``.yaml``/``.yml`` are read with PyYAML, everything else with
the json module (PyYAML would read exponent-only floats such as ``1e-10`` as strings).
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from numpy.typing import ArrayLike

from sotforge.channels import Channel, channel_from_kraus, channel_from_superop, classical_channel
from sotforge.errors import DimensionError, SotforgeError
from sotforge.tensor import ComplexArray, DimsSpec, Operator


class DocumentError(SotforgeError, ValueError):
    """A JSON/YAML document does not have the expected shape."""


def encode_float(x: float) -> float | str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_float(x: Any) -> float:
    if isinstance(x, str):
        if x in ("inf", "-inf", "nan"):
            return float(x)
        raise DocumentError(f"Expected a number, got string {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"Expected a number, got {type(x).__name__}")
    return float(x)


def matrix_to_dict(m: ArrayLike) -> dict[str, Any]:
    arr = np.asarray(m, dtype=np.complex128)
    return {
        "re": [[float(v) for v in row] for row in arr.real],
        "im": [[float(v) for v in row] for row in arr.imag],
    }


def matrix_from_dict(doc: Mapping[str, Any]) -> ComplexArray:
    try:
        re = np.asarray(doc["re"], dtype=np.float64)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"Matrix document needs numeric 're' (and 'im') arrays: {exc}") from exc
    if re.ndim != 2 or re.shape != im.shape:
        raise DocumentError(f"'re' and 'im' must be matrices of equal shape, got {re.shape} and {im.shape}")
    return re + 1j * im


def dims_to_dict(spec: DimsSpec) -> dict[str, Any]:
    doc: dict[str, Any] = {"dims": list(spec.subsystem_dims)}
    if spec.blocks is not None:
        doc["blocks"] = list(spec.blocks)
        doc["block_axis"] = spec.block_axis
    return doc


def dims_from_dict(doc: Mapping[str, Any], key: str = "dims") -> DimsSpec:
    dims = doc.get(key)
    if dims is None:
        raise DocumentError(f"Missing '{key}'")
    blocks = doc.get("blocks") if key == "dims" else None
    return DimsSpec(
        tuple(int(d) for d in dims),
        None if blocks is None else tuple(int(b) for b in blocks),
        int(doc.get("block_axis", 0)),
    )


def operator_to_dict(op: Operator) -> dict[str, Any]:
    return {**dims_to_dict(op.dims), **matrix_to_dict(op.data)}


def operator_from_dict(doc: Mapping[str, Any]) -> Operator:
    data = matrix_from_dict(doc)
    spec = dims_from_dict(doc) if "dims" in doc else None
    return Operator(data, spec)  # type: ignore[arg-type]


def channel_to_dict(e: Channel) -> dict[str, Any]:
    doc: dict[str, Any] = {"in_dims": list(e.in_dims.subsystem_dims), "out_dims": list(e.out_dims.subsystem_dims)}
    if e.kraus is not None:
        doc["kraus"] = [matrix_to_dict(k) for k in e.kraus]
    else:
        doc["superop"] = matrix_to_dict(e.superop)
    doc["is_cp"] = e.is_cp
    doc["is_tp"] = e.is_tp
    return doc


def channel_from_dict(doc: Mapping[str, Any]) -> Channel:
    """Accepts ``kraus``, ``superop`` or ``stochastic`` (column-stochastic matrix) documents."""
    if "stochastic" in doc:
        return classical_channel(np.asarray(doc["stochastic"], dtype=np.float64))
    try:
        in_dims = DimsSpec(tuple(int(d) for d in doc["in_dims"]))
        out_dims = DimsSpec(tuple(int(d) for d in doc["out_dims"]))
    except KeyError as exc:
        raise DocumentError(f"Channel document is missing {exc}") from exc
    if "kraus" in doc:
        return channel_from_kraus([matrix_from_dict(k) for k in doc["kraus"]], in_dims, out_dims)
    if "superop" in doc:
        return channel_from_superop(matrix_from_dict(doc["superop"]), in_dims, out_dims)
    raise DocumentError("Channel document needs one of 'kraus', 'superop' or 'stochastic'")


def dumps(payload: Any) -> str:
    """Serialize with fixed key order and repr floats."""
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_document(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"Cannot read {path}: {exc}") from exc
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            return yaml.safe_load(text)
        return json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise DocumentError(f"Cannot parse {path}: {exc}") from exc


def load_operator(path: str | Path) -> Operator:
    doc = load_document(path)
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{path} does not contain an operator object")
    try:
        return operator_from_dict(doc)
    except DimensionError:
        raise
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def load_channel(path: str | Path) -> Channel:
    doc = load_document(path)
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{path} does not contain a channel object")
    return channel_from_dict(doc)


def load_matrix(path: str | Path) -> ComplexArray:
    """A bare ``{"re", "im"}`` matrix, e.g. a g or Ξ superoperator."""
    doc = load_document(path)
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{path} does not contain a matrix object")
    if "superop" in doc:
        doc = doc["superop"]
    return matrix_from_dict(doc)
