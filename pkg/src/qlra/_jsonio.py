"""Deterministic JSON writer.

``json.dumps`` prints floats with ``repr``; documents here use a fixed
17-significant-digit format so identical inputs give byte-identical output
across platforms. NaN and infinities become ``null``.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np


def _scalar(x: Any) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if not any(c in text for c in ".en"):
            text += ".0"
        return text
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _is_flat(seq: list) -> bool:
    return all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq)


def _encode(obj: Any, level: int, indent: int) -> str:
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if _is_flat(obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        items = [pad + _encode(v, level + 1, indent) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return _scalar(obj)


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, 0, indent) + "\n"


def complex_to_json(z: np.ndarray) -> dict:
    z = np.asarray(z, dtype=complex)
    return {"re": z.real, "im": z.imag}


def complex_from_json(doc: dict) -> np.ndarray:
    return np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
