"""JSON helpers: complex points, the point at infinity, stable output.

Complex numbers are written as [re, im], infinity as the string
"infinity", floats rounded to 12 significant digits, keys sorted.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from core.errors import InvalidInput, OutputNotWritable
from core.rational import INF, Point, is_inf
from utils.helpers import round_sig

__all__ = ["point_to_json", "point_from_json", "normalize", "dumps", "write_json", "read_json"]

INFINITY_TAG = "infinity"


def _float(x: float) -> float | str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return round_sig(x)


def point_to_json(z: Point) -> list | str:
    if is_inf(z):
        return INFINITY_TAG
    z = complex(z)
    return [_float(z.real), _float(z.imag)]


def point_from_json(v: Any) -> Point:
    if v == INFINITY_TAG:
        return INF
    try:
        re, im = v
        return complex(float(re), float(im))
    except (TypeError, ValueError) as e:
        raise InvalidInput(f"expected [re, im] or {INFINITY_TAG!r}, got {v!r}") from e


def normalize(obj: Any) -> Any:
    """Convert to plain JSON types."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if is_inf(obj):
        return INFINITY_TAG
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return point_to_json(complex(obj))
    if isinstance(obj, np.ndarray):
        return [normalize(x) for x in obj.tolist()]
    if hasattr(obj, "to_json"):
        return normalize(obj.to_json())
    if is_dataclass(obj) and not isinstance(obj, type):
        return normalize(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps(obj: Any) -> str:
    return json.dumps(normalize(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: str | Path, obj: Any) -> Path:
    path = Path(path)
    text = dumps(obj)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputNotWritable(f"cannot write {path}: {e}") from e
    return path


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"malformed JSON in {path}: {e}") from e
