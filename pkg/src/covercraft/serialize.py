"""JSON helpers shared by the CLI and report objects."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


def ext(value: Any) -> Any:
    """Map INFINITY to the string "inf" so reports stay valid JSON."""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return ext(obj)


def dumps(payload: dict) -> str:
    body = {"schema": SCHEMA_VERSION, **payload}
    return json.dumps(_clean(body), default=_default, sort_keys=True, indent=2, allow_nan=False)
