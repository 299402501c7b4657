"""Report serialization.

Rationals are written as ``"p/q"`` strings and floats as JSON numbers, so
``parse_report(emit_report(r)) == r``.  Keys listed in ``TEXT_KEYS`` hold
labels and are never converted back to numbers.
"""
from __future__ import annotations

import json
import re
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from .measures import _Vector

SCHEMA_VERSION = 1
TEXT_KEYS = frozenset(
    {"atoms", "command", "mode", "name", "notes", "quantity", "status", "timestamp", "trend", "warnings", "example"}
)
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def to_jsonable(obj):
    """Recursively turn report objects into JSON-ready values."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, _Vector):
        return [to_jsonable(x) for x in obj]
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False) + "\n"


def _revive(obj, text: bool = False):
    if isinstance(obj, dict):
        return {k: _revive(v, text or k in TEXT_KEYS) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_revive(x, text) for x in obj]
    if isinstance(obj, str) and not text and _RATIONAL.match(obj):
        return Fraction(obj)
    return obj


def parse_report(text: str) -> dict:
    return _revive(json.loads(text))


def strip_volatile(report: dict) -> dict:
    """Copy of ``report`` without the timestamp (for determinism checks)."""
    return {k: v for k, v in report.items() if k != "timestamp"}
