"""JSON helpers: exact rationals travel as "num/den" strings, reports carry a schema version.

Floats never appear in stored reports except in fields explicitly marked as
display values; everything that feeds a decision is exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(value: Any) -> Fraction:
    """Accept "num/den" strings, decimal strings, ints, and Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError("refusing to parse a float as an exact rational; pass a string")
    raise ValueError(f"cannot parse {value!r} as a rational")


def jsonable(obj: Any) -> Any:
    """Recursively convert Fractions and tuples into JSON-friendly values."""
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, frozenset):
        return sorted(jsonable(v) for v in obj)
    return obj


def dump_report(report: dict, *, schema: bool = True) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    body = dict(report)
    if schema and "schemaVersion" not in body:
        body = {"schemaVersion": SCHEMA_VERSION, **body}
    return json.dumps(jsonable(body), sort_keys=True, separators=(",", ":")) + "\n"


def load_json(text: str) -> dict:
    return json.loads(text)
