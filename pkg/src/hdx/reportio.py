"""JSON/TSV serialization for reports. All output is deterministic."""

from __future__ import annotations

import json
import math
from fractions import Fraction


def rat_json(x):
    """Exact rationals as {"num", "den"}; infinities as "inf"."""
    if x is None:
        return None
    if x == math.inf:
        return "inf"
    f = Fraction(x)
    return {"num": f.numerator, "den": f.denominator}


def rat_from_json(obj) -> Fraction | float:
    if obj == "inf":
        return math.inf
    return Fraction(obj["num"], obj["den"])


def cochain_json(A) -> dict:
    return {"k": A.k, "faces": sorted(A.indices())}


def json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _flatten(obj, prefix: str, rows: list) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _flatten(item, f"{prefix}[{i}]", rows)
    else:
        rows.append((prefix, json.dumps(obj)))


def tsv_dumps(obj) -> str:
    rows: list = []
    _flatten(obj, "", rows)
    return "".join(f"{key}\t{value}\n" for key, value in rows)
