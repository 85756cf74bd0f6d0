"""JSON/CSV (de)serialisation for domains, bands, potentials and results.

Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .fractal import SelfSimilarBand
from .geometry import BC, Domain, Rectangle, RightIsoTriangle, Scaled, Union
from .sturm.potential import Potential, potential_from_dict


def domain_from_dict(obj: dict) -> Domain:
    kind = obj.get("type")
    if kind == "rectangle":
        return Rectangle(float(obj["a"]), float(obj["b"]), tuple(obj.get("bc", "DDDD")))
    if kind == "triangle":
        return RightIsoTriangle(float(obj["leg"]), tuple(obj.get("bc", "DDD")))
    if kind == "scaled":
        return Scaled(domain_from_dict(obj["inner"]), float(obj["alpha"]))
    if kind == "union":
        return Union(tuple(domain_from_dict(p) for p in obj["parts"]))
    raise ValueError(f"unknown domain type {kind!r}")


def domain_to_dict(d: Domain) -> dict:
    if isinstance(d, Rectangle):
        return {"type": "rectangle", "a": d.a, "b": d.b, "bc": [b.value for b in d.bc]}
    if isinstance(d, RightIsoTriangle):
        return {"type": "triangle", "leg": d.leg, "bc": [b.value for b in d.bc]}
    if isinstance(d, Scaled):
        return {"type": "scaled", "alpha": d.alpha, "inner": domain_to_dict(d.inner)}
    if isinstance(d, Union):
        return {"type": "union", "parts": [domain_to_dict(p) for p in d.parts]}
    raise TypeError(f"not a domain: {d!r}")


def band_from_dict(obj: dict) -> SelfSimilarBand:
    if obj.get("type") != "band":
        raise ValueError(f"expected a band, got type {obj.get('type')!r}")
    return SelfSimilarBand(domain_from_dict(obj["generator"]), float(obj["alpha"]))


def band_to_dict(b: SelfSimilarBand) -> dict:
    return {"type": "band", "alpha": b.alpha, "generator": domain_to_dict(b.generator)}


def potential_to_dict(q: Potential) -> dict:
    return q.to_dict()


def load_input(obj: dict) -> Domain | SelfSimilarBand | Potential:
    """Dispatch on the ``type`` field."""
    kind = obj.get("type")
    if kind == "band":
        return band_from_dict(obj)
    if kind in ("zero", "gamma", "grid"):
        return potential_from_dict(obj)
    return domain_from_dict(obj)


# -- formatting ----------------------------------------------------------------

def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _plain(obj: Any) -> Any:
    """Convert numpy/enum values into JSON-ready Python objects."""
    if isinstance(obj, BC):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(k) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Deterministic JSON with %.17g floats; non-finite floats become null."""
    return _encode(_plain(obj), indent, 0) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else _plain(v) for v in row])
    return buf.getvalue()
