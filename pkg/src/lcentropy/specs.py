"""JSON density specs.

    {"type": "piecewise_exp_affine", "segments": [{"lo", "hi", "p", "q"}, ...]}
    {"type": "step", "pieces": [{"lo", "hi", "weight"}, ...]}
    {"type": "grid", "origin", "step", "values": [...]}

``emit`` followed by ``parse`` reproduces a density field for field.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .density import (
    Density,
    ExpAffineSegment,
    GridDensity,
    MalformedDensityError,
    PiecewiseExpAffineDensity,
    StepDensity,
    normalize,
)


class SpecError(ValueError):
    """Schema violation, with the offending field path in the message."""


def _number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise SpecError(f"{where}.{key}: missing")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{where}.{key}: expected a number, got {type(v).__name__}")
    v = float(v)
    if not math.isfinite(v):
        raise SpecError(f"{where}.{key}: must be finite")
    return v


def _list(obj: dict, key: str, where: str) -> list:
    v = obj.get(key)
    if not isinstance(v, list) or not v:
        raise SpecError(f"{where}.{key}: expected a non-empty list")
    return v


def _items(obj: dict, key: str, where: str):
    for i, item in enumerate(_list(obj, key, where)):
        path = f"{where}.{key}[{i}]"
        if not isinstance(item, dict):
            raise SpecError(f"{path}: expected an object")
        yield path, item


def from_dict(spec: Any) -> Density:
    if not isinstance(spec, dict):
        raise SpecError("spec: expected a JSON object")
    kind = spec.get("type")
    if kind == "piecewise_exp_affine":
        segs = tuple(
            ExpAffineSegment.make(*(_number(item, k, path) for k in ("lo", "hi", "p", "q")))
            for path, item in _items(spec, "segments", "spec")
        )
        return PiecewiseExpAffineDensity(segs)
    if kind == "step":
        pieces = [
            tuple(_number(item, k, path) for k in ("lo", "hi", "weight"))
            for path, item in _items(spec, "pieces", "spec")
        ]
        return StepDensity.from_pieces(pieces)
    if kind == "grid":
        values = _list(spec, "values", "spec")
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SpecError(f"spec.values[{i}]: expected a number")
            if v < 0:
                raise SpecError(f"spec.values[{i}]: negative density value {v}")
        return GridDensity(_number(spec, "origin", "spec"), _number(spec, "step", "spec"),
                           np.asarray(values, dtype=float))
    raise SpecError(f"spec.type: unknown density type {kind!r}")


def to_dict(d: Density) -> dict:
    if isinstance(d, PiecewiseExpAffineDensity):
        return {
            "type": "piecewise_exp_affine",
            "segments": [{"lo": s.lo, "hi": s.hi, "p": s.p, "q": s.q} for s in d.segments],
        }
    if isinstance(d, StepDensity):
        return {
            "type": "step",
            "pieces": [{"lo": iv.lo, "hi": iv.hi, "weight": w} for iv, w in zip(d.intervals, d.weights)],
        }
    if isinstance(d, GridDensity):
        return {"type": "grid", "origin": d.origin, "step": d.step, "values": d.values.tolist()}
    raise TypeError(f"cannot emit {type(d).__name__}")


def parse_density_spec(source: str | Path, do_normalize: bool = False) -> Density:
    """Parse a spec from a file path or an inline JSON string."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        path = Path(text)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    d = from_dict(raw)
    return normalize(d) if do_normalize else d


def emit_density_spec(d: Density, indent: int | None = None) -> str:
    return json.dumps(to_dict(d), indent=indent)


def same_density(d1: Density, d2: Density) -> bool:
    """Field-for-field equality (grids compare values exactly)."""
    if type(d1) is not type(d2):
        return False
    if isinstance(d1, GridDensity):
        return d1.origin == d2.origin and d1.step == d2.step and np.array_equal(d1.values, d2.values)
    return d1 == d2


__all__ = ["MalformedDensityError", "SpecError", "emit_density_spec", "from_dict",
           "parse_density_spec", "same_density", "to_dict"]
