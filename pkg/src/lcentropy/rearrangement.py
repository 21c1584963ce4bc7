"""Decreasing rearrangement f -> f↓ for step and piecewise exp-affine densities."""

from __future__ import annotations

import math
from typing import overload

from .density import (
    ExpAffineSegment,
    GridDensity,
    Interval,
    PiecewiseExpAffineDensity,
    StepDensity,
)

VALUE_RTOL = 1e-11


class NotUnimodalError(ValueError):
    pass


def superlevel_measure(d, lam: float) -> float:
    """|{f > lam}|, exactly for steps and in closed form per exp-affine segment."""
    if not lam > 0:
        raise ValueError("level must be positive")
    if isinstance(d, StepDensity):
        for iv, level in zip(d.intervals, d.levels()):
            if level > lam:
                return iv.length
        return 0.0
    if isinstance(d, GridDensity):
        raise TypeError("grid densities are not rearranged")
    total = []
    ln_lam = math.log(lam)
    for s in d.segments:
        if s.p == 0:
            if s.value(s.lo) > lam:
                total.append(s.length)
            continue
        cross = (-ln_lam - s.q) / s.p
        if s.p > 0:
            total.append(min(max(cross - s.lo, 0.0), s.length))
        else:
            total.append(min(max(s.hi - cross, 0.0), s.length))
    return math.fsum(total)


def _knot_log_values(d: PiecewiseExpAffineDensity) -> list[float]:
    out = []
    for s in d.segments:
        out += [s.log_value(s.lo), s.log_value(s.hi)]
    return out


def is_unimodal(d: PiecewiseExpAffineDensity, rtol: float = VALUE_RTOL) -> bool:
    """Values along the support rise (weakly) and then fall (weakly)."""
    vals = _knot_log_values(d)
    tol = lambda v: rtol * max(1.0, abs(v))  # noqa: E731
    i = 0
    while i + 1 < len(vals) and vals[i + 1] >= vals[i] - tol(vals[i]):
        i += 1
    while i + 1 < len(vals) and vals[i + 1] <= vals[i] + tol(vals[i]):
        i += 1
    return i == len(vals) - 1


def _cluster(log_values: list[float], rtol: float) -> list[float]:
    """Distinct log-levels, descending, merging near-equal ones."""
    out: list[float] = []
    for v in sorted(log_values, reverse=True):
        if not out or out[-1] - v > rtol * max(1.0, abs(v)):
            out.append(v)
    return out


def _rearrange_piecewise(d: PiecewiseExpAffineDensity) -> PiecewiseExpAffineDensity:
    if not is_unimodal(d):
        raise NotUnimodalError("decreasing rearrangement needs a unimodal density")
    levels = _cluster(_knot_log_values(d), VALUE_RTOL)

    def same(a: float, b: float) -> bool:
        return abs(a - b) <= VALUE_RTOL * max(1.0, abs(a))

    segs: list[ExpAffineSegment] = []
    s = 0.0
    for i, lv in enumerate(levels):
        # flat pieces sitting at this level
        flat = math.fsum(
            seg.length for seg in d.segments if seg.p == 0 and same(seg.log_value(seg.lo), lv)
        )
        if flat > 0:
            segs.append(ExpAffineSegment.make(s, s + flat, 0.0, -lv))
            s += flat
        if i + 1 == len(levels):
            break
        lower = levels[i + 1]
        # every sloped segment whose value range covers (lower, lv) crosses the band
        inv_slope = math.fsum(
            1.0 / abs(seg.p)
            for seg in d.segments
            if seg.p != 0
            and min(seg.log_value(seg.lo), seg.log_value(seg.hi)) <= lower + VALUE_RTOL * max(1.0, abs(lower))
            and max(seg.log_value(seg.lo), seg.log_value(seg.hi)) >= lv - VALUE_RTOL * max(1.0, abs(lv))
        )
        if inv_slope == 0:
            continue  # a jump of f: no mass at intermediate levels
        width = inv_slope * (lv - lower)
        p = 1.0 / inv_slope
        segs.append(ExpAffineSegment.make(s, s + width, p, -lv - p * s))
        s += width
    return PiecewiseExpAffineDensity(tuple(segs))


@overload
def decreasing_rearrangement(d: StepDensity) -> StepDensity: ...
@overload
def decreasing_rearrangement(d: PiecewiseExpAffineDensity) -> PiecewiseExpAffineDensity: ...


def decreasing_rearrangement(d):
    """The nonincreasing density on (0, |supp f|) with the same superlevel measures."""
    if isinstance(d, StepDensity):
        return StepDensity(tuple(Interval(0.0, iv.length) for iv in d.intervals), d.weights)
    if isinstance(d, PiecewiseExpAffineDensity):
        return _rearrange_piecewise(d)
    raise TypeError(f"cannot rearrange {type(d).__name__}")
