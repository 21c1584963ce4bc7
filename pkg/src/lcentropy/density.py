"""One-dimensional densities with closed-form moments and entropies.

Three carriers:

* ``PiecewiseExpAffineDensity``: f = exp(-(p t + q)) on contiguous segments.
* ``StepDensity``: sum_k w_k 1_{I_k} / |I_k| with strictly nested intervals.
  Computations go through its exact piecewise-constant form.
* ``GridDensity``: samples on a uniform grid, integrated by the trapezoid rule.

All entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

MASS_TOL = 1e-9
# below this value of |p| * length the segment integrals use their power series
SERIES_SWITCH = 2.0
_SERIES_TERMS = 40


class MalformedDensityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# carriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise MalformedDensityError(f"interval endpoints must be finite: {self}")
        if not self.lo < self.hi:
            raise MalformedDensityError(f"interval needs lo < hi: ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class ExpAffineSegment:
    """exp(-(p t + q)) on ``interval``."""

    interval: Interval
    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise MalformedDensityError(f"non-finite slope/offset: p={self.p}, q={self.q}")
        for t in (self.lo, self.hi):
            v = self.p * t + self.q
            if not math.isfinite(v) or -v > 700:
                raise MalformedDensityError(f"density value out of range at t={t}")

    @classmethod
    def make(cls, lo: float, hi: float, p: float, q: float) -> "ExpAffineSegment":
        return cls(Interval(float(lo), float(hi)), float(p), float(q))

    @property
    def lo(self) -> float:
        return self.interval.lo

    @property
    def hi(self) -> float:
        return self.interval.hi

    @property
    def length(self) -> float:
        return self.interval.length

    def log_value(self, t: float) -> float:
        return -(self.p * t + self.q)

    def value(self, t: float) -> float:
        return math.exp(self.log_value(t))


@dataclass(frozen=True)
class PiecewiseExpAffineDensity:
    segments: tuple[ExpAffineSegment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise MalformedDensityError("density needs at least one segment")
        for s0, s1 in zip(segs, segs[1:]):
            if abs(s0.hi - s1.lo) > 1e-12 * max(1.0, abs(s0.hi)):
                raise MalformedDensityError(
                    f"segments not contiguous: {s0.hi} followed by {s1.lo}"
                )
        object.__setattr__(self, "segments", segs)

    @classmethod
    def single(cls, lo: float, hi: float, p: float = 0.0, q: float = 0.0):
        return cls((ExpAffineSegment.make(lo, hi, p, q),))

    @property
    def support(self) -> Interval:
        return Interval(self.segments[0].lo, self.segments[-1].hi)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for i, s in enumerate(self.segments):
            last = i == len(self.segments) - 1
            mask = (t >= s.lo) & ((t <= s.hi) if last else (t < s.hi))
            out[mask] = np.exp(-(s.p * t[mask] + s.q))
        return out


@dataclass(frozen=True)
class StepDensity:
    """sum_k w_k 1_{I_k} / |I_k| with I_0 ⊋ I_1 ⊋ ... and sum w_k = 1."""

    intervals: tuple[Interval, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        ivs, ws = tuple(self.intervals), tuple(float(w) for w in self.weights)
        if not ivs or len(ivs) != len(ws):
            raise MalformedDensityError("need one weight per interval")
        if any(not (w > 0) for w in ws):
            raise MalformedDensityError("weights must be positive")
        if abs(math.fsum(ws) - 1.0) > MASS_TOL:
            raise MalformedDensityError(f"weights sum to {math.fsum(ws)}, expected 1")
        for outer, inner in zip(ivs, ivs[1:]):
            if not (outer.contains(inner) and inner.length < outer.length):
                raise MalformedDensityError("intervals not nested")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_pieces(cls, pieces: Sequence[tuple[float, float, float]]) -> "StepDensity":
        """Build from (lo, hi, weight) triples in any order (sorted outermost first)."""
        ordered = sorted(pieces, key=lambda p: p[1] - p[0], reverse=True)
        return cls(
            tuple(Interval(float(lo), float(hi)) for lo, hi, _ in ordered),
            tuple(float(w) for _, _, w in ordered),
        )

    def levels(self) -> list[float]:
        """Cumulative heights: value on I_k minus I_{k+1}."""
        out, acc = [], 0.0
        for iv, w in zip(self.intervals, self.weights):
            acc += w / iv.length
            out.append(acc)
        return out

    def to_piecewise(self) -> PiecewiseExpAffineDensity:
        knots = sorted({e for iv in self.intervals for e in (iv.lo, iv.hi)})
        levels = self.levels()
        segs = []
        for a, b in zip(knots, knots[1:]):
            mid = 0.5 * (a + b)
            depth = -1
            for k, iv in enumerate(self.intervals):
                if iv.lo <= mid <= iv.hi:
                    depth = k
            segs.append(ExpAffineSegment.make(a, b, 0.0, -math.log(levels[depth])))
        return PiecewiseExpAffineDensity(tuple(segs))


@dataclass(frozen=True, eq=False)
class GridDensity:
    origin: float
    step: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if not self.step > 0:
            raise MalformedDensityError("grid step must be positive")
        if vals.ndim != 1 or vals.size < 2:
            raise MalformedDensityError("grid needs at least two values")
        if np.any(~np.isfinite(vals)) or np.any(vals < 0):
            raise MalformedDensityError("grid values must be finite and nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def grid(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.values.size)

    def integrate(self, g: np.ndarray) -> float:
        return float(np.trapezoid(g, dx=self.step))


Density = Union[PiecewiseExpAffineDensity, StepDensity, GridDensity]


@dataclass(frozen=True)
class ScalarStats:
    mass: float
    mean: float
    second_moment: float
    variance: float
    shannon_entropy: float

    def to_json(self) -> dict:
        return {
            "mass": self.mass,
            "mean": self.mean,
            "second_moment": self.second_moment,
            "variance": self.variance,
            "h": self.shannon_entropy,
        }


# ---------------------------------------------------------------------------
# segment integrals
# ---------------------------------------------------------------------------


def _unit_integrals(z: float, kmax: int) -> list[float]:
    """j_k(z) = int_0^1 s^k e^{-z s} ds for k = 0..kmax, z >= 0."""
    if z < SERIES_SWITCH:
        out = []
        for k in range(kmax + 1):
            term, acc = 1.0, 0.0
            for n in range(_SERIES_TERMS):
                acc += term / (n + k + 1)
                term *= -z / (n + 1)
            out.append(acc)
        return out
    emz = math.exp(-z)
    out = [-math.expm1(-z) / z]
    for k in range(1, kmax + 1):
        out.append((k * out[-1] - emz) / z)
    return out


def _segment_integrals(seg: ExpAffineSegment, center: float, kmax: int) -> list[float]:
    """int_seg (t - center)^k f(t) dt for k = 0..kmax.

    Anchored at the endpoint where f is largest so that only decaying
    exponentials appear.
    """
    ell = seg.length
    if seg.p >= 0:
        anchor, sign = seg.lo, 1.0
    else:
        anchor, sign = seg.hi, -1.0
    va = seg.value(anchor)
    j = _unit_integrals(abs(seg.p) * ell, kmax)
    d = anchor - center
    out = []
    for k in range(kmax + 1):
        acc = math.fsum(
            math.comb(k, i) * d ** (k - i) * sign**i * ell ** (i + 1) * j[i] for i in range(k + 1)
        )
        out.append(va * acc)
    return out


def _segment_entropy_part(seg: ExpAffineSegment) -> float:
    """-int_seg f log f."""
    ell = seg.length
    anchor = seg.lo if seg.p >= 0 else seg.hi
    lva = seg.log_value(anchor)
    va = math.exp(lva)
    j = _unit_integrals(abs(seg.p) * ell, 1)
    # log f = log f(anchor) - |p| u
    return va * (-lva * ell * j[0] + abs(seg.p) * ell**2 * j[1])


def _as_piecewise(d) -> PiecewiseExpAffineDensity:
    if isinstance(d, PiecewiseExpAffineDensity):
        return d
    if isinstance(d, StepDensity):
        return d.to_piecewise()
    raise TypeError(f"unsupported density type {type(d).__name__}")


def _check(v: float, what: str) -> float:
    if not math.isfinite(v):
        raise MalformedDensityError(f"non-finite {what}")
    return v


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def moments(d: Density, order: int, center: float = 0.0) -> float:
    """int (t - center)^order f(t) dt (not normalized)."""
    if order < 0 or order > 6:
        raise ValueError("order must be in 0..6")
    if isinstance(d, GridDensity):
        return d.integrate((d.grid - center) ** order * d.values)
    pw = _as_piecewise(d)
    return _check(
        math.fsum(_segment_integrals(s, center, order)[order] for s in pw.segments), "moment"
    )


def mass(d: Density) -> float:
    return moments(d, 0)


def mean(d: Density) -> float:
    m0 = mass(d)
    if not m0 > 0:
        raise ValueError("zero mass")
    return moments(d, 1) / m0


def variance(d: Density) -> float:
    m0 = mass(d)
    if not m0 > 0:
        raise ValueError("zero mass")
    mu = moments(d, 1) / m0
    # central second moment; one correction pass absorbs the rounding in mu
    c1 = moments(d, 1, center=mu) / m0
    return moments(d, 2, center=mu) / m0 - c1 * c1


def mixture_variance(components: Sequence[tuple[float, float, float]]) -> float:
    """Variance of sum_i w_i f_i from (w_i, mean_i, var_i), folded pairwise.

    Var = w Var_0 + (1-w) Var_1 + w (1-w) (mu_1 - mu_0)^2, applied left to right.
    """
    if not components:
        raise ValueError("need at least one component")
    if any(not (w > 0) for w, _, _ in components):
        raise ValueError("weights must be positive")
    if abs(math.fsum(w for w, _, _ in components) - 1.0) > MASS_TOL:
        raise ValueError("weights must sum to 1")
    w_acc, mu_acc, var_acc = components[0]
    for w, mu, var in components[1:]:
        total = w_acc + w
        lam = w_acc / total
        var_acc = lam * var_acc + (1 - lam) * var + lam * (1 - lam) * (mu - mu_acc) ** 2
        mu_acc = lam * mu_acc + (1 - lam) * mu
        w_acc = total
    return var_acc


def _require_normalized(d: Density) -> None:
    m0 = mass(d)
    if abs(m0 - 1.0) > MASS_TOL:
        raise ValueError(f"density not normalized (mass {m0!r}); call normalize() first")


def _xlogx(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = v[pos] * np.log(v[pos])
    return out


def shannon_entropy(d: Density) -> float:
    _require_normalized(d)
    if isinstance(d, GridDensity):
        return -d.integrate(_xlogx(d.values))
    pw = _as_piecewise(d)
    return _check(math.fsum(_segment_entropy_part(s) for s in pw.segments), "entropy")


def sup_value(d: Density) -> float:
    if isinstance(d, GridDensity):
        return float(d.values.max())
    pw = _as_piecewise(d)
    return max(max(s.value(s.lo), s.value(s.hi)) for s in pw.segments)


def support_length(d: Density) -> float:
    if isinstance(d, GridDensity):
        pos = np.nonzero(d.values > 0)[0]
        return float(pos.size * d.step) if pos.size else 0.0
    pw = _as_piecewise(d)
    return math.fsum(s.length for s in pw.segments)


def renyi_entropy(d: Density, alpha: float) -> float:
    """h_alpha = log(int f^alpha) / (1 - alpha), with the alpha in {0, 1, inf} limits."""
    if alpha < 0 or math.isnan(alpha):
        raise ValueError("alpha must be nonnegative")
    if alpha == 1:
        return shannon_entropy(d)
    _require_normalized(d)
    if alpha == 0:
        return math.log(support_length(d))
    if math.isinf(alpha):
        return -math.log(sup_value(d))
    if isinstance(d, GridDensity):
        integral = d.integrate(np.where(d.values > 0, d.values, 0.0) ** alpha)
    else:
        pw = _as_piecewise(d)
        integral = math.fsum(
            _segment_integrals(
                ExpAffineSegment(s.interval, alpha * s.p, alpha * s.q), 0.0, 0
            )[0]
            for s in pw.segments
        )
    if not (integral > 0 and math.isfinite(integral)):
        raise ValueError(f"divergent or vanishing integral of f^alpha for alpha={alpha}")
    return math.log(integral) / (1.0 - alpha)


def entropy_power(d: Density) -> float:
    """N = exp(2h) / (2 pi e)."""
    return math.exp(2 * shannon_entropy(d)) / (2 * math.pi * math.e)


def renyi_entropy_power(d: Density, alpha: float) -> float:
    """N_alpha = exp(2 h_alpha), without the 2 pi e normalization."""
    return math.exp(2 * renyi_entropy(d, alpha))


def entropy_variance_gap(d: Density) -> float:
    """h - log(Var)/2 - 1; zero for the one-sided exponential."""
    var = variance(d)
    if not var > 0:
        raise ValueError("variance must be positive")
    return shannon_entropy(d) - 0.5 * math.log(var) - 1.0


def normalize(d: Density) -> Density:
    m0 = mass(d)
    if not m0 > 0:
        raise ValueError("zero mass")
    if isinstance(d, GridDensity):
        return GridDensity(d.origin, d.step, d.values / m0)
    if isinstance(d, StepDensity):
        return d
    shift = math.log(m0)
    return PiecewiseExpAffineDensity(
        tuple(ExpAffineSegment(s.interval, s.p, s.q + shift) for s in d.segments)
    )


def affine_transform(d: Density, scale: float, shift: float) -> Density:
    """Law of scale * X + shift, scale > 0."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    if isinstance(d, GridDensity):
        return GridDensity(scale * d.origin + shift, scale * d.step, d.values / scale)
    if isinstance(d, StepDensity):
        return StepDensity(
            tuple(Interval(scale * iv.lo + shift, scale * iv.hi + shift) for iv in d.intervals),
            d.weights,
        )
    segs = []
    for s in d.segments:
        p = s.p / scale
        q = s.q - p * shift + math.log(scale)
        segs.append(ExpAffineSegment.make(scale * s.lo + shift, scale * s.hi + shift, p, q))
    return PiecewiseExpAffineDensity(tuple(segs))


def is_log_concave(d: Density, rtol: float = 1e-9) -> bool:
    """Log-concavity check.

    Piecewise: log f continuous at knots and slopes nondecreasing.
    Step: only a single level (a uniform) is log-concave; more levels put a jump
    inside the support. Nested steps are still valid rearrangement inputs.
    Grid: discrete second differences of log f on a contiguous positive support.
    """
    if isinstance(d, StepDensity):
        return len(d.intervals) == 1
    if isinstance(d, GridDensity):
        pos = np.nonzero(d.values > 0)[0]
        if pos.size == 0 or pos[-1] - pos[0] + 1 != pos.size:
            return False
        lv = np.log(d.values[pos])
        if lv.size < 3:
            return True
        second = lv[:-2] - 2 * lv[1:-1] + lv[2:]
        return bool(np.all(second <= rtol * (1 + np.abs(lv[1:-1]))))
    for s0, s1 in zip(d.segments, d.segments[1:]):
        left, right = s0.log_value(s0.hi), s1.log_value(s1.lo)
        if abs(left - right) > rtol * max(1.0, abs(left)):
            return False
        if s1.p < s0.p - rtol * max(1.0, abs(s0.p)):
            return False
    return True


def log_concavity_kind(d: Density) -> str:
    if isinstance(d, StepDensity) and len(d.intervals) > 1:
        return "unimodal_step"
    return "exact" if is_log_concave(d) else "no"


def is_nonincreasing(d: Density, rtol: float = 1e-12) -> bool:
    if isinstance(d, GridDensity):
        return bool(np.all(np.diff(d.values) <= 0))
    pw = _as_piecewise(d)
    if any(s.p < 0 for s in pw.segments):
        return False
    for s0, s1 in zip(pw.segments, pw.segments[1:]):
        if s1.log_value(s1.lo) > s0.log_value(s0.hi) + rtol * max(1.0, abs(s0.log_value(s0.hi))):
            return False
    return True


def ball_bound_check(d: Density) -> float:
    """f(0)^2 E X^2 for a nonincreasing density, X measured from the left end of the support.

    Bounded by 2, with equality for the one-sided exponential.
    """
    if not is_nonincreasing(d):
        raise ValueError("density is not nonincreasing")
    _require_normalized(d)
    if isinstance(d, GridDensity):
        f0, start = float(d.values[0]), d.origin
    else:
        pw = _as_piecewise(d)
        f0, start = pw.segments[0].value(pw.segments[0].lo), pw.support.lo
    return f0**2 * moments(d, 2, center=start)


def stats(d: Density) -> ScalarStats:
    m0 = mass(d)
    return ScalarStats(
        mass=m0,
        mean=moments(d, 1) / m0,
        second_moment=moments(d, 2) / m0,
        variance=variance(d),
        shannon_entropy=shannon_entropy(d),
    )


# ---------------------------------------------------------------------------
# common densities
# ---------------------------------------------------------------------------


def exponential(length: float = 40.0, rate: float = 1.0) -> PiecewiseExpAffineDensity:
    """rate * exp(-rate t) on [0, length] (unnormalized truncation: tail mass e^{-rate length})."""
    return PiecewiseExpAffineDensity.single(0.0, length, rate, -math.log(rate))


def uniform(lo: float = 0.0, hi: float = 1.0) -> PiecewiseExpAffineDensity:
    return PiecewiseExpAffineDensity.single(lo, hi, 0.0, math.log(hi - lo))


def gaussian_grid(sigma: float = 1.0, mu: float = 0.0, width: float = 8.0,
                  points: int = 10_000) -> GridDensity:
    """N(mu, sigma^2) sampled on mu +- width*sigma, renormalized on the grid."""
    t = np.linspace(mu - width * sigma, mu + width * sigma, points)
    v = np.exp(-0.5 * ((t - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    g = GridDensity(float(t[0]), float(t[1] - t[0]), v)
    return normalize(g)
