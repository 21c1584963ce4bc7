"""The reduced two-piece family and the function G whose sign decides the inequality.

The family (b normalized to 1, slope parameter a >= 1, x >= 0, y <= 0):

    g(t) = e^{-t/a} on [-a x, 0],   e^{-t} on [0, -y],   mass m = a(e^x - 1) - (e^y - 1).

``G(a, x, y) = m^2 (e^{2h(g/m) - 2} - Var(g/m))`` in the closed form used for
the proof. Replacing e^{-L} inside G by the quartic minorant gives

    15 e^{2x} G_quartic(a, x, y) = sum_{i=0..4} (a - 1)^i P_i(x, y)

as an identity (the multiplier is e^{2x}; see tests).

Functions taking ``a, x, y`` accept floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import (
    ExpAffineSegment,
    PiecewiseExpAffineDensity,
    entropy_variance_gap,
    shannon_entropy,
    variance,
)

A_MAX = 1e6
X_MAX = 500.0


@dataclass(frozen=True)
class TwoPieceParams:
    a: float
    x: float
    y: float

    def __post_init__(self):
        if not (1.0 <= self.a <= A_MAX):
            raise ValueError(f"need 1 <= a <= {A_MAX:g}, got a={self.a}")
        if not (0.0 <= self.x <= X_MAX):
            raise ValueError(f"need 0 <= x <= {X_MAX:g}, got x={self.x}")
        if not (self.y <= 0.0 and math.isfinite(self.y)):
            raise ValueError(f"need finite y <= 0, got y={self.y}")
        if self.x == 0.0 and self.y == 0.0:
            raise ValueError("degenerate support: x = y = 0")

    @property
    def mass(self) -> float:
        return float(mass(self.a, self.x, self.y))


@dataclass(frozen=True)
class ClosedFormStats:
    mass: float
    first: float  # int t g
    second: float  # int t^2 g
    neg_g_log_g: float  # -int g log g


@dataclass(frozen=True)
class GEvaluation:
    G: float
    mass: float
    L: float
    poly_lower_bound: float
    consistency: float  # m^2 (e^{2h-2} - Var) from numeric density routines


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def mass(a, x, y):
    return a * np.expm1(x) - np.expm1(y)


def _first(a, x, y):
    return a**2 * (np.exp(x) * (1 - x) - 1) - (np.exp(y) * (1 - y) - 1)


def _second(a, x, y):
    return a**3 * (np.exp(x) * (x * x - 2 * x + 2) - 2) - (np.exp(y) * (y * y - 2 * y + 2) - 2)


def _neg_g_log_g(a, x, y):
    return a * (np.exp(x) * (1 - x) - 1) - (np.exp(y) * (1 - y) - 1)


def closed_form_stats(p: TwoPieceParams) -> ClosedFormStats:
    a, x, y = p.a, p.x, p.y
    return ClosedFormStats(
        float(mass(a, x, y)), float(_first(a, x, y)), float(_second(a, x, y)),
        float(_neg_g_log_g(a, x, y)),
    )


def build_density(p: TwoPieceParams) -> PiecewiseExpAffineDensity:
    """Normalized g / m as a piecewise exp-affine density."""
    log_m = math.log(p.mass)
    segs = []
    if p.x > 0:
        segs.append(ExpAffineSegment.make(-p.a * p.x, 0.0, 1.0 / p.a, log_m))
    if p.y < 0:
        segs.append(ExpAffineSegment.make(0.0, -p.y, 1.0, log_m))
    return PiecewiseExpAffineDensity(tuple(segs))


def gap_closed_form(a, x, y):
    """h - log(Var)/2 - 1 for the normalized family member (vectorized)."""
    m = mass(a, x, y)
    mean = _first(a, x, y) / m
    var = _second(a, x, y) / m - mean**2
    h = _neg_g_log_g(a, x, y) / m + np.log(m)
    return h - 0.5 * np.log(var) - 1.0


# ---------------------------------------------------------------------------
# G, exponent, quartic minorant
# ---------------------------------------------------------------------------


def _exponent_fraction(a, x, y, m):
    return ((x - y) * np.exp(y) + x * (a - 1)) / m


def G_value(a, x, y):
    """G(a, x, y) from its defining display (vectorized)."""
    m = mass(a, x, y)
    expo = -2 * (a * np.exp(x) * x - np.exp(y) * y) / m
    return m**4 * np.exp(expo) - m * _second(a, x, y) + _first(a, x, y) ** 2


def exponent_L(p: TwoPieceParams) -> float:
    """L = 2((x - y)e^y + x(a - 1)) / m, which lies in [0, 2]."""
    m = p.mass
    if not m > 0:
        raise ValueError("degenerate mass")
    L = float(2 * _exponent_fraction(p.a, p.x, p.y, m))
    if not (-1e-12 <= L <= 2 + 1e-12):
        raise ArithmeticError(f"exponent L={L} outside [0, 2]")
    return L


def exponent_L_array(a, x, y):
    return 2 * _exponent_fraction(a, x, y, mass(a, x, y))


def quartic_minorant(L):
    """1 - L + L^2/2 - L^3/6 + 7 L^4 / 240, a lower bound for e^{-L} on [0, 2]."""
    arr = np.asarray(L, dtype=float)
    if np.any(arr < -1e-12) or np.any(arr > 2 + 1e-12):
        raise ValueError("quartic minorant is only valid on [0, 2]")
    out = 1 - arr + arr**2 / 2 - arr**3 / 6 + 7 * arr**4 / 240
    return float(out) if np.ndim(out) == 0 else out


def G_quartic(a, x, y):
    """G with e^{-L} replaced by the quartic minorant; G >= G_quartic."""
    m = mass(a, x, y)
    L = 2 * _exponent_fraction(a, x, y, m)
    low = 1 - L + L**2 / 2 - L**3 / 6 + 7 * L**4 / 240
    return m**4 * np.exp(-2 * x) * low - m * _second(a, x, y) + _first(a, x, y) ** 2


# ---------------------------------------------------------------------------
# the polynomials P_0..P_4
# ---------------------------------------------------------------------------


def _P4(x):
    e = np.exp
    return (7 * x**4 + 20 * x**3 + 30 * x**2 + 30 * x + 15
            + 15 * e(3 * x) * (x**2 - 2 * x - 2)
            + 15 * e(2 * x) * (2 * x**2 + 6 * x + 5)
            - 10 * e(x) * (2 * x**3 + 6 * x**2 + 9 * x + 6))


def _P0(x, y):
    e = np.exp
    reduced = (15 * e(2 * x + y) * (2 * x**2 + x * (6 - 4 * y) + 2 * y**2 - 6 * y + 5)
               + 15 * e(3 * x) * (x**2 - 2 * x * (y + 1) + y**2 + 2 * y - 2)
               - 10 * e(x + 2 * y) * (2 * x**3 - 6 * x**2 * (y - 1) + 3 * x * (2 * y**2 - 4 * y + 3)
                                      - 2 * y**3 + 6 * y**2 - 9 * y + 6)
               + e(3 * y) * (7 * x**4 - 4 * x**3 * (7 * y - 5) + 6 * x**2 * (7 * y**2 - 10 * y + 5)
                             + x * (-28 * y**3 + 60 * y**2 - 60 * y + 30))
               + e(3 * y) * (7 * y**4 - 20 * y**3 + 30 * y**2 - 30 * y + 15))
    return e(y) * reduced


def _P1(x, y):
    e = np.exp
    return (15 * e(2 * x + y) * (4 * x**2 - 4 * x * (y - 3) - y**2 - 8 * y + 8)
            + 60 * e(2 * (x + y)) * (x**2 + x * (3 - 2 * y) + y**2 - 3 * y + 3)
            + 15 * e(3 * x + y) * (3 * x**2 - 4 * x * (y + 2) + y**2 + 8 * y - 8)
            + 15 * e(3 * x) * x**2
            - 30 * e(x + 2 * y) * (2 * x**3 + x**2 * (6 - 4 * y) + x * (2 * y**2 - 8 * y + 9)
                                   + 2 * (y**2 - 3 * y + 3))
            - 10 * e(x + 3 * y) * (2 * x**3 - 6 * x**2 * (y - 1) + 3 * x * (2 * y**2 - 4 * y + 3)
                                   - 2 * y**3 + 6 * y**2 - 9 * y + 6)
            - 2 * e(3 * y) * (-14 * x**4 + x**3 * (42 * y - 40) - 6 * x**2 * (7 * y**2 - 15 * y + 10)
                              + 2 * x * (7 * y**3 - 30 * y**2 + 45 * y - 30))
            - 10 * e(3 * y) * (2 * y**3 - 6 * y**2 + 9 * y - 6))


def _P2(x, y):
    e = np.exp
    third = (10 * e(2 * (x + y)) * (x**2 + x * (3 - 2 * y) + y**2 - 3 * y + 3)
             + 10 * e(2 * x + y) * (4 * x**2 - 4 * x * (y - 3) - 7 * y + 10)
             + 10 * e(2 * x) * (x**2 + 3 * x + 2)
             + 5 * e(3 * x) * (3 * x**2 - 2 * x - 4)
             - 10 * e(x + 2 * y) * (2 * x**3 + x**2 * (6 - 4 * y) + x * (2 * y**2 - 8 * y + 9)
                                    + 2 * (y**2 - 3 * y + 3))
             - 10 * e(x + y) * (2 * x**3 - 2 * x**2 * (y - 3) + x * (9 - 4 * y) - 3 * y + 6)
             + 2 * e(2 * y) * (7 * x**4 + x**3 * (20 - 14 * y) + x**2 * (7 * y**2 - 30 * y + 30)
                               + 10 * x * (y**2 - 3 * y + 3) + 5 * (y**2 - 3 * y + 3))
             + 5 * (x - 4) * e(3 * x + y) * (3 * x - 2 * y + 2))
    return 3 * third


def _P3(x, y):
    e = np.exp
    return (15 * e(3 * x + y) * (x**2 - 4 * x + 2 * y - 2)
            + 30 * e(2 * x + y) * (2 * x**2 - 2 * x * (y - 3) - 3 * y + 5)
            + 30 * e(2 * x) * (2 * x**2 + 6 * x + 5)
            + 15 * e(3 * x) * (3 * x**2 - 4 * x - 6)
            - 30 * e(x + y) * (2 * x**3 - 2 * x**2 * (y - 3) + x * (9 - 4 * y) - 3 * y + 6)
            - 10 * e(x) * (2 * x**3 + 6 * x**2 + 9 * x + 6)
            + e(y) * (28 * x**4 + x**3 * (80 - 28 * y) - 60 * x**2 * (y - 2)
                      - 60 * x * (y - 2) - 30 * (y - 2)))


_P = (_P0, _P1, _P2, _P3, lambda x, y: _P4(x) + 0 * y)


def eval_P(i: int, x, y):
    """P_i(x, y) in floating point; P_4 ignores y."""
    if i not in range(5):
        raise ValueError("i must be in 0..4")
    return _P[i](x, y)


def poly_lower_bound_array(a, x, y):
    return sum((a - 1) ** i * _P[i](x, y) for i in range(5))


def poly_lower_bound(p: TwoPieceParams) -> float:
    """sum_i (a - 1)^i P_i(x, y), a lower bound for 15 e^{2x} G."""
    return float(poly_lower_bound_array(p.a, p.x, p.y))


def identity_scale(a, x, y):
    """Magnitude of the terms that cancel in 15 e^{2x} G_quartic; a rounding scale."""
    m = mass(a, x, y)
    return 15 * (np.abs(m) ** 4 + np.exp(2 * x) * (np.abs(m * _second(a, x, y)) + _first(a, x, y) ** 2))


def eval_G(p: TwoPieceParams) -> GEvaluation:
    G = float(G_value(p.a, p.x, p.y))
    if not math.isfinite(G):
        raise OverflowError(f"G overflows at {p}")
    f = build_density(p)
    m = p.mass
    h, var = shannon_entropy(f), variance(f)
    return GEvaluation(
        G=G,
        mass=m,
        L=exponent_L(p),
        poly_lower_bound=poly_lower_bound(p),
        consistency=m**2 * (math.exp(2 * h - 2) - var),
    )


# ---------------------------------------------------------------------------
# minimization over the family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    a: tuple[float, float]
    x: tuple[float, float]
    y: tuple[float, float]

    def __post_init__(self):
        for lo, hi in (self.a, self.x, self.y):
            if lo > hi:
                raise ValueError("box bounds must satisfy lo <= hi")
        if self.a[0] < 1 or self.x[0] < 0 or self.y[1] > 0:
            raise ValueError("box leaves the domain a >= 1, x >= 0, y <= 0")

    def bounds(self):
        return (self.a, self.x, self.y)


@dataclass(frozen=True)
class GapMinimum:
    params: TwoPieceParams
    gap: float
    evaluations: int
    grid_best: tuple[float, float, float]


def _safe_gap(a, x, y):
    a, x, y = np.broadcast_arrays(np.asarray(a, float), np.asarray(x, float), np.asarray(y, float))
    out = np.full(a.shape, np.inf)
    ok = ~((x == 0) & (y == 0))
    with np.errstate(all="ignore"):
        out[ok] = gap_closed_form(a[ok], x[ok], y[ok])
    return out


def axis_points(lo: float, hi: float, n: int) -> np.ndarray:
    return np.array([lo]) if lo == hi else np.linspace(lo, hi, n)


def minimize_gap(region: Box, budget: int = 100_000) -> GapMinimum:
    """Coarse grid scan, then coordinate descent with step halving. Deterministic."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    bounds = region.bounds()
    free = sum(lo < hi for lo, hi in bounds)
    per_axis = max(2, int((budget / 2) ** (1 / max(free, 1)))) if free else 1
    axes = [axis_points(lo, hi, per_axis) for lo, hi in bounds]
    A, Xg, Yg = np.meshgrid(*axes, indexing="ij")
    vals = _safe_gap(A, Xg, Yg)
    used = vals.size
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    point = [float(axes[k][idx[k]]) for k in range(3)]
    grid_best = tuple(point)
    best = float(vals[idx])
    steps = [(hi - lo) / max(per_axis - 1, 1) for lo, hi in bounds]

    while used < budget and any(s > 1e-12 for s in steps):
        improved = False
        for k in range(3):
            lo, hi = bounds[k]
            if steps[k] <= 1e-12 or lo == hi:
                continue
            for direction in (-1.0, 1.0):
                trial = list(point)
                trial[k] = min(max(point[k] + direction * steps[k], lo), hi)
                if trial[k] == point[k]:
                    continue
                v = float(_safe_gap(*trial))
                used += 1
                # ignore "improvements" at rounding level; they wander off flat optima
                if v < best - 8 * np.finfo(float).eps * max(1.0, abs(best)):
                    best, point, improved = v, trial, True
                    break
                if used >= budget:
                    break
        if not improved:
            steps = [s / 2 for s in steps]
    return GapMinimum(TwoPieceParams(*point), best, used, grid_best)


@dataclass
class SweepReport:
    shape: tuple[int, int, int]
    min_gap: float
    argmin: tuple[float, float, float]
    min_G: float
    argmin_G: tuple[float, float, float]
    L_range: tuple[float, float]
    identity_max_err: float
    refined: GapMinimum | None = None

    def to_json(self) -> dict:
        out = {
            "grid": list(self.shape),
            "min_gap": self.min_gap,
            "argmin": list(self.argmin),
            "min_G": self.min_G,
            "argmin_G": list(self.argmin_G),
            "L_range": list(self.L_range),
            "identity_max_err": self.identity_max_err,
        }
        if self.refined is not None:
            out["refined"] = {
                "argmin": [self.refined.params.a, self.refined.params.x, self.refined.params.y],
                "gap": self.refined.gap,
                "evaluations": self.refined.evaluations,
            }
        return out


def sweep(region: Box, shape: tuple[int, int, int] = (60, 60, 60),
          refine: int = 0, chunks: int = 1) -> SweepReport:
    """Evaluate gap, G, L and the polynomial identity on a full grid.

    ``chunks`` partitions the a-axis; the merge is a deterministic min-reduction.
    """
    axes = [axis_points(lo, hi, n) for (lo, hi), n in zip(region.bounds(), shape)]
    parts = np.array_split(np.arange(axes[0].size), max(1, chunks))
    best = None
    for part in parts:
        if part.size == 0:
            continue
        A, Xg, Yg = np.meshgrid(axes[0][part], axes[1], axes[2], indexing="ij")
        ok = ~((Xg == 0) & (Yg == 0))
        A, Xg, Yg = A[ok], Xg[ok], Yg[ok]
        gap = gap_closed_form(A, Xg, Yg)
        G = G_value(A, Xg, Yg)
        L = exponent_L_array(A, Xg, Yg)
        err = np.abs(15 * np.exp(2 * Xg) * G_quartic(A, Xg, Yg) - poly_lower_bound_array(A, Xg, Yg))
        rel = err / identity_scale(A, Xg, Yg)
        ig, iG = int(np.argmin(gap)), int(np.argmin(G))
        cand = (
            float(gap[ig]), (float(A[ig]), float(Xg[ig]), float(Yg[ig])),
            float(G[iG]), (float(A[iG]), float(Xg[iG]), float(Yg[iG])),
            float(L.min()), float(L.max()), float(rel.max()),
        )
        if best is None:
            best = list(cand)
        else:
            if cand[0] < best[0]:
                best[0], best[1] = cand[0], cand[1]
            if cand[2] < best[2]:
                best[2], best[3] = cand[2], cand[3]
            best[4], best[5] = min(best[4], cand[4]), max(best[5], cand[5])
            best[6] = max(best[6], cand[6])
    report = SweepReport(tuple(shape), best[0], best[1], best[2], best[3], (best[4], best[5]), best[6])
    if refine > 0:
        report.refined = minimize_gap(region, budget=refine)
    return report


def gap(p: TwoPieceParams) -> float:
    """Gap via the closed forms; agrees with the density route."""
    return float(gap_closed_form(p.a, p.x, p.y))


def gap_numeric(p: TwoPieceParams) -> float:
    return entropy_variance_gap(build_density(p))


@dataclass(frozen=True)
class IdentityCheck:
    points: int
    multiplier_power: int
    max_rel_err: float
    inequality_holds: bool  # 15 e^{kx} G >= sum (a-1)^i P_i at every point


def identity_check(points: int, rng: np.random.Generator, region: Box | None = None,
                   multiplier_power: int = 2) -> IdentityCheck:
    """Compare 15 e^{k x} G_quartic with sum (a-1)^i P_i at random points.

    ``multiplier_power`` k = 2 is the correct identity; k = 1 is kept to show
    that the smaller multiplier does not produce it.
    """
    region = region or Box((1.0, 6.0), (0.0, 5.0), (-6.0, 0.0))
    a = rng.uniform(*region.a, points)
    x = rng.uniform(*region.x, points)
    y = rng.uniform(*region.y, points)
    mult = 15 * np.exp(multiplier_power * x)
    rhs = poly_lower_bound_array(a, x, y)
    err = np.abs(mult * G_quartic(a, x, y) - rhs) / identity_scale(a, x, y)
    holds = bool(np.all(mult * G_value(a, x, y) >= rhs - 1e-9 * identity_scale(a, x, y)))
    return IdentityCheck(points, multiplier_power, float(err.max()), holds)


def sweep_rows(region: Box, shape: tuple[int, int, int]):
    """(a, x, y, gap, G, L) for every grid point, for CSV export."""
    axes = [axis_points(lo, hi, n) for (lo, hi), n in zip(region.bounds(), shape)]
    A, Xg, Yg = (v.ravel() for v in np.meshgrid(*axes, indexing="ij"))
    ok = ~((Xg == 0) & (Yg == 0))
    A, Xg, Yg = A[ok], Xg[ok], Yg[ok]
    return np.column_stack([A, Xg, Yg, gap_closed_form(A, Xg, Yg), G_value(A, Xg, Yg),
                            exponent_L_array(A, Xg, Yg)])
