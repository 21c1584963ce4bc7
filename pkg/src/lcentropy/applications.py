"""Consequences of the entropy-variance inequality as computable quantities.

Capacity bounds under additive noise, relative entropy to Gaussianity,
Renyi entropy power constants, a grid-convolution EPI experiment and the
alpha* root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .density import (
    Density,
    GridDensity,
    _as_piecewise,
    entropy_power,
    is_log_concave,
    mass,
    renyi_entropy_power,
    shannon_entropy,
    variance,
)

# 1/2 log(2 pi / e): the largest relative entropy to Gaussianity of a log-concave law
HALF_LOG_2PI_OVER_E = 0.5 * math.log(2 * math.pi / math.e)
CONVOLUTION_MASS_TOL = 1e-6


def log_ratio(t: float) -> float:
    """log t / (t - 1), continuous at t = 1 (value 1) and at infinity (value 0)."""
    if not t > 0:
        raise ValueError("t must be positive")
    if math.isinf(t):
        return 0.0
    if abs(t - 1) < 1e-8:
        u = t - 1
        return 1 - u / 2 + u * u / 3
    return math.log(t) / (t - 1)


def corollary_constants(alpha: float, p: float, q: float) -> tuple[float, float]:
    """(log a / (a - 1), log q / (q - 1) - log p / (p - 1)).

    The first shifts the Renyi lower bound h_a >= log(Var)/2 + shift; the second
    bounds h_q - h_p from above for log-concave laws, p >= q > 0.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if not (p >= q > 0):
        raise ValueError("need p >= q > 0")
    return log_ratio(alpha), log_ratio(q) - log_ratio(p)


def relative_entropy_to_gaussian(d: Density) -> float:
    """D = h(Gaussian with the same variance) - h(d) >= 0."""
    var = variance(d)
    if not var > 0:
        raise ValueError("variance must be positive")
    return 0.5 * math.log(2 * math.pi * math.e * var) - shannon_entropy(d)


@dataclass(frozen=True)
class CapacityBounds:
    power: float
    gaussian_capacity: float
    upper: float
    relative_entropy: float

    def __post_init__(self):
        if abs(self.upper - self.gaussian_capacity - self.relative_entropy) > 1e-12 * max(1.0, self.upper):
            raise ValueError("upper must equal gaussian_capacity + relative_entropy")

    def to_json(self) -> dict:
        return {
            "power": self.power,
            "gaussian_capacity": self.gaussian_capacity,
            "upper": self.upper,
            "relative_entropy": self.relative_entropy,
        }


def capacity_bounds(noise: Density, power: float) -> CapacityBounds:
    """C_P(Z) <= C_P(N) <= C_P(Z) + D(N), Z Gaussian with Var(Z) = Var(N)."""
    if not power > 0:
        raise ValueError("power must be positive")
    var = variance(noise)
    if not var > 0:
        raise ValueError("degenerate noise: zero variance")
    cz = 0.5 * math.log1p(power / var)
    D = relative_entropy_to_gaussian(noise)
    if is_log_concave(noise) and D > HALF_LOG_2PI_OVER_E + 1e-9:
        raise ArithmeticError(f"log-concave noise with D = {D} above 1/2 log(2 pi / e)")
    return CapacityBounds(power, cz, cz + D, D)


@dataclass(frozen=True)
class EpiConstants:
    alpha: float
    C_minus: float
    C_plus: float

    @property
    def ratio(self) -> float:
        return self.C_plus / self.C_minus

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "C_minus": self.C_minus, "C_plus": self.C_plus, "ratio": self.ratio}


def log_beta(x: float, y: float) -> float:
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def epi_constants(alpha: float) -> EpiConstants:
    """C_-(a) Var <= N_a <= C_+(a) Var for log-concave laws, a > 1."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if math.isinf(alpha):
        # limits: C_- -> 1, C_+ -> 3 (2/3)^0 B(1/2, 1)^2 = 12
        return EpiConstants(alpha, 1.0, 12.0)
    c_minus = math.exp(2 * math.log(alpha) / (alpha - 1))
    log_c_plus = (
        math.log((3 * alpha - 1) / (alpha - 1))
        + (2 / (1 - alpha)) * math.log(2 * alpha / (3 * alpha - 1))
        + 2 * log_beta(0.5, alpha / (alpha - 1))
    )
    return EpiConstants(alpha, c_minus, math.exp(log_c_plus))


def renyi_power_sandwich_check(d: Density, alpha: float) -> tuple[float, float, float]:
    """(N_a(d), C_-(a) Var(d), C_+(a) Var(d)); the left bound needs log-concavity."""
    if not is_log_concave(d):
        raise ValueError("density is not log-concave")
    c = epi_constants(alpha)
    var = variance(d)
    return renyi_entropy_power(d, alpha), c.C_minus * var, c.C_plus * var


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------


def _support(d: Density) -> tuple[float, float]:
    if isinstance(d, GridDensity):
        return float(d.grid[0]), float(d.grid[-1])
    pw = _as_piecewise(d)
    return pw.support.lo, pw.support.hi


def cell_masses(d: Density, origin: float, step: float, cells: int) -> np.ndarray:
    """Mass of d in [origin + i step, origin + (i+1) step) for i < cells."""
    edges = origin + step * np.arange(cells + 1)
    if isinstance(d, GridDensity):
        # exact for the piecewise-linear interpolant
        t = np.union1d(edges, d.grid[(d.grid > edges[0]) & (d.grid < edges[-1])])
        v = np.interp(t, d.grid, d.values, left=0.0, right=0.0)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(t))])
        return np.diff(np.interp(edges, t, cum))
    pw = _as_piecewise(d)
    out = np.zeros(cells)
    for s in pw.segments:
        a = np.clip(edges[:-1], s.lo, s.hi)
        b = np.clip(edges[1:], s.lo, s.hi)
        w = b - a
        if s.p == 0:
            out += np.exp(-s.q) * w
        else:
            # anchor at the larger endpoint value to avoid overflow
            top = np.where(s.p > 0, a, b)
            out += np.exp(-(s.p * top + s.q)) * (-np.expm1(-abs(s.p) * w)) / abs(s.p)
    return out


def convolve(d1: Density, d2: Density, resolution: int = 4096) -> GridDensity:
    """Density of X + Y, X ~ d1, Y ~ d2 independent, on a ``resolution``-point grid.

    Each law is replaced by its cell masses (uniform within a cell); the sum of
    two cell-uniform laws is piecewise linear with knots on the grid, so the
    returned grid values are exact for that approximation.
    """
    if resolution < 8:
        raise ValueError("resolution too coarse")
    (lo1, hi1), (lo2, hi2) = _support(d1), _support(d2)
    if not all(map(math.isfinite, (lo1, hi1, lo2, hi2))):
        raise ValueError("convolution needs compact supports")
    step = ((hi1 - lo1) + (hi2 - lo2)) / (resolution - 2)
    n1 = max(1, math.ceil((hi1 - lo1) / step - 1e-9))
    n2 = max(1, math.ceil((hi2 - lo2) / step - 1e-9))
    w1, w2 = cell_masses(d1, lo1, step, n1), cell_masses(d2, lo2, step, n2)
    m1, m2 = mass(d1), mass(d2)
    for w, m in ((w1, m1), (w2, m2)):
        if abs(w.sum() - m) > CONVOLUTION_MASS_TOL:
            raise ValueError(f"resolution too coarse: cell mass error {abs(w.sum() - m):.3g}")
    w = np.convolve(w1 / w1.sum(), w2 / w2.sum())
    values = np.concatenate([[0.0], w, [0.0]]) / step
    return GridDensity(lo1 + lo2, step, values)


@dataclass(frozen=True)
class EpiCheck:
    n_sum: float
    n_x: float
    n_y: float

    @property
    def lower(self) -> float:
        return self.n_x + self.n_y

    @property
    def upper(self) -> float:
        return 2 * math.pi / math.e * (self.n_x + self.n_y)

    @property
    def holds(self) -> bool:
        return self.lower <= self.n_sum <= self.upper

    def to_json(self) -> dict:
        return {"N_sum": self.n_sum, "N_x": self.n_x, "N_y": self.n_y,
                "lower": self.lower, "upper": self.upper, "holds": self.holds}


def reverse_epi_check(d1: Density, d2: Density, resolution: int = 4096) -> EpiCheck:
    """N(X) + N(Y) <= N(X + Y) <= (2 pi / e)(N(X) + N(Y))."""
    conv = convolve(d1, d2, resolution)
    return EpiCheck(entropy_power(conv), entropy_power(d1), entropy_power(d2))


def alpha_star(tol: float = 1e-12) -> float:
    """Root of log a / (a - 1) = log(6) / 2 on (1, 2]."""
    target = 0.5 * math.log(6)
    return brentq(lambda t: log_ratio(t) - target, 1.0, 2.0, xtol=tol, rtol=4 * np.finfo(float).eps)


__all__ = [
    "HALF_LOG_2PI_OVER_E", "CapacityBounds", "EpiCheck", "EpiConstants",
    "alpha_star", "capacity_bounds", "cell_masses", "convolve", "corollary_constants",
    "epi_constants", "log_beta", "log_ratio", "relative_entropy_to_gaussian",
    "renyi_power_sandwich_check", "reverse_epi_check",
]
