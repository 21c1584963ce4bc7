"""Entropy, variance and Renyi quantities of log-concave densities, with exact
certification of the polynomial positivity behind h >= log(Var)/2 + 1."""

from .density import (
    ExpAffineSegment,
    GridDensity,
    Interval,
    MalformedDensityError,
    PiecewiseExpAffineDensity,
    StepDensity,
    entropy_power,
    entropy_variance_gap,
    exponential,
    gaussian_grid,
    is_log_concave,
    renyi_entropy,
    renyi_entropy_power,
    shannon_entropy,
    uniform,
    variance,
)
from .rearrangement import NotUnimodalError, decreasing_rearrangement, superlevel_measure
from .two_piece import TwoPieceParams, build_density, eval_G, minimize_gap

__version__ = "0.1.0"

__all__ = [
    "ExpAffineSegment", "GridDensity", "Interval", "MalformedDensityError", "NotUnimodalError",
    "PiecewiseExpAffineDensity", "StepDensity", "TwoPieceParams", "build_density",
    "decreasing_rearrangement", "entropy_power", "entropy_variance_gap", "eval_G", "exponential",
    "gaussian_grid", "is_log_concave", "minimize_gap", "renyi_entropy", "renyi_entropy_power",
    "shannon_entropy", "superlevel_measure", "uniform", "variance",
]
