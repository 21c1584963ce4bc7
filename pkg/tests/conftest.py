import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lcentropy.density import ExpAffineSegment, PiecewiseExpAffineDensity, StepDensity, normalize

SEED = int(os.environ.get("LCENTROPY_SEED", "0") or 0)

settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_log_concave(rng, pieces=None, normalized=True):
    """Continuous piecewise log-affine density with nondecreasing slopes p."""
    k = int(rng.integers(1, 5)) if pieces is None else pieces
    lengths = rng.uniform(0.1, 2.0, k)
    slopes = np.sort(rng.uniform(-3.0, 3.0, k))
    lo = float(rng.uniform(-3, 3))
    segs, q, t = [], 0.0, lo
    for L, p in zip(lengths, slopes):
        if not segs:
            q = -p * t
        else:
            # continuity of p t + q at the knot
            prev = segs[-1]
            q = prev.p * t + prev.q - p * t
        segs.append(ExpAffineSegment.make(t, t + L, p, q))
        t += L
    d = PiecewiseExpAffineDensity(tuple(segs))
    return normalize(d) if normalized else d


def random_step(rng, levels=None):
    """Step density on strictly nested intervals."""
    k = int(rng.integers(1, 6)) if levels is None else levels
    lo, hi = float(rng.uniform(-2, 0)), float(rng.uniform(0.5, 3))
    pieces = []
    for _ in range(k):
        pieces.append((lo, hi))
        width = hi - lo
        a = float(rng.uniform(0, 0.45)) * width
        b = float(rng.uniform(0, 0.45)) * width
        lo, hi = lo + a, hi - b
    w = rng.dirichlet(np.ones(k))
    w = w / math.fsum(w)
    return StepDensity.from_pieces([(a, b, float(x)) for (a, b), x in zip(pieces, w)])


seeds = st.integers(min_value=0, max_value=2**32 - 1)
