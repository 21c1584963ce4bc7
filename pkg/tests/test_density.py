import math

import numpy as np
import pytest
from conftest import random_log_concave, seeds
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from lcentropy.density import (
    ExpAffineSegment,
    GridDensity,
    Interval,
    MalformedDensityError,
    PiecewiseExpAffineDensity,
    StepDensity,
    affine_transform,
    ball_bound_check,
    entropy_power,
    entropy_variance_gap,
    exponential,
    gaussian_grid,
    is_log_concave,
    log_concavity_kind,
    mass,
    mean,
    mixture_variance,
    moments,
    normalize,
    renyi_entropy,
    renyi_entropy_power,
    shannon_entropy,
    stats,
    uniform,
    variance,
)

# Frozen oracle values: 30-digit mpmath quadrature of the raw formulas.
TENT = {"mass": 1.1229627393841906, "mean": -0.033069366387345594, "var": 0.31154098219892532,
        "h": 0.75575309507505037, "h2": 0.61430232001259862, "hhalf": 0.88752264837900559,
        "gap": 0.33886528775851283}
STEP = {"mean": 0.875, "var": 0.19270833333333333, "h": 0.38039566584857788,
        "h2": 0.13353139262452262, "hhalf": 0.53855293911852317, "gap": 0.20368439554035644}
EXP2 = {"mass": 0.86466471676338731, "mean": 0.6869647145006687, "var": 0.27593833903368953,
        "h": 0.54155125663180964, "h2": 0.42080571164811376, "hhalf": 0.61435752821458589}


def tent():
    # e^t on [-1, 0], e^{-2t} on [0, 2]
    return PiecewiseExpAffineDensity((
        ExpAffineSegment.make(-1, 0, -1, 0), ExpAffineSegment.make(0, 2, 2, 0),
    ))


def step_example():
    return StepDensity.from_pieces([(0, 2, 0.5), (0.5, 1, 0.5)])


class TestOracles:
    def test_tent_against_quadrature(self):
        d = tent()
        assert mass(d) == pytest.approx(TENT["mass"], rel=1e-14)
        n = normalize(d)
        assert mean(n) == pytest.approx(TENT["mean"], rel=1e-12)
        assert variance(n) == pytest.approx(TENT["var"], rel=1e-13)
        assert shannon_entropy(n) == pytest.approx(TENT["h"], rel=1e-13)
        assert renyi_entropy(n, 2) == pytest.approx(TENT["h2"], rel=1e-13)
        assert renyi_entropy(n, 0.5) == pytest.approx(TENT["hhalf"], rel=1e-13)
        assert entropy_variance_gap(n) == pytest.approx(TENT["gap"], rel=1e-12)

    def test_step_against_quadrature(self):
        d = step_example()
        assert mean(d) == pytest.approx(STEP["mean"], rel=1e-14)
        assert variance(d) == pytest.approx(STEP["var"], rel=1e-13)
        assert shannon_entropy(d) == pytest.approx(STEP["h"], rel=1e-13)
        assert renyi_entropy(d, 2) == pytest.approx(STEP["h2"], rel=1e-13)
        assert renyi_entropy(d, 0.5) == pytest.approx(STEP["hhalf"], rel=1e-13)
        assert entropy_variance_gap(d) == pytest.approx(STEP["gap"], rel=1e-12)

    def test_truncated_exponential(self):
        d = PiecewiseExpAffineDensity.single(0, 2, 1, 0)
        assert mass(d) == pytest.approx(EXP2["mass"], rel=1e-14)
        n = normalize(d)
        assert mean(n) == pytest.approx(EXP2["mean"], rel=1e-13)
        assert variance(n) == pytest.approx(EXP2["var"], rel=1e-13)
        assert shannon_entropy(n) == pytest.approx(EXP2["h"], rel=1e-13)
        assert renyi_entropy(n, 2) == pytest.approx(EXP2["h2"], rel=1e-13)
        assert renyi_entropy(n, 0.5) == pytest.approx(EXP2["hhalf"], rel=1e-13)

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    @given(seeds)
    def test_random_log_concave_against_scipy_quad(self, seed):
        d = random_log_concave(np.random.default_rng(seed))
        knots = [s.lo for s in d.segments] + [d.segments[-1].hi]
        f = lambda t: float(d(np.array([t]))[0])  # noqa: E731
        m1 = sum(integrate.quad(lambda t: t * f(t), a, b, epsabs=0, epsrel=1e-13)[0]
                 for a, b in zip(knots, knots[1:]))
        h = sum(integrate.quad(lambda t: -f(t) * math.log(f(t)), a, b, epsabs=0, epsrel=1e-13)[0]
                for a, b in zip(knots, knots[1:]))
        assert mean(d) == pytest.approx(m1, rel=1e-9, abs=1e-11)
        assert shannon_entropy(d) == pytest.approx(h, rel=1e-9, abs=1e-11)


class TestEqualityCase:
    def test_exponential_gap_zero(self):
        d = exponential()
        assert shannon_entropy(d) == pytest.approx(1.0, abs=1e-10)
        assert variance(d) == pytest.approx(1.0, abs=1e-10)
        assert abs(entropy_variance_gap(d)) <= 1e-9

    def test_renyi_of_exponential(self):
        d = exponential()
        assert renyi_entropy(d, 2) == pytest.approx(math.log(2), abs=1e-14)
        assert renyi_entropy(d, math.inf) == pytest.approx(0.0, abs=1e-14)
        assert renyi_entropy(d, 0) == pytest.approx(math.log(40), abs=1e-14)
        assert renyi_entropy_power(d, 2) == pytest.approx(4.0, rel=1e-13)
        assert entropy_power(d) == pytest.approx(math.e / (2 * math.pi), rel=1e-12)

    @pytest.mark.parametrize("rate", [0.1, 0.5, 3.0, 25.0])
    def test_gap_scale_invariant(self, rate):
        d = exponential(length=40 / rate, rate=rate)
        assert abs(entropy_variance_gap(d)) <= 1e-9

    def test_ball_bound(self):
        assert ball_bound_check(exponential()) == pytest.approx(2.0, rel=1e-12)
        # f(0)^2 E X^2 for e^{-t}/(1 - e^{-2}) on [0, 2]
        d = normalize(PiecewiseExpAffineDensity.single(0, 2, 1, 0))
        m = 1 - math.exp(-2)
        ex2 = (2 - 10 * math.exp(-2)) / m
        assert ball_bound_check(d) == pytest.approx(ex2 / m**2, rel=1e-12)
        assert ball_bound_check(d) < 2


class TestValidation:
    def test_non_nested(self):
        with pytest.raises(MalformedDensityError, match="intervals not nested"):
            StepDensity.from_pieces([(0, 2, 0.5), (1, 3, 0.5)])

    def test_weights(self):
        with pytest.raises(MalformedDensityError):
            StepDensity.from_pieces([(0, 2, 0.5), (0.5, 1, 0.4)])
        with pytest.raises(MalformedDensityError):
            StepDensity.from_pieces([(0, 2, 1.5), (0.5, 1, -0.5)])

    def test_grid_negative(self):
        with pytest.raises(MalformedDensityError):
            GridDensity(0.0, 0.1, np.array([0.1, -0.1, 0.2]))

    def test_segments_contiguous(self):
        with pytest.raises(MalformedDensityError, match="contiguous"):
            PiecewiseExpAffineDensity((ExpAffineSegment.make(0, 1, 0, 0), ExpAffineSegment.make(2, 3, 0, 0)))

    def test_bad_interval(self):
        with pytest.raises(MalformedDensityError):
            Interval(1.0, 1.0)
        with pytest.raises(MalformedDensityError):
            Interval(0.0, math.inf)

    def test_overflowing_segment(self):
        with pytest.raises(MalformedDensityError):
            ExpAffineSegment.make(0, 1, -1000, 0)

    def test_entropy_requires_normalized(self):
        with pytest.raises(ValueError, match="normalize"):
            shannon_entropy(PiecewiseExpAffineDensity.single(0, 2, 1, 0))

    def test_moment_order(self):
        with pytest.raises(ValueError):
            moments(exponential(), 7)


class TestGrid:
    def test_gaussian_gap(self):
        g = gaussian_grid()
        assert entropy_variance_gap(g) == pytest.approx(0.5 * math.log(2 * math.pi / math.e), abs=1e-6)
        assert is_log_concave(g)

    def test_valley_rejected(self):
        t = np.linspace(-1, 1, 201)
        g = normalize(GridDensity(-1.0, 0.01, 0.2 + t**2))
        assert not is_log_concave(g)

    def test_bimodal_gap_can_be_negative(self):
        # two narrow bumps far apart: large variance, small entropy
        t = np.linspace(-10, 10, 20001)
        v = np.exp(-0.5 * ((t - 9) / 0.05) ** 2) + np.exp(-0.5 * ((t + 9) / 0.05) ** 2)
        g = normalize(GridDensity(-10.0, 0.001, v))
        assert not is_log_concave(g)
        assert entropy_variance_gap(g) < 0


class TestStructure:
    def test_mixture_variance_matches_step(self):
        d = step_example()
        comps = [(w, 0.5 * (iv.lo + iv.hi), iv.length**2 / 12) for iv, w in zip(d.intervals, d.weights)]
        assert mixture_variance(comps) == pytest.approx(variance(d), rel=1e-14)

    def test_step_levels(self):
        assert step_example().levels() == pytest.approx([0.25, 1.25])
        assert log_concavity_kind(step_example()) == "unimodal_step"
        assert not is_log_concave(step_example())
        assert is_log_concave(StepDensity.from_pieces([(0, 1, 1.0)]))

    def test_stats_bundle(self):
        s = stats(uniform(0, 1))
        assert (s.mass, s.mean, s.variance, s.shannon_entropy) == pytest.approx((1, 0.5, 1 / 12, 0), abs=1e-15)

    @given(seeds, st.floats(0.1, 10), st.floats(-5, 5))
    def test_affine_covariance(self, seed, scale, shift):
        d = random_log_concave(np.random.default_rng(seed))
        e = affine_transform(d, scale, shift)
        assert mass(e) == pytest.approx(1.0, abs=1e-12)
        assert variance(e) == pytest.approx(scale**2 * variance(d), rel=1e-10)
        assert shannon_entropy(e) == pytest.approx(shannon_entropy(d) + math.log(scale), abs=1e-10)
        assert entropy_variance_gap(e) == pytest.approx(entropy_variance_gap(d), abs=1e-10)
        assert is_log_concave(e)

    @given(seeds)
    def test_gap_nonnegative_log_concave(self, seed):
        d = random_log_concave(np.random.default_rng(seed))
        assert entropy_variance_gap(d) >= -1e-9

    def test_step_gap_can_be_negative(self):
        # a nested step is not log-concave, and the inequality can fail for it
        d = StepDensity.from_pieces([(0, 10, 0.2), (0, 0.1, 0.8)])
        assert entropy_variance_gap(d) < 0
        assert not is_log_concave(d)

    @given(seeds)
    def test_renyi_monotone_in_alpha(self, seed):
        d = random_log_concave(np.random.default_rng(seed))
        hs = [renyi_entropy(d, a) for a in (0, 0.5, 1, 2, 5, math.inf)]
        assert all(a >= b - 1e-10 for a, b in zip(hs, hs[1:]))

    @given(seeds)
    def test_renyi_gap_bound(self, seed):
        # 0 <= h_q - h_p <= log q/(q-1) - log p/(p-1) for log-concave f, p >= q
        d = random_log_concave(np.random.default_rng(seed))
        assert 0 <= renyi_entropy(d, 1) - renyi_entropy(d, math.inf) <= 1 + 1e-10
        assert renyi_entropy(d, 2) - renyi_entropy(d, math.inf) <= math.log(2) + 1e-10
