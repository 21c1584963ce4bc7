import json
import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from oracles import derived_P, to_sympy, u, v
from oracles import x as sx
from oracles import y as sy

from lcentropy.series import (
    FAMILIES,
    ExpPoly,
    ExpPolySequence,
    Poly,
    certify_all,
    certify_exp_poly_nonneg,
    certify_family,
    certify_sequence_positive,
    closed_form_coefficients,
    closed_form_table,
    coeff_sequence,
    crude_lower_bound,
    f_n,
    family_expression,
    to_nonneg_axis,
    x_coefficient_sequences,
    x_taylor_coefficient,
)
from lcentropy.series.algebra import E, X
from lcentropy.series.families import SMALL_N, p_expression
from lcentropy.series.family import crude_minorant, sup_bound

F = Fraction
small_ints = st.integers(-20, 20)
polys = st.lists(small_ints, max_size=6).map(lambda cs: Poly(tuple(F(c) for c in cs)))


def seq(terms=None, finite=None):
    return ExpPolySequence.of({F(b): Poly(tuple(F(c) for c in cs)) for b, cs in (terms or {}).items()}, finite)


class TestPoly:
    @given(polys, polys, small_ints)
    def test_ring_ops(self, p, q, t):
        t = F(t)
        assert (p + q)(t) == p(t) + q(t)
        assert (p - q)(t) == p(t) - q(t)
        assert (p * q)(t) == p(t) * q(t)

    @given(polys, small_ints, small_ints)
    def test_shift_reflect(self, p, c, t):
        assert p.shift(c)(F(t)) == p(F(t + c))
        assert p.reflect()(F(t)) == p(F(-t))

    def test_falling_factorial(self):
        ff = Poly.falling_factorial(3)
        assert [ff(F(n)) for n in range(6)] == [math.perm(n, 3) for n in range(6)]

    def test_no_trailing_zeros(self):
        assert Poly((F(1), F(0), F(0))).degree == 0
        assert Poly(()).is_zero()


class TestExpansion:
    def test_pure_exponential(self):
        f = x_taylor_coefficient(E(1, 0), 3)
        assert f == ExpPoly(((0, Poly.const(1)),))

    @pytest.mark.parametrize("i", range(5))
    def test_families_match_sympy_derivation(self, i):
        # P_i re-derived from G with the quartic minorant and the e^{2x} multiplier
        assert sp.expand(derived_P(2)[i] - to_sympy(p_expression(i))) == 0

    def test_e_x_multiplier_does_not_give_the_families(self):
        P = derived_P(1)
        assert all(sp.expand(P[i] - to_sympy(p_expression(i))) != 0 for i in range(5))

    @pytest.mark.parametrize("family,n", [("P1", 3), ("P2", 6), ("P3", 7), ("P0", 4)])
    def test_taylor_coefficient_matches_sympy(self, family, n):
        expr = to_sympy(family_expression(family)).subs(u, sp.exp(sx)).subs(v, sp.exp(sy))
        ref = sp.expand(sp.diff(expr, sx, n).subs(sx, 0))
        got = 0
        for k, p in f_n(family, n).terms:
            for l, c in enumerate(p.coeffs):
                got += sp.Rational(c.numerator, c.denominator) * sy**l * sp.exp(k * sy)
        assert sp.simplify(ref - got) == 0

    def test_P4_low_order(self):
        F4 = family_expression("P4")
        for n in range(4):
            assert x_taylor_coefficient(F4, n).is_zero()
        a4 = x_taylor_coefficient(F4, 4)
        assert a4 == ExpPoly(((0, Poly.const(18)),))  # coefficient of x^4/4!
        assert a4.coefficient(0, 0) / math.factorial(4) == F(3, 4)  # coefficient of x^4

    @pytest.mark.parametrize("family", FAMILIES)
    def test_closed_forms_match_expansion(self, family):
        Fx = family_expression(family)
        for n in range(5, 41):
            assert closed_form_coefficients(family, n) == x_taylor_coefficient(Fx, n)

    def test_closed_form_examples(self):
        assert closed_form_table("P0", 7)["c3"] == 20
        assert closed_form_table("P0", 5)["c3"] == 20
        assert closed_form_coefficients("P0", 7).coefficient(2, 3) == 20
        with pytest.raises(ValueError):
            closed_form_table("P1", 4)
        with pytest.raises(KeyError):
            family_expression("P9")

    @pytest.mark.parametrize("family", FAMILIES)
    def test_coefficient_sequences_match_per_n(self, family):
        seqs = x_coefficient_sequences(family_expression(family))
        for n in (0, 3, 8, 17):
            f = f_n(family, n) if n >= 5 else x_taylor_coefficient(family_expression(family), n)
            for (k, l), s in seqs.items():
                assert s(n) == f.coefficient(k, l)


class TestAxisAndSequence:
    def test_to_nonneg_axis(self):
        g = to_nonneg_axis(ExpPoly(((2, Poly.const(1)),)), 2)
        assert g == ExpPoly(((0, Poly.const(1)),))
        with pytest.raises(ValueError):
            to_nonneg_axis(ExpPoly(((2, Poly.const(1)),)), 1)

    def test_axis_flips_odd_coefficients(self):
        f7 = f_n("P0", 7)
        g = to_nonneg_axis(f7, 2)
        assert set(g.exponents) == {0, 1, 2}
        for k, p in f7.terms:
            q = g.as_dict()[2 - k]
            assert all(q.coeffs[l] == (-1) ** l * c for l, c in enumerate(p.coeffs))

    def test_P1_needs_three(self):
        g = to_nonneg_axis(f_n("P1", 6), 3)
        assert min(g.exponents) >= 0

    def test_coeff_sequence_examples(self):
        s = coeff_sequence(ExpPoly(((1, Poly.const(1)),)))
        assert [s(m) for m in range(6)] == [1] * 6
        s = coeff_sequence(ExpPoly(((2, Poly.monomial(1)),)))
        assert [s(m) for m in range(7)] == [m * 2 ** (m - 1) if m else 0 for m in range(7)]
        s = coeff_sequence(ExpPoly(((1, Poly((F(1), F(-1)))),)))
        assert [s(m) for m in range(5)] == [1 - m for m in range(5)]

    def test_coeff_sequence_against_sympy(self):
        t = sp.symbols("t")
        g = ExpPoly(((0, Poly((F(1), F(-3), F(1, 2)))), (F(3, 2), Poly((F(2), F(0), F(-1))))))
        expr = 1 - 3 * t + t**2 / 2 + sp.exp(sp.Rational(3, 2) * t) * (2 - t**2)
        ser = sp.series(expr, t, 0, 9).removeO()
        s = coeff_sequence(g)
        for m in range(9):
            ref = ser.coeff(t, m) * sp.factorial(m)
            assert s(m) == F(int(sp.fraction(ref)[0]), int(sp.fraction(ref)[1]))


class TestSequenceCertificates:
    def test_dominant_base(self):
        # 3^n - n 2^n
        c = certify_sequence_positive(seq({3: [1], 2: [0, -1]}), 0)
        assert c.status == "proven"
        assert all(3**n - n * 2**n >= 0 for n in range(21))

    def test_refute_small(self):
        c = certify_sequence_positive(seq({3: [-1], 2: [1]}), 0)
        assert c.status == "refuted"
        assert c.witness_n == 1

    def test_refute_planted_late_sign_change(self):
        # 2^n (n - 30) + 1.5^n (n^2): negative somewhere before n = 30, eventually positive
        s = seq({2: [-30, 1], F(3, 2): [0, 0, 1]})
        c = certify_sequence_positive(s, 0)
        assert c.status == "refuted"
        assert s(c.witness_n) < 0

    def test_refute_eventually_negative(self):
        c = certify_sequence_positive(seq({2: [100, -1]}), 0)
        assert c.status == "refuted"
        assert c.witness_n == 101

    def test_P4_a_n(self):
        s = x_coefficient_sequences(family_expression("P4"))[(F(0), 0)]
        c = certify_sequence_positive(s, 5)
        assert c.proven
        for n in range(5, 30):
            assert s(n) == closed_form_table("P4", n)["a0"]

    @given(st.integers(1, 6), st.integers(0, 20), st.integers(1, 5))
    def test_random_dominance(self, lead, shift, deg):
        # (n + lead) 4^n - shift n^deg 3^n: proven iff all values are nonnegative
        s = seq({4: [lead, 1], 3: [0] * deg + [-shift]})
        c = certify_sequence_positive(s, 0)
        truth = all(s(n) >= 0 for n in range(400))
        assert c.status in ("proven", "refuted")
        assert (c.status == "proven") == truth
        if c.status == "refuted":
            assert s(c.witness_n) < 0

    def test_json(self):
        c = certify_sequence_positive(seq({3: [1], 2: [0, -1]}), 0)
        out = json.loads(json.dumps(c.to_json()))
        assert out["status"] == "proven" and out["threshold"] >= 0


class TestExpPolyCertificates:
    def test_trivial(self):
        assert certify_exp_poly_nonneg(ExpPoly(((1, Poly.const(1)),))).proven

    def test_y_refuted(self):
        c = certify_exp_poly_nonneg(ExpPoly(((0, Poly.monomial(1)),)))
        assert c.status == "refuted"
        assert c.refuting_y is not None and c.refuting_y < 0

    def test_nonneg_with_mixed_coefficients(self):
        # y^2 - y e^{y} >= 0 on y <= 0
        f = ExpPoly(((0, Poly((F(0), F(0), F(1)))), (1, Poly((F(0), F(-1))))))
        assert certify_exp_poly_nonneg(f).proven

    @pytest.mark.parametrize("n", range(SMALL_N["P0"] + 1))
    def test_P0_small_n(self, n):
        assert certify_exp_poly_nonneg(x_taylor_coefficient(family_expression("P0"), n)).proven


class TestCrudeBounds:
    def test_sup_bound_is_upper(self):
        for k in (F(1), F(2), F(3)):
            for l in range(5):
                exact = (l / (math.e * float(k))) ** l if l else 1.0
                assert float(sup_bound(k, l)) >= exact

    def test_drop_good_terms(self):
        # 1 + y^2 e^{y}: the non-constant term is >= 0 on y <= 0
        f = ExpPoly(((0, Poly.const(1)), (1, Poly((F(0), F(0), F(1))))))
        assert crude_lower_bound(f) == 1

    def test_unbounded_bad_term(self):
        assert crude_lower_bound(ExpPoly(((0, Poly((F(1), F(1)))),))) is None

    def test_regime_checkpoints(self):
        assert crude_minorant("P0", 10) > 0
        assert crude_minorant("P3", 14) > 0
        t = closed_form_table("P2", 7)
        assert t["a0"] - abs(t["b0"]) - abs(t["b1"]) > 0


@pytest.fixture(scope="module")
def certs():
    return certify_all()


class TestFamilies:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_proven(self, certs, family):
        c = certs[family]
        assert c.status == "proven"
        assert all(c.checkpoints.values()), c.checkpoints
        assert set(c.small_n) == set(range(SMALL_N[family] + 1))

    def test_thresholds(self, certs):
        assert {f: c.threshold for f, c in certs.items()} == {"P0": 10, "P1": 11, "P2": 13, "P3": 14, "P4": 5}

    def test_json_round_trip(self, certs):
        blob = json.dumps({f: c.to_json() for f, c in certs.items()})
        back = json.loads(blob)
        assert back["P4"]["status"] == "proven"
        assert back["P0"]["tail"]["minorant"]["status"] == "proven"

    def test_numeric_positivity(self):
        # floating spot check of the certified claim
        for i in range(5):
            Fx = p_expression(i)
            for xv in (0.1, 1.0, 3.0):
                for yv in (-0.1, -1.0, -5.0):
                    assert Fx(xv, yv) >= -1e-9 * Fx.scale_estimate(xv, yv)

    def test_nonnegative_polynomial_certified(self):
        # P-like toy family built from X: x^2 e^{x} has nonnegative Taylor coefficients
        Fx = X**2 * E(1, 0)
        for n in range(6):
            assert certify_exp_poly_nonneg(x_taylor_coefficient(Fx, n)).proven

    def test_single_family(self):
        assert certify_family("P4").proven
