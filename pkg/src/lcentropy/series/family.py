"""Certification of a whole family P_i(x, y) >= 0 on x >= 0, y <= 0.

With F(x, y) = sum_n f_n(y) x^n / n!, it suffices that f_n(y) >= 0 on y <= 0
for every n. Three stages:

1. n <= SMALL_N[family]: Taylor-coefficient certificate for each f_n.
2. SMALL_N < n < N_tail: exact crude lower bound of f_n, per n.
3. n >= N_tail: the crude lower bound as an exponential-polynomial sequence
   in n, certified by dominance, together with sign certificates for every
   coefficient sequence whose sign the bound relies on.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import ExpPoly, ExpPolySequence
from .certify import (
    E_LOWER,
    Certificate,
    ExpPolyCertificate,
    certify_exp_poly_nonneg,
    certify_sequence_positive,
    x_coefficient_sequences,
    x_taylor_coefficient,
)
from .families import (
    CLOSED_FORM_MIN_N,
    FAMILIES,
    SMALL_N,
    closed_form_coefficients,
    closed_form_table,
    family_expression,
)

TAIL_SEARCH = 200


def sup_bound(k: Fraction, l: int) -> Fraction:
    """Rational upper bound of sup_{y<=0} e^{k y} |y|^l = (l / (e k))^l, k > 0."""
    if l == 0:
        return Fraction(1)
    return (Fraction(l) / (E_LOWER * k)) ** l


def _good_sign(c_positive: bool, l: int) -> bool:
    # c y^l >= 0 on y <= 0
    return c_positive == (l % 2 == 0)


def crude_lower_bound(f: ExpPoly) -> Fraction | None:
    """Exact lower bound for inf_{y<=0} f(y), or None if a bad-sign term is unbounded.

    Terms c y^l e^{k y} that are nonnegative on y <= 0 are dropped; the rest
    are bounded below by -|c| sup_bound(k, l).
    """
    total = Fraction(0)
    for k, p in f.terms:
        for l, c in enumerate(p.coeffs):
            if c == 0:
                continue
            if k == 0 and l == 0:
                total += c
            elif not _good_sign(c > 0, l):
                if k <= 0:
                    return None
                total -= abs(c) * sup_bound(k, l)
    return total


def f_n(family: str, n: int) -> ExpPoly:
    """f_n(y) of ``family``: closed-form tables for n >= 5, expansion below."""
    if n >= CLOSED_FORM_MIN_N:
        return closed_form_coefficients(family, n)
    return x_taylor_coefficient(family_expression(family), n)


def crude_minorant(family: str, n: int) -> Fraction | None:
    return crude_lower_bound(f_n(family, n))


@dataclass
class TailCertificate:
    threshold: int
    minorant: Certificate
    signs: dict[str, tuple[int, Certificate]]

    @property
    def proven(self) -> bool:
        return self.minorant.proven and all(c.proven for _, c in self.signs.values())

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "minorant": self.minorant.to_json(),
            "signs": {k: {"sign": s, "certificate": c.to_json()} for k, (s, c) in self.signs.items()},
        }


def minorant_sequence(
    seqs: dict[tuple[Fraction, int], ExpPolySequence], n0: int
) -> tuple[ExpPolySequence | None, dict[tuple[Fraction, int], int]]:
    """Crude lower bound as a sequence in n, with signs frozen at n0."""
    total = ExpPolySequence()
    signs: dict[tuple[Fraction, int], int] = {}
    for (k, l), seq in sorted(seqs.items()):
        if k == 0 and l == 0:
            total = total + seq
            continue
        sigma = 1 if seq(n0) >= 0 else -1
        signs[(k, l)] = sigma
        if not _good_sign(sigma > 0, l):
            if k <= 0:
                return None, signs
            total = total + seq.scale(-sigma * sup_bound(k, l))
    return total, signs


def certify_tail(family: str, n0: int) -> TailCertificate | None:
    seqs = x_coefficient_sequences(family_expression(family))
    M, signs = minorant_sequence(seqs, n0)
    if M is None:
        return None
    sign_certs: dict[str, tuple[int, Certificate]] = {}
    for (k, l), sigma in signs.items():
        c = certify_sequence_positive(seqs[(k, l)].scale(sigma), n0)
        sign_certs[f"y^{l} e^({k}y)"] = (sigma, c)
        if not c.proven:
            return TailCertificate(n0, Certificate("inconclusive", n0, note="sign change"), sign_certs)
    return TailCertificate(n0, certify_sequence_positive(M, n0), sign_certs)


@dataclass
class FamilyCertificate:
    family: str
    small_n: dict[int, ExpPolyCertificate] = field(default_factory=dict)
    minorant_checks: dict[int, Fraction | None] = field(default_factory=dict)
    fallback: dict[int, ExpPolyCertificate] = field(default_factory=dict)
    tail: TailCertificate | None = None
    checkpoints: dict[str, bool] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if any(c.status == "refuted" for c in self.small_n.values()):
            return "refuted"
        stage1 = all(c.proven for c in self.small_n.values())
        stage2 = all(
            (lb is not None and lb >= 0) or (n in self.fallback and self.fallback[n].proven)
            for n, lb in self.minorant_checks.items()
        )
        stage3 = self.tail is not None and self.tail.proven
        return "proven" if stage1 and stage2 and stage3 else "inconclusive"

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    @property
    def threshold(self) -> int | None:
        return None if self.tail is None else self.tail.threshold

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "status": self.status,
            "threshold": self.threshold,
            "small_n": {str(n): c.to_json() for n, c in self.small_n.items()},
            "minorant_checks": {
                str(n): None if v is None else str(v) for n, v in self.minorant_checks.items()
            },
            "fallback": {str(n): c.to_json() for n, c in self.fallback.items()},
            "tail": None if self.tail is None else self.tail.to_json(),
            "checkpoints": self.checkpoints,
            "seconds": round(self.seconds, 3),
        }


def certify_family(family: str, checkpoint_max_n: int = 60) -> FamilyCertificate:
    t0 = time.perf_counter()
    F = family_expression(family)
    small = SMALL_N[family]
    out = FamilyCertificate(family)

    for n in range(small + 1):
        out.small_n[n] = certify_exp_poly_nonneg(x_taylor_coefficient(F, n))

    for n0 in range(small + 1, small + 1 + TAIL_SEARCH):
        tail = certify_tail(family, n0)
        if tail is not None and tail.proven:
            out.tail = tail
            break
    hi = out.tail.threshold if out.tail else small + 1 + TAIL_SEARCH

    for n in range(small + 1, hi):
        lb = crude_minorant(family, n)
        out.minorant_checks[n] = lb
        if lb is None or lb < 0:
            out.fallback[n] = certify_exp_poly_nonneg(x_taylor_coefficient(F, n))

    out.checkpoints = regime_checkpoints(family, checkpoint_max_n)
    out.seconds = time.perf_counter() - t0
    return out


def certify_all(families=FAMILIES) -> dict[str, FamilyCertificate]:
    return {fam: certify_family(fam) for fam in families}


# ---------------------------------------------------------------------------
# the classical case split by n regime, recomputed exactly
# ---------------------------------------------------------------------------


def _all(pred, ns) -> bool:
    return all(pred(n) for n in ns)


def regime_checkpoints(family: str, n_max: int = 60) -> dict[str, bool]:
    F = family_expression(family)
    T = lambda n: closed_form_table(family, n)  # noqa: E731
    ns = range(CLOSED_FORM_MIN_N, n_max + 1)
    cp: dict[str, bool] = {
        "closed_forms_match_expansion": _all(
            lambda n: closed_form_coefficients(family, n) == x_taylor_coefficient(F, n), ns
        )
    }
    if family == "P4":
        cp["a0..a3 == 0"] = all(x_taylor_coefficient(F, n).is_zero() for n in range(4))
        a4 = x_taylor_coefficient(F, 4)
        cp["a4 == 18 (x^n/n! normalization)"] = a4 == ExpPoly(((0, _const(18)),))
        cp["[x^4] P4 == 3/4"] = a4.coefficient(0, 0) / 24 == Fraction(3, 4)
        cp["a_n >= 0 for n >= 5"] = _all(lambda n: T(n)["a0"] >= 0, ns)
    elif family == "P0":
        cp["a1 <= 0, a2, b0, b2 > 0, b1 < 0"] = _all(
            lambda n: T(n)["a1"] <= 0 and T(n)["a2"] > 0 and T(n)["b0"] > 0
            and T(n)["b2"] > 0 and T(n)["b1"] < 0, ns)
        cp["a0+c0-c1+c2-c3 > 0 for n >= 10"] = _all(
            lambda n: (lambda t: t["a0"] + t["c0"] - t["c1"] + t["c2"] - t["c3"] > 0)(T(n)),
            range(10, n_max + 1))
        cp["crude bound constants <= 1"] = all(sup_bound(Fraction(2), l) <= 1 for l in range(4))
    elif family == "P1":
        cp["a0,b2,c0,c2,d1,d3 > 0; b1,c1,d0,d2 < 0"] = _all(
            lambda n: all(T(n)[k] > 0 for k in ("a0", "b2", "c0", "c2", "d1", "d3"))
            and all(T(n)[k] < 0 for k in ("b1", "c1", "d0", "d2")), ns)
        cp["b0 > 0 iff n >= 11"] = _all(lambda n: (T(n)["b0"] > 0) == (n >= 11), ns)
        cp["a0+d0-d1+d2-d3 > 0 for n >= 11"] = _all(
            lambda n: (lambda t: t["a0"] + t["d0"] - t["d1"] + t["d2"] - t["d3"] > 0)(T(n)),
            range(11, n_max + 1))
        cp["a0+b0+d0-d1+d2-d3 > 0 for 9 <= n <= 11"] = _all(
            lambda n: (lambda t: t["a0"] + t["b0"] + t["d0"] - t["d1"] + t["d2"] - t["d3"] > 0)(T(n)),
            range(9, 12))
    elif family == "P2":
        cp["a0,c0,c2 > 0; c1 < 0"] = _all(
            lambda n: T(n)["a0"] > 0 and T(n)["c0"] > 0 and T(n)["c2"] > 0 and T(n)["c1"] < 0, ns)
        cp["b0 > 0 iff n >= 13"] = _all(lambda n: (T(n)["b0"] > 0) == (n >= 13), ns)
        cp["b1 < 0 iff n >= 11"] = _all(lambda n: (T(n)["b1"] < 0) == (n >= 11), ns)
        cp["a0-b1 > 0 for n >= 13"] = _all(lambda n: T(n)["a0"] - T(n)["b1"] > 0,
                                           range(13, n_max + 1))
        cp["a0-|b0|-|b1| > 0 for 7 <= n <= 12"] = _all(
            lambda n: T(n)["a0"] - abs(T(n)["b0"]) - abs(T(n)["b1"]) > 0, range(7, 13))
    elif family == "P3":
        cp["a0, b1 > 0"] = _all(lambda n: T(n)["a0"] > 0 and T(n)["b1"] > 0, ns)
        cp["b0 > 0 iff n >= 14"] = _all(lambda n: (T(n)["b0"] > 0) == (n >= 14), ns)
        cp["a0-b1 > 0 for n >= 14"] = _all(lambda n: T(n)["a0"] - T(n)["b1"] > 0,
                                           range(14, n_max + 1))
        cp["a0-|b0|-|b1| > 0 for 6 <= n <= 13"] = _all(
            lambda n: T(n)["a0"] - abs(T(n)["b0"]) - abs(T(n)["b1"]) > 0, range(6, 14))
    return cp


def _const(v):
    from .algebra import Poly

    return Poly.const(v)
