"""Exact positivity certificates for exponential polynomials and sequences.

The chain for one coefficient function f(y), y <= 0:

    g(t) = e^{K t} f(-t)                  (to_nonneg_axis, K >= every exponent)
    s(m) = m! [t^m] g(t)                  (coeff_sequence)
    s(m) >= 0 for all m                   (certify_sequence_positive)

A nonnegative Taylor series at t = -y >= 0 gives f(y) >= 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .algebra import BivariateExpPoly, ExpPoly, ExpPolySequence, Poly, exp_times_poly_sequence

log = logging.getLogger(__name__)

Status = Literal["proven", "refuted", "inconclusive"]

# largest dominance threshold tried before giving up
MAX_THRESHOLD = 4096
# rational lower bound for e, used in sup_{t>=0} t^l e^{-k t} = (l / (e k))^l
E_LOWER = Fraction(2718, 1000)


@dataclass
class Certificate:
    status: Status
    n_min: int
    threshold: int | None = None  # N0: tail certified for n >= N0
    witness_n: int | None = None
    witness_value: Fraction | None = None
    note: str = ""

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    @property
    def exact_range(self) -> tuple[int, int] | None:
        if self.threshold is None:
            return None
        return (self.n_min, self.threshold)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "exact_range": list(self.exact_range) if self.exact_range else None,
            "threshold": self.threshold,
            "witness": None
            if self.witness_n is None
            else {"n": self.witness_n, "value": str(self.witness_value)},
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------


def x_taylor_coefficient(F: BivariateExpPoly, n: int) -> ExpPoly:
    """f_n(y) with F(x, y) = sum_n f_n(y) x^n / n!."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    by_exp: dict[Fraction, list[Fraction]] = {}
    for (alpha, beta), q in F.terms:
        for (j, l), c in q:
            if j > n:
                continue
            if alpha == 0 and j != n:
                continue
            v = c * math.perm(n, j) * Fraction(alpha) ** (n - j)
            coeffs = by_exp.setdefault(Fraction(beta), [])
            coeffs.extend([Fraction(0)] * (l + 1 - len(coeffs)))
            coeffs[l] += v
    return ExpPoly(tuple((k, Poly(tuple(c))) for k, c in by_exp.items()))


def x_coefficient_sequences(F: BivariateExpPoly) -> dict[tuple[Fraction, int], ExpPolySequence]:
    """For each (k, l): the sequence n -> [y^l e^{k y}] f_n(y), valid for all n."""
    out: dict[tuple[Fraction, int], ExpPolySequence] = {}
    for (alpha, beta), q in F.terms:
        by_l: dict[int, list[tuple[int, Fraction]]] = {}
        for (j, l), c in q:
            by_l.setdefault(l, []).append((j, c))
        for l, items in by_l.items():
            key = (Fraction(beta), l)
            seq = exp_times_poly_sequence(alpha, items)
            out[key] = out[key] + seq if key in out else seq
    return {k: v for k, v in out.items() if not v.is_zero()}


def to_nonneg_axis(f: ExpPoly, K: Fraction | int | None = None) -> ExpPoly:
    """g(t) = e^{K t} f(-t); every exponent of g is >= 0.

    K defaults to the largest exponent of f.
    """
    top = max(f.exponents, default=Fraction(0))
    K = top if K is None else Fraction(K)
    if K < top:
        raise ValueError(f"K={K} too small: f has exponent {top}")
    return f.reflect().times_exp(K)


def coeff_sequence(g: ExpPoly) -> ExpPolySequence:
    """s(m) = m! [t^m] g(t) for g with nonnegative exponents."""
    if any(k < 0 for k in g.exponents):
        raise ValueError("coeff_sequence needs nonnegative exponents")
    out = ExpPolySequence()
    for k, p in g.terms:
        out = out + exp_times_poly_sequence(k, p)
    return out


# ---------------------------------------------------------------------------
# sequence positivity
# ---------------------------------------------------------------------------


def _shift_nonneg(p: Poly, n0: int) -> bool:
    """Sufficient test for p(n) >= 0 on n >= n0: p(n0 + t) has nonneg coefficients."""
    return p.shift(n0).coefficients_nonneg()


def _tail_dominates(s: ExpPolySequence, n0: int) -> bool:
    """Check s(n) >= 0 for every n >= n0 via dominance of the leading base.

    With s(n) / b1^n = q1(n) + sum_j q_j(n) r_j^n, r_j = b_j / b1 < 1:
      * q1 nondecreasing on [n0, oo) and q1(n0) > 0
      * U_j(n) r_j^n nonincreasing on [n0, oo), U_j = |coeff| majorant of q_j
      * q1(n0) >= sum_j U_j(n0) r_j^n0
    """
    if n0 <= s.last_finite_index:
        return False
    (b1, q1), rest = s.terms[0], s.terms[1:]
    if q1(Fraction(n0)) <= 0:
        return False
    if q1.degree > 0:
        step = q1.shift(1) - q1
        if not _shift_nonneg(step, n0):
            return False
    budget = q1(Fraction(n0))
    for bj, qj in rest:
        r = bj / b1
        U = qj.abs_majorant()
        decay = U - U.shift(1) * r
        if not _shift_nonneg(decay, n0):
            return False
        budget -= U(Fraction(n0)) * r**n0
        if budget < 0:
            return False
    return True


def _scan(s: ExpPolySequence, lo: int, hi: int) -> tuple[int, Fraction, int | None]:
    """Exact values on [lo, hi): (argmin, min, first negative index or None)."""
    best_n, best_v, first_neg = lo, None, None
    for n in range(lo, hi):
        v = s(n)
        if best_v is None or v < best_v:
            best_n, best_v = n, v
        if v < 0:
            first_neg = n
            break
    return best_n, best_v if best_v is not None else Fraction(0), first_neg


def certify_sequence_positive(s: ExpPolySequence, n_min: int = 0,
                              max_threshold: int = MAX_THRESHOLD) -> Certificate:
    """Certify s(n) >= 0 for all integers n >= n_min, exactly."""
    start = max(n_min, s.last_finite_index + 1)
    if not s.terms:
        n, v, neg = _scan(s, n_min, start + 1)
        status = "refuted" if neg is not None else "proven"
        return Certificate(status, n_min, threshold=start, witness_n=neg if neg is not None else n,
                           witness_value=s(neg) if neg is not None else v)

    b1, q1 = s.terms[0]
    if q1.leading() < 0:
        # eventually negative; find the first sign change
        n, v, neg = _scan(s, n_min, max(start, n_min) + max_threshold)
        if neg is not None:
            return Certificate("refuted", n_min, witness_n=neg, witness_value=s(neg),
                               note="leading term eventually negative")
        return Certificate("inconclusive", n_min, witness_n=n, witness_value=v,
                           note="leading term eventually negative; no sign change found yet")

    n0 = max(start, 1)
    found = None
    while n0 <= max_threshold:
        if _tail_dominates(s, n0):
            found = n0
            break
        n0 = n0 + 1 if n0 < 64 else int(n0 * 1.25)

    if found is None:
        n, v, neg = _scan(s, n_min, max_threshold)
        if neg is not None:
            return Certificate("refuted", n_min, witness_n=neg, witness_value=s(neg))
        return Certificate("inconclusive", n_min, witness_n=n, witness_value=v,
                           note=f"no dominance threshold up to {max_threshold}")

    n, v, neg = _scan(s, n_min, found)
    if neg is not None:
        return Certificate("refuted", n_min, threshold=found, witness_n=neg, witness_value=s(neg))
    if found <= n_min:
        n, v = found, s(found)
    return Certificate("proven", n_min, threshold=found, witness_n=n, witness_value=v)


# ---------------------------------------------------------------------------
# exponential polynomials on y <= 0
# ---------------------------------------------------------------------------


@dataclass
class ExpPolyCertificate:
    status: Status
    K: Fraction | None
    sequence: Certificate | None
    refuting_y: float | None = None
    note: str = ""

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "K": None if self.K is None else str(self.K),
            "sequence": None if self.sequence is None else self.sequence.to_json(),
            "refuting_y": self.refuting_y,
            "note": self.note,
        }


def _search_negative(f: ExpPoly) -> float | None:
    """Look for a point y <= 0 where f is clearly negative (witness only)."""
    ys = [-(10 ** (e / 8)) for e in range(-40, 25)] + [-k / 16 for k in range(0, 16 * 40)]
    for y in ys:
        v = f(y)
        if v < -1e-9 * max(1.0, f.scale_estimate(y)):
            return y
    return None


def certify_exp_poly_nonneg(f: ExpPoly, extra_K: int = 3) -> ExpPolyCertificate:
    """Certify f(y) >= 0 for all y <= 0 via Taylor coefficients of e^{Kt} f(-t).

    Starts at K = max exponent; a failed coefficient test is retried with
    larger K (multiplying by e^t keeps nonnegative series nonnegative), and
    only a located negative value of f itself refutes.
    """
    if f.is_zero():
        return ExpPolyCertificate("proven", None, None, note="identically zero")
    K0 = max(max(f.exponents), Fraction(0))
    last = None
    for dK in range(extra_K + 1):
        K = K0 + dK
        cert = certify_sequence_positive(coeff_sequence(to_nonneg_axis(f, K)), 0)
        last = ExpPolyCertificate(cert.status, K, cert)
        if cert.proven:
            return last
    y = _search_negative(f)
    if y is not None:
        return ExpPolyCertificate("refuted", last.K, last.sequence, refuting_y=y)
    last.status = "inconclusive"
    last.note = "Taylor coefficients change sign; no negative value located"
    return last
