"""Exact rational carriers for exponential-polynomial expressions.

Everything here works over ``fractions.Fraction``; nothing rounds.

``Poly``               dense univariate polynomial, ascending coefficients
``ExpPoly``            sum_k p_k(t) e^{k t}
``BivariateExpPoly``   sum_k Q_k(x, y) e^{alpha_k x + beta_k y}
``ExpPolySequence``    s(n) = sum_j q_j(n) beta_j^n  (+ finitely many corrections)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"exact value required, got {type(v).__name__}")


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [_frac(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, v: Number) -> "Poly":
        return cls((_frac(v),))

    @classmethod
    def monomial(cls, degree: int, v: Number = 1) -> "Poly":
        return cls((Fraction(0),) * degree + (_frac(v),))

    @classmethod
    def falling_factorial(cls, j: int) -> "Poly":
        """n (n-1) ... (n-j+1) as a polynomial in n."""
        p = cls.const(1)
        for i in range(j):
            p = p * cls((Fraction(-i), Fraction(1)))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        acc = Fraction(0) if isinstance(t, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + (c if not isinstance(acc, float) else float(c))
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(tuple(u + v for u, v in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            v = _frac(other)
            return Poly(tuple(c * v for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def shift(self, c: Number) -> "Poly":
        """p(t + c)."""
        c = _frac(c)
        out = Poly()
        lin = Poly((c, Fraction(1)))
        for coef in reversed(self.coeffs):
            out = out * lin + Poly.const(coef)
        return out

    def reflect(self) -> "Poly":
        """p(-t)."""
        return Poly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def abs_majorant(self) -> "Poly":
        """sum |c_i| t^i: dominates |p(t)| and is nondecreasing for t >= 0."""
        return Poly(tuple(abs(c) for c in self.coeffs))

    def coefficients_nonneg(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------
# ExpPoly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpPoly:
    """sum_k p_k(t) * exp(k t), exponents distinct and sorted ascending."""

    terms: tuple[tuple[Fraction, Poly], ...] = ()

    def __post_init__(self):
        merged: dict[Fraction, Poly] = {}
        for k, p in self.terms:
            k = _frac(k)
            merged[k] = merged.get(k, Poly()) + p
        object.__setattr__(
            self, "terms", tuple(sorted((k, p) for k, p in merged.items() if not p.is_zero()))
        )

    @classmethod
    def from_dict(cls, d: Mapping[Number, Poly]) -> "ExpPoly":
        return cls(tuple(d.items()))

    def as_dict(self) -> dict[Fraction, Poly]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exponents(self) -> list[Fraction]:
        return [k for k, _ in self.terms]

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.terms + other.terms)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(tuple((k, -p) for k, p in self.terms))

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def scale(self, v: Number) -> "ExpPoly":
        return ExpPoly(tuple((k, p * v) for k, p in self.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def times_exp(self, K: Number) -> "ExpPoly":
        K = _frac(K)
        return ExpPoly(tuple((k + K, p) for k, p in self.terms))

    def reflect(self) -> "ExpPoly":
        """f(-t)."""
        return ExpPoly(tuple((-k, p.reflect()) for k, p in self.terms))

    def __call__(self, t: float) -> float:
        return math.fsum(float(p(float(t))) * math.exp(float(k) * t) for k, p in self.terms)

    def scale_estimate(self, t: float) -> float:
        """sum of |terms| at t: a rounding scale for float evaluation."""
        return math.fsum(
            math.fsum(abs(float(c)) * abs(t) ** i for i, c in enumerate(p.coeffs))
            * math.exp(float(k) * t)
            for k, p in self.terms
        )

    def coefficient(self, k: Number, l: int) -> Fraction:
        """Coefficient of t^l e^{k t}."""
        p = self.as_dict().get(_frac(k))
        if p is None or l >= len(p.coeffs):
            return Fraction(0)
        return p.coeffs[l]

    def __repr__(self) -> str:
        return "ExpPoly(" + ", ".join(f"e^({k}t)*{p}" for k, p in self.terms) + ")"


# ---------------------------------------------------------------------------
# BivariateExpPoly
# ---------------------------------------------------------------------------


BiPoly = dict  # (i, j) -> Fraction, coefficient of x^i y^j


def _bipoly_clean(q: Mapping[tuple[int, int], Fraction]) -> dict:
    return {ij: c for ij, c in q.items() if c != 0}


@dataclass(frozen=True)
class BivariateExpPoly:
    """sum_k Q_k(x, y) exp(alpha_k x + beta_k y) with small integer exponents.

    Supports ``+ - *`` and integer powers so that displayed formulas can be
    transcribed directly, e.g. ``15 * E(2, 1) * (2 * X**2 + 5)``.
    """

    terms: tuple = ()  # ((alpha, beta), ((i, j), coef), ...) pairs, canonical

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], Mapping[tuple[int, int], Number]]):
        items = []
        for ab, q in d.items():
            q = _bipoly_clean({ij: _frac(c) for ij, c in q.items()})
            if q:
                items.append((tuple(ab), tuple(sorted(q.items()))))
        return cls(tuple(sorted(items)))

    def as_dict(self) -> dict:
        return {ab: dict(q) for ab, q in self.terms}

    @staticmethod
    def _lift(v) -> "BivariateExpPoly":
        if isinstance(v, BivariateExpPoly):
            return v
        return BivariateExpPoly.from_dict({(0, 0): {(0, 0): _frac(v)}})

    def __add__(self, other) -> "BivariateExpPoly":
        other = self._lift(other)
        d = self.as_dict()
        for ab, q in other.as_dict().items():
            tgt = d.setdefault(ab, {})
            for ij, c in q.items():
                tgt[ij] = tgt.get(ij, Fraction(0)) + c
        return BivariateExpPoly.from_dict(d)

    __radd__ = __add__

    def __neg__(self) -> "BivariateExpPoly":
        return BivariateExpPoly.from_dict(
            {ab: {ij: -c for ij, c in q.items()} for ab, q in self.as_dict().items()}
        )

    def __sub__(self, other) -> "BivariateExpPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "BivariateExpPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "BivariateExpPoly":
        other = self._lift(other)
        d: dict = {}
        for (a1, b1), q1 in self.terms:
            for (a2, b2), q2 in other.terms:
                tgt = d.setdefault((a1 + a2, b1 + b2), {})
                for (i1, j1), c1 in q1:
                    for (i2, j2), c2 in q2:
                        key = (i1 + i2, j1 + j2)
                        tgt[key] = tgt.get(key, Fraction(0)) + c1 * c2
        return BivariateExpPoly.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BivariateExpPoly":
        out = BivariateExpPoly._lift(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x: float, y: float) -> float:
        return math.fsum(
            math.exp(a * x + b * y) * math.fsum(float(c) * x**i * y**j for (i, j), c in q)
            for (a, b), q in self.terms
        )

    def scale_estimate(self, x: float, y: float) -> float:
        return math.fsum(
            math.exp(a * x + b * y) * math.fsum(abs(float(c) * x**i * y**j) for (i, j), c in q)
            for (a, b), q in self.terms
        )

    def max_x_degree(self, alpha: int | None = None) -> int:
        degs = [i for (a, _), q in self.terms if alpha is None or a == alpha for (i, _), _ in q]
        return max(degs, default=-1)


X = BivariateExpPoly.from_dict({(0, 0): {(1, 0): 1}})
Y = BivariateExpPoly.from_dict({(0, 0): {(0, 1): 1}})


def E(alpha: int, beta: int) -> BivariateExpPoly:
    """exp(alpha x + beta y)."""
    return BivariateExpPoly.from_dict({(alpha, beta): {(0, 0): 1}})


# ---------------------------------------------------------------------------
# ExpPolySequence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpPolySequence:
    """s(n) = sum_j q_j(n) * base_j^n + finite[n].

    Bases are positive rationals, distinct, sorted descending. ``finite`` holds
    corrections that apply at finitely many indices only.
    """

    terms: tuple[tuple[Fraction, Poly], ...] = ()
    finite: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[Fraction, Poly] = {}
        for b, q in self.terms:
            b = _frac(b)
            if b <= 0:
                raise ValueError(f"sequence bases must be positive, got {b}")
            merged[b] = merged.get(b, Poly()) + q
        fin: dict[int, Fraction] = {}
        for n, v in self.finite:
            fin[int(n)] = fin.get(int(n), Fraction(0)) + _frac(v)
        object.__setattr__(
            self,
            "terms",
            tuple(sorted(((b, q) for b, q in merged.items() if not q.is_zero()), reverse=True)),
        )
        object.__setattr__(self, "finite", tuple(sorted((n, v) for n, v in fin.items() if v != 0)))

    @classmethod
    def of(cls, terms: Mapping[Number, Poly], finite: Mapping[int, Number] | None = None):
        return cls(tuple(terms.items()), tuple((finite or {}).items()))

    def __call__(self, n: int) -> Fraction:
        acc = sum((q(Fraction(n)) * b**n for b, q in self.terms), Fraction(0))
        for m, v in self.finite:
            if m == n:
                acc += v
        return acc

    def __add__(self, other: "ExpPolySequence") -> "ExpPolySequence":
        return ExpPolySequence(self.terms + other.terms, self.finite + other.finite)

    def __neg__(self) -> "ExpPolySequence":
        return self.scale(-1)

    def __sub__(self, other: "ExpPolySequence") -> "ExpPolySequence":
        return self + (-other)

    def scale(self, v: Number) -> "ExpPolySequence":
        v = _frac(v)
        return ExpPolySequence(
            tuple((b, q * v) for b, q in self.terms), tuple((n, c * v) for n, c in self.finite)
        )

    def is_zero(self) -> bool:
        return not self.terms and not self.finite

    @property
    def last_finite_index(self) -> int:
        return max((n for n, _ in self.finite), default=-1)

    def __repr__(self) -> str:
        parts = [f"{q}*({b})^n" for b, q in self.terms]
        parts += [f"[n={n}]{v}" for n, v in self.finite]
        return "ExpPolySequence(" + " + ".join(parts) + ")"


def exp_times_poly_sequence(gamma: Number, p: Poly | Iterable[tuple[int, Fraction]]) -> ExpPolySequence:
    """Sequence n -> n! [t^n] (p(t) e^{gamma t}).

    sum_j p_j ff(n, j) gamma^{n-j}, with ff the falling factorial. For
    gamma == 0 only n = j survives, giving finite corrections j! p_j.
    """
    gamma = _frac(gamma)
    items = list(enumerate(p.coeffs)) if isinstance(p, Poly) else list(p)
    if gamma == 0:
        return ExpPolySequence(finite=tuple((j, math.factorial(j) * _frac(c)) for j, c in items))
    if gamma < 0:
        raise ValueError("negative exponent has no positive-base sequence form")
    q = Poly()
    for j, c in items:
        if c:
            q = q + Poly.falling_factorial(j) * (_frac(c) / gamma**j)
    return ExpPolySequence(((gamma, q),))
