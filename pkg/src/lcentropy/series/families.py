"""Exact data for the five polynomial families P0..P4.

Each family is stored in the normalization whose x-Taylor coefficients the
closed-form tables describe:

    P0 -> e^{-y} P_0(x, y)       (positive factor removed)
    P1 -> P_1(x, y)
    P2 -> P_2(x, y)              (three times the bracketed display)
    P3 -> P_3(x, y)
    P4 -> P_4(x)

so nonnegativity of the stored object is equivalent to nonnegativity of P_i.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import E, X, Y, BivariateExpPoly, ExpPoly, Poly

FAMILIES = ("P0", "P1", "P2", "P3", "P4")

# largest n handled by direct Taylor-coefficient certification
SMALL_N = {"P0": 9, "P1": 8, "P2": 6, "P3": 5, "P4": 4}

# first index at which the closed-form coefficient tables apply
CLOSED_FORM_MIN_N = 5


def _p4() -> BivariateExpPoly:
    return (
        7 * X**4 + 20 * X**3 + 30 * X**2 + 30 * X + 15
        + 15 * E(3, 0) * (X**2 - 2 * X - 2)
        + 15 * E(2, 0) * (2 * X**2 + 6 * X + 5)
        - 10 * E(1, 0) * (2 * X**3 + 6 * X**2 + 9 * X + 6)
    )


def _p0_reduced() -> BivariateExpPoly:
    return (
        15 * E(2, 1) * (2 * X**2 + X * (6 - 4 * Y) + 2 * Y**2 - 6 * Y + 5)
        + 15 * E(3, 0) * (X**2 - 2 * X * (Y + 1) + Y**2 + 2 * Y - 2)
        - 10 * E(1, 2) * (2 * X**3 - 6 * X**2 * (Y - 1) + 3 * X * (2 * Y**2 - 4 * Y + 3)
                          - 2 * Y**3 + 6 * Y**2 - 9 * Y + 6)
        + E(0, 3) * (7 * X**4 - 4 * X**3 * (7 * Y - 5) + 6 * X**2 * (7 * Y**2 - 10 * Y + 5)
                     + X * (-28 * Y**3 + 60 * Y**2 - 60 * Y + 30))
        + E(0, 3) * (7 * Y**4 - 20 * Y**3 + 30 * Y**2 - 30 * Y + 15)
    )


def _p1() -> BivariateExpPoly:
    return (
        15 * E(2, 1) * (4 * X**2 - 4 * X * (Y - 3) - Y**2 - 8 * Y + 8)
        + 60 * E(2, 2) * (X**2 + X * (3 - 2 * Y) + Y**2 - 3 * Y + 3)
        + 15 * E(3, 1) * (3 * X**2 - 4 * X * (Y + 2) + Y**2 + 8 * Y - 8)
        + 15 * E(3, 0) * X**2
        - 30 * E(1, 2) * (2 * X**3 + X**2 * (6 - 4 * Y) + X * (2 * Y**2 - 8 * Y + 9)
                          + 2 * (Y**2 - 3 * Y + 3))
        - 10 * E(1, 3) * (2 * X**3 - 6 * X**2 * (Y - 1) + 3 * X * (2 * Y**2 - 4 * Y + 3)
                          - 2 * Y**3 + 6 * Y**2 - 9 * Y + 6)
        - 2 * E(0, 3) * (-14 * X**4 + X**3 * (42 * Y - 40) - 6 * X**2 * (7 * Y**2 - 15 * Y + 10)
                         + 2 * X * (7 * Y**3 - 30 * Y**2 + 45 * Y - 30))
        - 10 * E(0, 3) * (2 * Y**3 - 6 * Y**2 + 9 * Y - 6)
    )


def _p2() -> BivariateExpPoly:
    third = (
        10 * E(2, 2) * (X**2 + X * (3 - 2 * Y) + Y**2 - 3 * Y + 3)
        + 10 * E(2, 1) * (4 * X**2 - 4 * X * (Y - 3) - 7 * Y + 10)
        + 10 * E(2, 0) * (X**2 + 3 * X + 2)
        + 5 * E(3, 0) * (3 * X**2 - 2 * X - 4)
        - 10 * E(1, 2) * (2 * X**3 + X**2 * (6 - 4 * Y) + X * (2 * Y**2 - 8 * Y + 9)
                          + 2 * (Y**2 - 3 * Y + 3))
        - 10 * E(1, 1) * (2 * X**3 - 2 * X**2 * (Y - 3) + X * (9 - 4 * Y) - 3 * Y + 6)
        + 2 * E(0, 2) * (7 * X**4 + X**3 * (20 - 14 * Y) + X**2 * (7 * Y**2 - 30 * Y + 30)
                         + 10 * X * (Y**2 - 3 * Y + 3) + 5 * (Y**2 - 3 * Y + 3))
        + 5 * (X - 4) * E(3, 1) * (3 * X - 2 * Y + 2)
    )
    return 3 * third


def _p3() -> BivariateExpPoly:
    return (
        15 * E(3, 1) * (X**2 - 4 * X + 2 * Y - 2)
        + 30 * E(2, 1) * (2 * X**2 - 2 * X * (Y - 3) - 3 * Y + 5)
        + 30 * E(2, 0) * (2 * X**2 + 6 * X + 5)
        + 15 * E(3, 0) * (3 * X**2 - 4 * X - 6)
        - 30 * E(1, 1) * (2 * X**3 - 2 * X**2 * (Y - 3) + X * (9 - 4 * Y) - 3 * Y + 6)
        - 10 * E(1, 0) * (2 * X**3 + 6 * X**2 + 9 * X + 6)
        + E(0, 1) * (28 * X**4 + X**3 * (80 - 28 * Y) - 60 * X**2 * (Y - 2)
                     - 60 * X * (Y - 2) - 30 * (Y - 2))
    )


_BUILDERS = {"P0": _p0_reduced, "P1": _p1, "P2": _p2, "P3": _p3, "P4": _p4}
_CACHE: dict[str, BivariateExpPoly] = {}


def family_expression(family: str) -> BivariateExpPoly:
    """The certified object for ``family`` (see module docstring)."""
    if family not in _BUILDERS:
        raise KeyError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family not in _CACHE:
        _CACHE[family] = _BUILDERS[family]()
    return _CACHE[family]


def p_expression(i: int) -> BivariateExpPoly:
    """P_i itself (P_0 carries its e^{y} factor)."""
    f = family_expression(f"P{i}")
    return E(0, 1) * f if i == 0 else f


# ---------------------------------------------------------------------------
# closed-form coefficient tables, n >= 5
# ---------------------------------------------------------------------------


def _pow(b: int, e: int) -> Fraction:
    return Fraction(b) ** e


def closed_form_table(family: str, n: int) -> dict[str, Fraction]:
    """Named coefficients a_0(n), b_1(n), ... exactly as tabulated."""
    if n < CLOSED_FORM_MIN_N:
        raise ValueError(f"closed forms hold for n >= {CLOSED_FORM_MIN_N}, got n={n}")
    p2, p3 = (lambda e: _pow(2, e)), (lambda e: _pow(3, e))
    cubic = 2 * n**3 + 7 * n + 6
    quad = 2 * n**2 + 2 * n + 3
    if family == "P4":
        return {"a0": -10 * cubic + 15 * p2(n - 1) * (n**2 + 5 * n + 10)
                + 5 * p3(n - 1) * (n - 9) * (n + 2)}
    if family == "P0":
        return {
            "a0": p3(n - 1) * (5 * n**2 - 35 * n - 90),
            "a1": p3(n) * 10 * (3 - n),
            "a2": 5 * p3(n + 1),
            "b0": 15 * p2(n - 1) * (n**2 + 5 * n + 10),
            "b1": -15 * p2(n + 1) * (n + 3),
            "b2": 15 * p2(n + 1),
            "c0": Fraction(-10 * cubic),
            "c1": Fraction(30 * quad),
            "c2": Fraction(-60 * (n + 1)),
            "c3": Fraction(20),
        }
    if family == "P1":
        return {
            "a0": 5 * p3(n - 1) * (n - 1) * n,
            "b0": 5 * p3(n) * (n**2 - 9 * n - 24) + 5 * p2(n) * (3 * n**2 + 15 * n + 24),
            "b1": -20 * p3(n) * (n - 6) - 30 * p2(n) * (n + 4),
            "b2": 15 * (p3(n) - p2(n)),
            "c0": 15 * p2(n) * (n**2 + 5 * n + 12) - 30 * cubic,
            "c1": 60 * quad - 15 * p2(n + 2) * (n + 3),
            "c2": 15 * p2(n + 2) - 60 * (n + 1),
            "d0": Fraction(-10 * cubic),
            "d1": Fraction(30 * quad),
            "d2": Fraction(-60 * (n + 1)),
            "d3": Fraction(20),
        }
    if family == "P2":
        return {
            "a0": 15 * p2(n - 1) * (n**2 + 5 * n + 8) + 5 * p3(n) * (n**2 - 3 * n - 12),
            "b0": -30 * cubic + 15 * p2(n + 1) * (n**2 + 5 * n + 10)
            + 5 * p3(n) * (n**2 - 11 * n - 24),
            "b1": -10 * p3(n) * (n - 12) - 15 * p2(n + 1) * (2 * n + 7) + 30 * quad,
            "c0": 15 * p2(n - 1) * (n**2 + 5 * n + 12) - 30 * cubic,
            "c1": 60 * quad - 15 * p2(n + 1) * (n + 3),
            "c2": 15 * p2(n + 1) - 60 * (n + 1),
        }
    if family == "P3":
        return {
            "a0": -10 * cubic + 15 * p2(n) * (n**2 + 5 * n + 10) + 5 * p3(n) * (n**2 - 5 * n - 18),
            "b0": -30 * cubic + 15 * p2(n) * (n**2 + 5 * n + 10)
            + 5 * p3(n - 1) * (n**2 - 13 * n - 18),
            "b1": 30 * quad - 15 * p2(n + 1) * (n + 3) + 10 * p3(n + 1),
        }
    raise KeyError(f"unknown family {family!r}")


# letter -> exponent of e^{k y}; digit -> power of y
_LETTER_EXP = {"a": 0, "b": 1, "c": 2, "d": 3}


def closed_form_coefficients(family: str, n: int) -> ExpPoly:
    """f_n(y) assembled from the tabulated closed forms (n >= 5)."""
    table = closed_form_table(family, n)
    by_exp: dict[int, list[Fraction]] = {}
    for name, v in table.items():
        k, l = _LETTER_EXP[name[0]], int(name[1:])
        coeffs = by_exp.setdefault(k, [])
        coeffs.extend([Fraction(0)] * (l + 1 - len(coeffs)))
        coeffs[l] += Fraction(v)
    return ExpPoly(tuple((k, Poly(tuple(c))) for k, c in by_exp.items()))
