"""Exact rational certification that the P_i families are nonnegative."""

from .algebra import BivariateExpPoly, ExpPoly, ExpPolySequence, Poly
from .certify import (
    Certificate,
    ExpPolyCertificate,
    certify_exp_poly_nonneg,
    certify_sequence_positive,
    coeff_sequence,
    to_nonneg_axis,
    x_coefficient_sequences,
    x_taylor_coefficient,
)
from .families import FAMILIES, closed_form_coefficients, closed_form_table, family_expression
from .family import FamilyCertificate, certify_all, certify_family, crude_lower_bound, f_n

__all__ = [
    "FAMILIES", "BivariateExpPoly", "Certificate", "ExpPoly", "ExpPolyCertificate",
    "ExpPolySequence", "FamilyCertificate", "Poly", "certify_all", "certify_exp_poly_nonneg",
    "certify_family", "certify_sequence_positive", "closed_form_coefficients",
    "closed_form_table", "coeff_sequence", "crude_lower_bound", "f_n", "family_expression",
    "to_nonneg_axis", "x_coefficient_sequences", "x_taylor_coefficient",
]
