"""Exact noncommutative polynomial algebra in q̂, p̂ with a formal ħ."""

from .algebra import (
    ENUMERATION_CAP,
    HBAR,
    IDENTITY,
    ClassicalPolynomial,
    EnumerationCapError,
    NCPolynomial,
    P,
    Q,
    WeylPolynomial,
    adjoint,
    classical_limit,
    commutator,
    divide_by_ihbar,
    eval_classical,
    from_weyl_basis,
    multiply,
    normal_order,
    partial_p,
    partial_q,
    symmetrized_poisson,
    symmetrized_product,
    to_weyl_basis,
    weyl_monomial,
)
from .coefficient import Coefficient
from .parsing import ExpressionError, format_classical, format_nc, format_weyl, parse_expression

__all__ = [
    "ENUMERATION_CAP",
    "HBAR",
    "IDENTITY",
    "ClassicalPolynomial",
    "Coefficient",
    "EnumerationCapError",
    "ExpressionError",
    "NCPolynomial",
    "P",
    "Q",
    "WeylPolynomial",
    "adjoint",
    "classical_limit",
    "commutator",
    "divide_by_ihbar",
    "eval_classical",
    "format_classical",
    "format_nc",
    "format_weyl",
    "from_weyl_basis",
    "multiply",
    "normal_order",
    "parse_expression",
    "partial_p",
    "partial_q",
    "symmetrized_poisson",
    "symmetrized_product",
    "to_weyl_basis",
    "weyl_monomial",
]
