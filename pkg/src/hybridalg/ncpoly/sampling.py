"""Seeded random words and polynomials for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import NCPolynomial, WeylPolynomial
from .coefficient import Coefficient

__all__ = ["random_word", "random_coefficient", "random_nc_polynomial", "random_weyl_polynomial"]


def random_word(rng: random.Random, max_length: int) -> str:
    return "".join(rng.choice("QP") for _ in range(rng.randint(0, max_length)))


def random_coefficient(rng: random.Random, complex_: bool = True) -> Coefficient:
    re = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
    im = Fraction(rng.randint(-9, 9), rng.randint(1, 6)) if complex_ and rng.random() < 0.5 else 0
    return Coefficient(re, im)


def _random_terms(rng, max_degree, max_terms, max_hbar, complex_):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        n = rng.randint(0, d)
        terms[(n, d - n, rng.randint(0, max_hbar))] = random_coefficient(rng, complex_)
    return terms


def random_nc_polynomial(
    rng: random.Random, max_degree: int, max_terms: int = 4, max_hbar: int = 1, complex_: bool = True
) -> NCPolynomial:
    return NCPolynomial(_random_terms(rng, max_degree, max_terms, max_hbar, complex_))


def random_weyl_polynomial(
    rng: random.Random, max_degree: int, max_terms: int = 4, max_hbar: int = 1, complex_: bool = True
) -> WeylPolynomial:
    return WeylPolynomial(_random_terms(rng, max_degree, max_terms, max_hbar, complex_))
