"""Reference computations that share no code path with what they check.

* :func:`brute_force_weyl` rewrites words letter by letter (``PQ -> QP - iħ``)
  instead of using the closed-form product in :mod:`hybridalg.ncpoly`.
* :func:`solve_quantum_1d` evaluates the Hamiltonian with its own matrix
  power loop and diagonalizes densely.
* :func:`classical_phase_average` is the plain Riemann sum.
* :func:`classical_poisson` / :func:`classical_product` go through sympy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .ncpoly import ClassicalPolynomial, Coefficient, NCPolynomial, adjoint
from .repspace.factors import FactorRep
from .repspace.grid import Grid

__all__ = [
    "EigenResult",
    "brute_force_weyl",
    "rewrite_word",
    "solve_quantum_1d",
    "classical_phase_average",
    "classical_poisson",
    "classical_product",
]

BRUTE_FORCE_CAP = 12


# -- word rewriting ----------------------------------------------------------

@lru_cache(maxsize=None)
def rewrite_word(word: str) -> tuple:
    """Normal-order a Q/P word by repeatedly rewriting its leftmost ``PQ``.

    Returns ``((n, m, k, re, im), ...)`` with Gaussian-integer coefficients.
    """
    pos = word.find("PQ")
    if pos < 0:
        return ((word.count("Q"), word.count("P"), 0, 1, 0),)
    swapped = word[:pos] + "QP" + word[pos + 2:]
    dropped = word[:pos] + word[pos + 2:]
    acc: dict = {}
    for n, m, k, re, im in rewrite_word(swapped):
        acc[(n, m, k)] = _gadd(acc.get((n, m, k), (0, 0)), (re, im))
    for n, m, k, re, im in rewrite_word(dropped):
        # times -i
        key = (n, m, k + 1)
        acc[key] = _gadd(acc.get(key, (0, 0)), (im, -re))
    return tuple((n, m, k, re, im) for (n, m, k), (re, im) in sorted(acc.items()) if re or im)


def _gadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _interleavings(n: int, m: int):
    if n == 0 and m == 0:
        yield ""
        return
    if n:
        for rest in _interleavings(n - 1, m):
            yield "Q" + rest
    if m:
        for rest in _interleavings(n, m - 1):
            yield "P" + rest


def brute_force_weyl(n: int, m: int) -> NCPolynomial:
    """Average of the rewritten forms of every distinct arrangement of n Q's and m P's."""
    if n < 0 or m < 0:
        raise ValueError("exponents must be non-negative")
    if n + m > BRUTE_FORCE_CAP:
        raise ValueError(f"n+m = {n + m} exceeds the brute-force cap {BRUTE_FORCE_CAP}")
    acc: dict = {}
    count = 0
    for word in _interleavings(n, m):
        count += 1
        for a, b, k, re, im in rewrite_word(word):
            acc[(a, b, k)] = _gadd(acc.get((a, b, k), (0, 0)), (re, im))
    return NCPolynomial(
        {key: Coefficient(Fraction(re, count), Fraction(im, count)) for key, (re, im) in acc.items()}
    )


# -- single-space quantum eigensolver ------------------------------------------

@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray


def _matrix_of(H: NCPolynomial, Q: np.ndarray, P: np.ndarray, hbar: float) -> np.ndarray:
    out = np.zeros(Q.shape, dtype=complex)
    for (n, m, k), c in H.items():
        out += complex(c) * hbar**k * (np.linalg.matrix_power(Q, n) @ np.linalg.matrix_power(P, m))
    return out


def solve_quantum_1d(H: NCPolynomial, rep: FactorRep, k: int) -> EigenResult:
    """Lowest ``k`` eigenpairs of ``H(rep.Q, rep.P)`` by dense diagonalization.

    The Hermitian part is diagonalized; on a finite grid the normal-ordered
    evaluation of a self-adjoint symbol is Hermitian only up to the grid's
    departure from the exact commutation relation.
    """
    if adjoint(H) != H:
        raise ValueError("Hamiltonian is not self-adjoint")
    if not 1 <= k <= rep.n:
        raise ValueError(f"k must be in 1..{rep.n}, got {k}")
    M = _matrix_of(H, rep.Q, rep.P, rep.hbar)
    M = 0.5 * (M + M.conj().T)
    values, vectors = np.linalg.eigh(M)
    values, vectors = values[:k], vectors[:, :k]
    residuals = np.linalg.norm(M @ vectors - vectors * values, axis=0)
    return EigenResult(values, vectors, residuals)


# -- classical phase-space side ------------------------------------------------

def _grid_values(f: ClassicalPolynomial, gq: Grid, gp: Grid) -> np.ndarray:
    out = np.zeros((gq.n_points, gp.n_points))
    for (n, m), c in f.items():
        if not c.is_real():
            raise ValueError("classical polynomial must have real coefficients")
        out += float(c.re) * np.outer(gq.points**n, gp.points**m)
    return out


def classical_phase_average(rho, H: ClassicalPolynomial, gq: Grid, gp: Grid) -> float:
    """``Σ ρ(q_i, p_j) H(q_i, p_j) Δq Δp``; ``rho`` is a polynomial or a sample array."""
    samples = _grid_values(rho, gq, gp) if isinstance(rho, ClassicalPolynomial) else np.asarray(rho, dtype=float)
    if np.any(samples < 0):
        raise ValueError("phase-space density must be non-negative")
    cell = gq.spacing * gp.spacing
    total = float(np.sum(samples)) * cell
    if abs(total - 1) > 1e-10:
        raise ValueError(f"phase-space density integrates to {total!r}, not 1")
    return float(np.sum(samples * _grid_values(H, gq, gp)) * cell)


_q, _p = sympy.symbols("q p")


def _to_sympy(f: ClassicalPolynomial):
    return sum(
        (sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
        * _q**n
        * _p**m
        for (n, m), c in f.items()
    ) or sympy.Integer(0)


def _from_sympy(expr) -> ClassicalPolynomial:
    expr = sympy.expand(expr)
    if expr == 0:
        return ClassicalPolynomial()
    poly = sympy.Poly(expr, _q, _p)
    out = {}
    for (n, m), c in poly.terms():
        re, im = sympy.re(c), sympy.im(c)
        out[(n, m)] = Coefficient(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return ClassicalPolynomial(out)


def classical_poisson(f: ClassicalPolynomial, g: ClassicalPolynomial) -> ClassicalPolynomial:
    """``∂f/∂q ∂g/∂p - ∂f/∂p ∂g/∂q`` computed symbolically with sympy."""
    F, G = _to_sympy(f), _to_sympy(g)
    return _from_sympy(sympy.diff(F, _q) * sympy.diff(G, _p) - sympy.diff(F, _p) * sympy.diff(G, _q))


def classical_product(f: ClassicalPolynomial, g: ClassicalPolynomial) -> ClassicalPolynomial:
    return _from_sympy(_to_sympy(f) * _to_sympy(g))
