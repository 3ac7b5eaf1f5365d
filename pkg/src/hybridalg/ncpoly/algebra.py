"""Polynomials in q̂, p̂ modulo [q̂, p̂] = iħ, kept exact.

Three term-map types live here:

* :class:`NCPolynomial` -- normal-ordered form, key ``(n, m, k)`` meaning
  ``c * hbar**k * q**n p**m`` with every q̂ to the left of every p̂.
* :class:`WeylPolynomial` -- the same algebra element written over the
  symmetrized monomials ``W(n, m) = q**n ∘ p**m``.
* :class:`ClassicalPolynomial` -- commuting ``c * q**n * p**m``.

ħ is a formal grading symbol throughout; nothing here touches floats except
:func:`eval_classical`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache, reduce
from math import comb, factorial
from typing import Iterable, Mapping

from .coefficient import ONE, ZERO, Coefficient, I

__all__ = [
    "ClassicalPolynomial",
    "EnumerationCapError",
    "NCPolynomial",
    "WeylPolynomial",
    "ENUMERATION_CAP",
    "Q",
    "P",
    "HBAR",
    "IDENTITY",
    "adjoint",
    "classical_limit",
    "commutator",
    "divide_by_ihbar",
    "eval_classical",
    "from_weyl_basis",
    "multiply",
    "normal_order",
    "partial_p",
    "partial_q",
    "symmetrized_poisson",
    "symmetrized_product",
    "to_weyl_basis",
    "weyl_monomial",
]

ENUMERATION_CAP = 12

# (-i)**j for j mod 4
_MINUS_I_POWERS = (ONE, -I, Coefficient(-1), I)


class EnumerationCapError(ValueError):
    """Raised when interleaving enumeration would exceed the configured cap."""


def _accumulate(pairs: Iterable[tuple[tuple, Coefficient]]) -> dict:
    out: dict = {}
    for key, c in pairs:
        out[key] = out.get(key, ZERO) + c
    return {key: c for key, c in out.items() if c}


class _TermMap:
    """Immutable sparse map from exponent tuples to nonzero coefficients."""

    __slots__ = ("_terms", "_hash")
    _arity = 3

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != self._arity or min(key) < 0:
                raise ValueError(f"bad exponent key {key} for {type(self).__name__}")
            c = Coefficient.coerce(c)
            if c:
                clean[key] = clean.get(key, ZERO) + c
        object.__setattr__(self, "_terms", {k: v for k, v in sorted(clean.items()) if v})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _from_clean(cls, terms: dict):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", dict(sorted(terms.items())))
        object.__setattr__(obj, "_hash", None)
        return obj

    @property
    def terms(self) -> dict:
        """Copy of the term map, lexicographically ordered by key."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, *key) -> Coefficient:
        return self._terms.get(tuple(key), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((type(self).__name__, frozenset(self._terms.items()))))
        return self._hash

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._from_clean(_accumulate(itertools.chain(self._terms.items(), other._terms.items())))

    def __neg__(self):
        return self._from_clean({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = Coefficient.coerce(c)
        if not c:
            return self._from_clean({})
        return self._from_clean({k: v * c for k, v in self._terms.items()})

    def __truediv__(self, c):
        return self.scale(ONE / Coefficient.coerce(c))

    def degree(self) -> int:
        """Total degree in the operator variables (ħ not counted); -1 for zero."""
        return max((k[0] + k[1] for k in self._terms), default=-1)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c!s}" for k, c in self._terms.items())
        return f"{type(self).__name__}({{{body}}})"


class NCPolynomial(_TermMap):
    """Normal-ordered polynomial in q̂, p̂, ħ.  ``*`` is the operator product."""

    __slots__ = ()

    @classmethod
    def constant(cls, c) -> NCPolynomial:
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, n: int, m: int, k: int = 0, c=1) -> NCPolynomial:
        return cls({(n, m, k): c})

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            return multiply(self, other)
        if isinstance(other, _TermMap):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int) -> NCPolynomial:
        if e < 0:
            raise ValueError("negative power")
        return reduce(multiply, [self] * e, IDENTITY)

    def is_self_adjoint(self) -> bool:
        return adjoint(self) == self

    def __str__(self) -> str:
        from .parsing import format_nc

        return format_nc(self)


class WeylPolynomial(_TermMap):
    """Polynomial over the basis ``hbar**k * W(n, m)``.  ``@`` is the ∘-product."""

    __slots__ = ()

    @classmethod
    def monomial(cls, n: int, m: int, k: int = 0, c=1) -> WeylPolynomial:
        return cls({(n, m, k): c})

    def __matmul__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        return symmetrized_product(self, other)

    def __mul__(self, other):
        if isinstance(other, _TermMap):
            return NotImplemented
        return self.scale(other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        from .parsing import format_weyl

        return format_weyl(self)


class ClassicalPolynomial(_TermMap):
    """Commuting polynomial ``sum c * q**n * p**m``."""

    __slots__ = ()
    _arity = 2

    def __mul__(self, other):
        if isinstance(other, ClassicalPolynomial):
            return self._from_clean(
                _accumulate(
                    ((a + c, b + d), x * y)
                    for (a, b), x in self._terms.items()
                    for (c, d), y in other._terms.items()
                )
            )
        if isinstance(other, _TermMap):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def degree(self) -> int:
        return max((n + m for n, m in self._terms), default=-1)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def __str__(self) -> str:
        from .parsing import format_classical

        return format_classical(self)


IDENTITY = NCPolynomial.constant(1)
Q = NCPolynomial.monomial(1, 0)
P = NCPolynomial.monomial(0, 1)
HBAR = NCPolynomial.monomial(0, 0, 1)


# -- operator product ------------------------------------------------------

@lru_cache(maxsize=4096)
def _swap_expansion(b: int, c: int) -> tuple:
    """p**b q**c as ((j, coeff), ...) meaning coeff * hbar**j * q**(c-j) p**(b-j)."""
    return tuple(
        (j, _MINUS_I_POWERS[j % 4] * (comb(b, j) * comb(c, j) * factorial(j)))
        for j in range(min(b, c) + 1)
    )


def multiply(f: NCPolynomial, g: NCPolynomial) -> NCPolynomial:
    """Operator product ``f·g`` returned in normal order."""

    def gen():
        for (a, b, k1), x in f.items():
            for (c, d, k2), y in g.items():
                xy = x * y
                for j, s in _swap_expansion(b, c):
                    yield (a + c - j, b + d - j, k1 + k2 + j), xy * s

    return NCPolynomial._from_clean(_accumulate(gen()))


def normal_order(word: str | Iterable[str]) -> NCPolynomial:
    """Normal-ordered form of a product of letters ``'Q'``/``'P'``.

    The empty word is the identity.
    """
    letters = []
    for ch in word:
        ch = ch.upper()
        if ch not in ("Q", "P"):
            raise ValueError(f"word letters must be Q or P, got {ch!r}")
        letters.append(Q if ch == "Q" else P)
    return reduce(multiply, letters, IDENTITY)


def commutator(f: NCPolynomial, g: NCPolynomial) -> NCPolynomial:
    return multiply(f, g) - multiply(g, f)


def adjoint(f: NCPolynomial) -> NCPolynomial:
    """Hermitian adjoint; q̂, p̂ and ħ are self-adjoint, products reverse."""
    out = NCPolynomial()
    for (n, m, k), c in f.items():
        reversed_ = multiply(NCPolynomial.monomial(0, m), NCPolynomial.monomial(n, 0))
        out = out + _shift_hbar(reversed_, k).scale(c.conjugate())
    return out


def _shift_hbar(f: _TermMap, k: int):
    if k == 0:
        return f
    return type(f)._from_clean({(n, m, j + k): c for (n, m, j), c in f.items()})


def divide_by_ihbar(f: NCPolynomial) -> NCPolynomial:
    """Formal ``f / (i ħ)``; every term must carry at least one power of ħ."""
    out = {}
    for (n, m, k), c in f.items():
        if k == 0:
            raise ValueError(f"term {(n, m, k)} is not divisible by hbar")
        out[(n, m, k - 1)] = c / I
    return NCPolynomial._from_clean(out)


# -- Weyl monomials --------------------------------------------------------

def _weyl_enumerate(n: int, m: int, cap: int) -> NCPolynomial:
    if n + m > cap:
        raise EnumerationCapError(
            f"n+m = {n + m} exceeds enumeration cap {cap}; use the recursive path"
        )
    total = NCPolynomial()
    count = 0
    for q_positions in itertools.combinations(range(n + m), n):
        word = ["P"] * (n + m)
        for pos in q_positions:
            word[pos] = "Q"
        total = total + normal_order(word)
        count += 1
    return total / count


@lru_cache(maxsize=None)
def _weyl_recursive(n: int, m: int) -> NCPolynomial:
    # symmetrizing with one more q̂: W(n+1, m) = (q̂ W + W q̂) / 2
    if n == 0:
        return NCPolynomial.monomial(0, m)
    w = _weyl_recursive(n - 1, m)
    return (multiply(Q, w) + multiply(w, Q)) / 2


def weyl_monomial(n: int, m: int, method: str = "recursive", cap: int = ENUMERATION_CAP) -> NCPolynomial:
    """``q**n ∘ p**m`` in normal order.

    ``method="enumerate"`` averages the normal-ordered forms of all
    ``C(n+m, n)`` distinct interleavings of the letters, refusing when
    ``n + m > cap``.  ``method="recursive"`` builds the same element by
    repeated symmetrization with q̂ and has no cap.
    """
    if n < 0 or m < 0:
        raise ValueError("exponents must be non-negative")
    if method == "enumerate":
        return _weyl_enumerate(n, m, cap)
    if method == "recursive":
        return _weyl_recursive(n, m)
    raise ValueError(f"unknown method {method!r}")


def from_weyl_basis(w: WeylPolynomial) -> NCPolynomial:
    out = NCPolynomial()
    for (n, m, k), c in w.items():
        out = out + _shift_hbar(weyl_monomial(n, m), k).scale(c)
    return out


def to_weyl_basis(f: NCPolynomial) -> WeylPolynomial:
    """Change of basis by triangular elimination on total degree."""
    remaining = dict(f.items())
    out: dict = {}
    while remaining:
        key = max(remaining, key=lambda t: (t[0] + t[1], t))
        n, m, k = key
        c = remaining[key]
        out[key] = c
        for (a, b, j), x in weyl_monomial(n, m).items():
            tk = (a, b, j + k)
            v = remaining.get(tk, ZERO) - x * c
            if v:
                remaining[tk] = v
            else:
                remaining.pop(tk, None)
    return WeylPolynomial._from_clean(out)


def symmetrized_product(a: WeylPolynomial, b: WeylPolynomial) -> WeylPolynomial:
    """``W(a, b) ∘ W(c, d) = W(a+c, b+d)``, extended bilinearly."""
    return WeylPolynomial._from_clean(
        _accumulate(
            ((n1 + n2, m1 + m2, k1 + k2), x * y)
            for (n1, m1, k1), x in a.items()
            for (n2, m2, k2), y in b.items()
        )
    )


def partial_q(w: WeylPolynomial) -> WeylPolynomial:
    return WeylPolynomial._from_clean({(n - 1, m, k): c * n for (n, m, k), c in w.items() if n})


def partial_p(w: WeylPolynomial) -> WeylPolynomial:
    return WeylPolynomial._from_clean({(n, m - 1, k): c * m for (n, m, k), c in w.items() if m})


def symmetrized_poisson(f: WeylPolynomial, g: WeylPolynomial) -> WeylPolynomial:
    """``∂f/∂q̂ ∘ ∂g/∂p̂ - ∂g/∂q̂ ∘ ∂f/∂p̂``."""
    return symmetrized_product(partial_q(f), partial_p(g)) - symmetrized_product(partial_q(g), partial_p(f))


# -- ħ -> 0 ------------------------------------------------------------------

def classical_limit(f: NCPolynomial) -> ClassicalPolynomial:
    """Set ħ = 0 and read q̂, p̂ as commuting variables."""
    return ClassicalPolynomial._from_clean({(n, m): c for (n, m, k), c in f.items() if k == 0})


def eval_classical(f: ClassicalPolynomial, q0: float, p0: float) -> float:
    if not f.is_real():
        raise ValueError("eval_classical needs real coefficients")
    return float(sum(float(c.re) * q0**n * p0**m for (n, m), c in f.items()))
