"""Plain-text expression syntax and canonical printing.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '@' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | 'q' | 'p' | 'hbar' | 'i' | '(' expr ')'

``*`` is the operator product, ``@`` the symmetrized product ∘, and ``/``
only divides by a scalar.  Numbers are integers or decimals, read exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import (
    HBAR,
    IDENTITY,
    ClassicalPolynomial,
    NCPolynomial,
    P,
    Q,
    WeylPolynomial,
    from_weyl_basis,
    multiply,
    symmetrized_product,
    to_weyl_basis,
)
from .coefficient import Coefficient, I, format_coefficient

__all__ = ["ExpressionError", "parse_expression", "format_nc", "format_weyl", "format_classical"]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|(hbar|q|p|i)|([-+*/@^()]))")


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_ATOMS = {"q": Q, "p": P, "hbar": HBAR, "i": NCPolynomial.constant(I)}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ExpressionError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> NCPolynomial:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {val!r}", pos)
        return result

    def expr(self) -> NCPolynomial:
        left = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> NCPolynomial:
        left = self.unary()
        while self.peek()[1] in ("*", "@", "/"):
            _, op, pos = self.take()
            right = self.unary()
            if op == "*":
                left = multiply(left, right)
            elif op == "@":
                left = from_weyl_basis(symmetrized_product(to_weyl_basis(left), to_weyl_basis(right)))
            else:
                if right.is_zero() or set(right.terms) != {(0, 0, 0)}:
                    raise ExpressionError("division only by a nonzero scalar", pos)
                left = left / right.coefficient(0, 0, 0)
        return left

    def unary(self) -> NCPolynomial:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> NCPolynomial:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ExpressionError("exponent must be a non-negative integer", pos)
            result = IDENTITY
            for _ in range(int(val)):
                result = multiply(result, base)
            return result
        return base

    def atom(self) -> NCPolynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return NCPolynomial.constant(Coefficient(Fraction(val)))
        if kind == "name":
            return _ATOMS[val]
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExpressionError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expression(text: str) -> NCPolynomial:
    """Parse ``text`` into normal-ordered form."""
    return _Parser(text).parse()


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _join(terms: list[tuple[Coefficient, list[str]]]) -> str:
    if not terms:
        return "0"
    parts = []
    for idx, (c, factors) in enumerate(terms):
        negative = (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)
        if negative:
            c = -c
        if factors and c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_coefficient(c), *factors])
        if idx == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


def format_nc(f: NCPolynomial) -> str:
    """Canonical normal-ordered rendering, terms in lexicographic key order."""
    rendered = []
    for (n, m, k), c in f.items():
        factors = []
        if k:
            factors.append(_power("hbar", k))
        if n:
            factors.append(_power("q", n))
        if m:
            factors.append(_power("p", m))
        rendered.append((c, factors))
    return _join(rendered)


def format_weyl(w: WeylPolynomial) -> str:
    """Weyl-basis rendering; ``W(n, m)`` prints as ``q^n@p^m`` so it re-parses."""
    rendered = []
    for (n, m, k), c in w.items():
        factors = []
        if k:
            factors.append(_power("hbar", k))
        sym = "@".join(s for s in (_power("q", n) if n else "", _power("p", m) if m else "") if s)
        if sym:
            factors.append(sym)
        rendered.append((c, factors))
    return _join(rendered)


def format_classical(f: ClassicalPolynomial) -> str:
    rendered = []
    for (n, m), c in f.items():
        factors = []
        if n:
            factors.append(_power("q", n))
        if m:
            factors.append(_power("p", m))
        rendered.append((c, factors))
    return _join(rendered)
