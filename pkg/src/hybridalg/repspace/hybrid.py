"""Operators, vectors and densities on H_q ⊗ H_p ⊗ H_r.

Index order is (q-factor, p-factor, r-factor) with r fastest, matching
``np.kron(np.kron(A, B), R)``.

A :class:`HybridOperator` is kept as a sum of Kronecker terms
``A ⊗ B ⊗ R`` (``None`` standing for an identity factor) and only turned
into a dense matrix on request.  Products use ``(A⊗B⊗R)(A'⊗B'⊗R') =
AA'⊗BB'⊗RR'`` and drop terms whose r-part vanishes, which is what keeps
everything generated by the R_q/R_p sectors small.  Dense-only operators
(e.g. read back from a file) are supported and simply skip the fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "Dims",
    "KronTerm",
    "HybridOperator",
    "HybridVector",
    "HybridDensity",
    "hybrid_commutator",
]

Dims = tuple[int, int, int]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.flags.writeable:
        a = a.copy()
        a.setflags(write=False)
    return a


def _same(x: np.ndarray | None, y: np.ndarray | None) -> bool:
    if x is None or y is None:
        return x is None and y is None
    return x is y or np.array_equal(x, y)


def _mul(x: np.ndarray | None, y: np.ndarray | None) -> np.ndarray | None:
    if x is None:
        return y
    if y is None:
        return x
    return x @ y


def _add(x: np.ndarray | None, y: np.ndarray | None, n: int) -> np.ndarray:
    x = np.eye(n, dtype=complex) if x is None else x
    y = np.eye(n, dtype=complex) if y is None else y
    return x + y


@dataclass(frozen=True, eq=False)
class KronTerm:
    a: np.ndarray | None
    b: np.ndarray | None
    r: np.ndarray

    def scaled(self, c: complex) -> KronTerm:
        return KronTerm(self.a, self.b, _frozen(c * self.r))

    def is_hermitian(self, tol: float = 0.0) -> bool:
        return all(
            m is None or np.max(np.abs(m - m.conj().T), initial=0.0) <= tol for m in (self.a, self.b, self.r)
        )


def _merge(s: KronTerm, t: KronTerm, dims: Dims) -> KronTerm | None:
    nq, np_, _ = dims
    if np.array_equal(s.r, t.r):
        if _same(s.b, t.b):
            return KronTerm(_frozen(_add(s.a, t.a, nq)), s.b, s.r)
        if _same(s.a, t.a):
            return KronTerm(s.a, _frozen(_add(s.b, t.b, np_)), s.r)
    if _same(s.a, t.a) and _same(s.b, t.b):
        return KronTerm(s.a, s.b, _frozen(s.r + t.r))
    return None


def _simplify(terms: Sequence[KronTerm], dims: Dims) -> tuple[KronTerm, ...]:
    out: list[KronTerm] = []
    for t in terms:
        if not t.r.any():
            continue
        for idx, u in enumerate(out):
            merged = _merge(u, t, dims)
            if merged is not None:
                out[idx] = merged
                break
        else:
            out.append(t)
    return tuple(t for t in out if t.r.any())


class HybridOperator:
    """Linear operator on the composite space of dimension ``2 * N_q * N_p``."""

    def __init__(
        self,
        dims: Dims,
        terms: Sequence[KronTerm] | None = None,
        *,
        matrix: np.ndarray | None = None,
        hermitian: bool | None = None,
    ):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or dims[2] != 2 or min(dims) < 1:
            raise ValueError(f"dims must be (N_q, N_p, 2), got {dims}")
        self.dims: Dims = dims
        self._hermitian = hermitian
        if matrix is not None:
            if terms is not None:
                raise ValueError("give either terms or matrix")
            matrix = _frozen(matrix)
            if matrix.shape != (self.size, self.size):
                raise ValueError(f"matrix shape {matrix.shape} does not match dims {dims}")
            self._terms = None
            self.__dict__["matrix"] = matrix
        else:
            nq, np_, _ = dims
            for t in terms or ():
                if t.a is not None and t.a.shape != (nq, nq):
                    raise ValueError(f"q-factor shape {t.a.shape} does not match N_q = {nq}")
                if t.b is not None and t.b.shape != (np_, np_):
                    raise ValueError(f"p-factor shape {t.b.shape} does not match N_p = {np_}")
                if t.r.shape != (2, 2):
                    raise ValueError("r-factor must be 2x2")
            self._terms = tuple(terms or ())

    # -- construction ------------------------------------------------------
    @classmethod
    def from_terms(cls, dims: Dims, terms, *, hermitian: bool | None = None) -> HybridOperator:
        terms = [KronTerm(None if a is None else _frozen(a), None if b is None else _frozen(b), _frozen(r)) for a, b, r in terms]
        return cls(dims, terms, hermitian=hermitian)

    @classmethod
    def identity(cls, dims: Dims) -> HybridOperator:
        return cls(dims, (KronTerm(None, None, _frozen(np.eye(2))),), hermitian=True)

    @classmethod
    def zero(cls, dims: Dims) -> HybridOperator:
        return cls(dims, (), hermitian=True)

    # -- basic properties --------------------------------------------------
    @property
    def size(self) -> int:
        nq, np_, nr = self.dims
        return nq * np_ * nr

    @property
    def shape(self) -> tuple[int, int]:
        return (self.size, self.size)

    @property
    def terms(self) -> tuple[KronTerm, ...] | None:
        return self._terms

    @property
    def is_structured(self) -> bool:
        return self._terms is not None

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense matrix, materialized on first access."""
        nq, np_, _ = self.dims
        out = np.zeros(self.shape, dtype=complex)
        for t in self._terms:
            a = np.eye(nq, dtype=complex) if t.a is None else t.a
            b = np.eye(np_, dtype=complex) if t.b is None else t.b
            out += np.kron(np.kron(a, b), t.r)
        out.setflags(write=False)
        return out

    def is_r_diagonal(self) -> bool:
        return self.is_structured and all(t.r[0, 1] == 0 and t.r[1, 0] == 0 for t in self._terms)

    def sector_block(self, s: int) -> np.ndarray:
        """Dense block on ``H_q ⊗ H_p ⊗ |r_s⟩`` (``s = 0`` is r_q, ``1`` is r_p)."""
        nq, np_, _ = self.dims
        if not self.is_structured:
            return self.matrix.reshape(nq * np_, 2, nq * np_, 2)[:, s, :, s]
        out = np.zeros((nq * np_, nq * np_), dtype=complex)
        for t in self._terms:
            w = t.r[s, s]
            if w == 0:
                continue
            a = np.eye(nq, dtype=complex) if t.a is None else t.a
            b = np.eye(np_, dtype=complex) if t.b is None else t.b
            out += w * np.kron(a, b)
        return out

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        if self._hermitian is not None:
            return self._hermitian
        if self.is_structured and all(t.is_hermitian(tol) for t in self._terms):
            return True
        if self.size <= 4096:
            m = self.matrix
            return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * max(1.0, np.max(np.abs(m), initial=0.0)))
        # probe with fixed random vectors: <x, A y> = <A x, y>
        rng = np.random.default_rng(0)
        x = rng.standard_normal((self.size, 3)) + 1j * rng.standard_normal((self.size, 3))
        ax = np.column_stack([self.apply(c) for c in x.T])
        gram = x.conj().T @ ax
        return bool(np.max(np.abs(gram - gram.conj().T)) <= tol * max(1.0, np.max(np.abs(gram))))

    # -- algebra -------------------------------------------------------------
    def _check(self, other: HybridOperator):
        if not isinstance(other, HybridOperator):
            raise TypeError(f"expected HybridOperator, got {type(other).__name__}")
        if other.dims != self.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {other.dims}")

    def __add__(self, other: HybridOperator) -> HybridOperator:
        self._check(other)
        if self.is_structured and other.is_structured:
            return HybridOperator(self.dims, _simplify(self._terms + other._terms, self.dims))
        return HybridOperator(self.dims, matrix=self.matrix + other.matrix)

    def __neg__(self) -> HybridOperator:
        return self.scale(-1)

    def __sub__(self, other: HybridOperator) -> HybridOperator:
        return self + (-other)

    def scale(self, c: complex) -> HybridOperator:
        if self.is_structured:
            return HybridOperator(self.dims, _simplify([t.scaled(c) for t in self._terms], self.dims))
        return HybridOperator(self.dims, matrix=c * self.matrix)

    def __mul__(self, c) -> HybridOperator:
        if isinstance(c, HybridOperator):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: HybridOperator) -> HybridOperator:
        self._check(other)
        if self.is_structured and other.is_structured:
            prods = []
            for s in self._terms:
                for t in other._terms:
                    r = s.r @ t.r
                    if r.any():
                        prods.append(KronTerm(_mul(s.a, t.a), _mul(s.b, t.b), _frozen(r)))
            return HybridOperator(self.dims, _simplify(prods, self.dims))
        return HybridOperator(self.dims, matrix=self.matrix @ other.matrix)

    def adjoint(self) -> HybridOperator:
        if self.is_structured:
            terms = [
                KronTerm(
                    None if t.a is None else _frozen(t.a.conj().T),
                    None if t.b is None else _frozen(t.b.conj().T),
                    _frozen(t.r.conj().T),
                )
                for t in self._terms
            ]
            return HybridOperator(self.dims, terms)
        return HybridOperator(self.dims, matrix=self.matrix.conj().T)

    def apply(self, v) -> np.ndarray:
        """Matrix-vector product without materializing the dense matrix."""
        v = np.asarray(getattr(v, "amplitudes", v), dtype=complex)
        if v.shape != (self.size,):
            raise ValueError(f"vector of length {v.shape} does not match dimension {self.size}")
        if not self.is_structured:
            return self.matrix @ v
        x = v.reshape(self.dims)
        out = np.zeros_like(x)
        for t in self._terms:
            y = x if t.a is None else np.einsum("ia,ajr->ijr", t.a, x)
            y = y if t.b is None else np.einsum("jb,ibr->ijr", t.b, y)
            out += y @ t.r.T
        return out.reshape(-1)

    def equals(self, other: HybridOperator) -> bool:
        """Bitwise equality of the dense matrices."""
        self._check(other)
        return self.matrix.tobytes() == other.matrix.tobytes()

    def __repr__(self) -> str:
        form = f"{len(self._terms)} terms" if self.is_structured else "dense"
        return f"HybridOperator(dims={self.dims}, {form})"


def hybrid_commutator(a: HybridOperator, b: HybridOperator) -> HybridOperator:
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class HybridVector:
    dims: Dims
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        amp = _frozen(np.asarray(self.amplitudes).reshape(-1))
        if amp.size != dims[0] * dims[1] * dims[2]:
            raise ValueError(f"{amp.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: HybridVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


class HybridDensity:
    """Density operator in one of three storage forms.

    ``"pure"`` keeps a vector ψ (ρ = |ψ⟩⟨ψ|), ``"classical"`` keeps weights
    ``w[i, j]`` and a 2x2 r-dyad (ρ = diag(w) ⊗ dyad), ``"dense"`` keeps
    the full matrix.
    """

    def __init__(self, dims: Dims, kind: str, *, vector=None, weights=None, dyad=None, matrix=None):
        self.dims: Dims = tuple(int(d) for d in dims)
        self.kind = kind
        if kind == "pure":
            self.vector = _frozen(np.asarray(vector).reshape(-1))
        elif kind == "classical":
            self.weights = np.asarray(weights, dtype=float).copy()
            self.weights.setflags(write=False)
            self.dyad = _frozen(dyad)
            if self.weights.shape != self.dims[:2]:
                raise ValueError(f"weights shape {self.weights.shape} does not match {self.dims[:2]}")
        elif kind == "dense":
            self.__dict__["matrix"] = _frozen(matrix)
        else:
            raise ValueError(f"unknown density kind {kind!r}")

    @classmethod
    def pure(cls, v: HybridVector) -> HybridDensity:
        return cls(v.dims, "pure", vector=v.amplitudes)

    @classmethod
    def from_matrix(cls, dims: Dims, matrix) -> HybridDensity:
        return cls(dims, "dense", matrix=matrix)

    @property
    def size(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.kind == "pure":
            m = np.outer(self.vector, self.vector.conj())
        else:
            m = np.kron(np.diag(self.weights.reshape(-1)).astype(complex), self.dyad)
        m.setflags(write=False)
        return m

    def trace(self) -> complex:
        if self.kind == "pure":
            return complex(np.vdot(self.vector, self.vector))
        if self.kind == "classical":
            return complex(np.sum(self.weights) * np.trace(self.dyad))
        return complex(np.trace(self.matrix))

    def trace_product(self, op: HybridOperator) -> complex:
        """``Tr(ρ A)``."""
        if op.dims != self.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {op.dims}")
        if self.kind == "pure":
            return complex(np.vdot(self.vector, op.apply(self.vector)))
        if self.kind == "classical" and op.is_structured:
            total = 0j
            for t in op.terms:
                da = np.ones(self.dims[0]) if t.a is None else np.diagonal(t.a)
                db = np.ones(self.dims[1]) if t.b is None else np.diagonal(t.b)
                total += (da @ self.weights @ db) * np.trace(self.dyad @ t.r)
            return complex(total)
        return complex(np.sum(self.matrix * op.matrix.T))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        if self.kind == "pure":
            return True
        if self.kind == "classical":
            return bool(np.max(np.abs(self.dyad - self.dyad.conj().T)) <= tol)
        m = self.matrix
        return bool(np.max(np.abs(m - m.conj().T)) <= tol * max(1.0, np.max(np.abs(m))))

    def min_eigenvalue(self) -> float:
        if self.kind == "pure":
            return 0.0
        if self.kind == "classical":
            # spectrum of diag(w) ⊗ dyad is {w_ij * λ}
            lam = np.linalg.eigvalsh(self.dyad)
            return float(np.min(np.outer([self.weights.min(), self.weights.max()], lam)))
        return float(np.min(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))))
