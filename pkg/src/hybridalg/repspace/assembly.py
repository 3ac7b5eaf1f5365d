"""Assembly of q̃(h), p̃(h), the quantum and classical pairs, and polynomial evaluation."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..ncpoly import NCPolynomial
from .factors import FactorRep, RFactor, SemiclassicalParams
from .hybrid import HybridOperator, HybridVector, KronTerm, hybrid_commutator

__all__ = [
    "assemble_qtilde",
    "assemble_ptilde",
    "assemble_pair_qm",
    "assemble_pair_cm",
    "assemble_pair_cm_minimal",
    "commutant_witness",
    "doubled_observable",
    "evaluate_operator_poly",
    "commutator_residual",
    "operator_norm",
]


def _dims(fq: FactorRep, fp: FactorRep) -> tuple[int, int, int]:
    return (fq.n, fp.n, 2)


def _check_reps(fq: FactorRep, fp: FactorRep, hbar: float | None = None):
    if fq.kind != "coordinate":
        raise ValueError("first factor must be a coordinate representation")
    if fp.kind != "momentum":
        raise ValueError("second factor must be a momentum representation")
    if hbar is not None and (fq.hbar != hbar or fp.hbar != hbar):
        raise ValueError(
            f"factor representations built with hbar = ({fq.hbar}, {fp.hbar}), parameters require {hbar}"
        )


def assemble_qtilde(params: SemiclassicalParams, fq: FactorRep, fp: FactorRep, r: RFactor) -> HybridOperator:
    """``Q_q ⊗ I ⊗ (R_q + (1 - h/h0) R_p) + I ⊗ Q_p ⊗ R_p``."""
    _check_reps(fq, fp, params.hbar)
    s = params.mixing
    terms = (KronTerm(fq.Q, None, r.R_q + s * r.R_p), KronTerm(None, fp.Q, r.R_p))
    return HybridOperator(_dims(fq, fp), terms, hermitian=True)


def assemble_ptilde(params: SemiclassicalParams, fq: FactorRep, fp: FactorRep, r: RFactor) -> HybridOperator:
    """``P_q ⊗ I ⊗ R_q + I ⊗ P_p ⊗ ((1 - h/h0) R_q + R_p)``."""
    _check_reps(fq, fp, params.hbar)
    s = params.mixing
    terms = (KronTerm(fq.P, None, r.R_q), KronTerm(None, fp.P, s * r.R_q + r.R_p))
    return HybridOperator(_dims(fq, fp), terms, hermitian=True)


def assemble_pair_qm(fq: FactorRep, fp: FactorRep, r: RFactor) -> tuple[HybridOperator, HybridOperator]:
    _check_reps(fq, fp)
    dims = _dims(fq, fp)
    q = HybridOperator(dims, (KronTerm(fq.Q, None, r.R_q), KronTerm(None, fp.Q, r.R_p)), hermitian=True)
    p = HybridOperator(dims, (KronTerm(fq.P, None, r.R_q), KronTerm(None, fp.P, r.R_p)), hermitian=True)
    return q, p


def assemble_pair_cm(fq: FactorRep, fp: FactorRep, r: RFactor) -> tuple[HybridOperator, HybridOperator]:
    """``diag(q) ⊗ I ⊗ I`` and ``I ⊗ diag(p) ⊗ I``; independent of ħ."""
    _check_reps(fq, fp)
    dims = _dims(fq, fp)
    q = HybridOperator(dims, (KronTerm(fq.Q, None, r.identity),), hermitian=True)
    p = HybridOperator(dims, (KronTerm(None, fp.P, r.identity),), hermitian=True)
    return q, p


def assemble_pair_cm_minimal(fq: FactorRep, fp: FactorRep) -> tuple[np.ndarray, np.ndarray]:
    """The two-factor commuting pair ``q ⊗ I``, ``I ⊗ p`` on H_q ⊗ H_p."""
    _check_reps(fq, fp)
    return np.kron(fq.Q, np.eye(fp.n)), np.kron(np.eye(fq.n), fp.P)


def commutant_witness(fq: FactorRep, fp: FactorRep, r: RFactor) -> HybridOperator:
    """``Q_q ⊗ I ⊗ R_p``: commutes with the quantum pair, so that pair is reducible."""
    return HybridOperator(_dims(fq, fp), (KronTerm(fq.Q, None, r.R_p),), hermitian=True)


def doubled_observable(f: NCPolynomial, fq: FactorRep, fp: FactorRep, r: RFactor) -> HybridOperator:
    """``H(Q_q, P_q) ⊗ I ⊗ R_q + I ⊗ H(Q_p, P_p) ⊗ R_p`` built factor by factor."""
    hq = evaluate_operator_poly(f, (fq.Q, fq.P), fq.hbar)
    hp = evaluate_operator_poly(f, (fp.Q, fp.P), fp.hbar)
    return HybridOperator(_dims(fq, fp), (KronTerm(hq, None, r.R_q), KronTerm(None, hp, r.R_p)))


def _identity_like(x):
    if isinstance(x, HybridOperator):
        return HybridOperator.identity(x.dims)
    return np.eye(x.shape[0], dtype=complex)


def evaluate_operator_poly(f: NCPolynomial, pair, hbar: float):
    """Substitute ``pair = (A, B)`` for ``(q̂, p̂)`` in the normal-ordered terms of ``f``.

    ``ħ**k`` becomes ``hbar**k``.  Works on numpy matrices or on
    :class:`HybridOperator` pairs; the result has the same type.
    """
    A, B = pair
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"pair shapes {A.shape} and {B.shape} are not matching square operators")
    if isinstance(A, HybridOperator) and A.dims != B.dims:
        raise ValueError(f"dimension mismatch {A.dims} vs {B.dims}")
    ident = _identity_like(A)
    qpow, ppow = [ident], [ident]

    def power(cache, base, n):
        while len(cache) <= n:
            cache.append(base if len(cache) == 1 else cache[-1] @ base)
        return cache[n]

    result = None
    for (n, m, k), c in f.items():
        coeff = complex(c) * hbar**k
        if coeff == 0:
            continue
        if n and m:
            mono = power(qpow, A, n) @ power(ppow, B, m)
        elif n:
            mono = power(qpow, A, n)
        else:
            mono = power(ppow, B, m)
        term = mono * coeff
        result = term if result is None else result + term
    if result is None:
        result = ident * 0.0
    return result


def commutator_residual(A: HybridOperator, B: HybridOperator, hbar: float, test_states: Sequence[HybridVector]) -> float:
    """``max_v ||([A, B] - i ħ I) v|| / ||v||`` over the test states."""
    if not test_states:
        raise ValueError("commutator_residual needs at least one test state")
    C = hybrid_commutator(A, B)
    worst = 0.0
    for v in test_states:
        x = v.amplitudes
        res = C.apply(x) - 1j * hbar * x
        worst = max(worst, float(np.linalg.norm(res) / np.linalg.norm(x)))
    return worst


def _hermitian_norm(m: np.ndarray) -> float:
    if not m.any():
        return 0.0
    if np.array_equal(m, m.conj().T):
        return float(np.max(np.abs(np.linalg.eigvalsh(m))))
    return float(np.linalg.norm(m, 2))


def operator_norm(op: HybridOperator) -> float:
    """Spectral norm.

    Sector by sector when the operator is block diagonal in the r-factor; a
    sector of the form ``X ⊗ I + I ⊗ Y`` with Hermitian ``X``, ``Y`` has
    eigenvalues ``x_i + y_j`` and is never materialized.
    """
    if not (op.is_structured and op.is_r_diagonal()):
        return float(np.linalg.norm(op.matrix, 2))
    nq, np_, _ = op.dims
    best = 0.0
    for s in (0, 1):
        terms = [t for t in op.terms if t.r[s, s] != 0]
        if not terms:
            continue
        separable = all((t.a is None or t.b is None) and t.r[s, s].imag == 0 for t in terms)
        if separable:
            x = np.zeros((nq, nq), dtype=complex)
            y = np.zeros((np_, np_), dtype=complex)
            for t in terms:
                w = t.r[s, s].real
                if t.b is None:
                    x += w * (np.eye(nq) if t.a is None else t.a)
                else:
                    y += w * t.b
            if np.array_equal(x, x.conj().T) and np.array_equal(y, y.conj().T):
                ex = np.linalg.eigvalsh(x) if x.any() else np.zeros(nq)
                ey = np.linalg.eigvalsh(y) if y.any() else np.zeros(np_)
                best = max(best, float(np.max(np.abs(ex[:, None] + ey[None, :]))))
                continue
        best = max(best, _hermitian_norm(op.sector_block(s)))
    return best
