"""Single-factor representations, the two-level r-factor, and the h parameter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, spectral_derivative

__all__ = [
    "FactorRep",
    "RFactor",
    "SemiclassicalParams",
    "coordinate_rep",
    "momentum_rep",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FactorRep:
    """Matched position/momentum matrices on one grid.

    ``kind="coordinate"``: ``Q`` diagonal, ``P = -i ħ D``.
    ``kind="momentum"``: ``P`` diagonal, ``Q = +i ħ D``.
    """

    grid: Grid
    hbar: float
    Q: np.ndarray
    P: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return self.grid.n_points


def _derivative_term(grid: Grid, hbar: float, sign: complex, nyquist: str) -> np.ndarray:
    if hbar < 0:
        raise ValueError(f"hbar must be non-negative, got {hbar}")
    if hbar == 0:
        return np.zeros((grid.n_points, grid.n_points), dtype=complex)
    return sign * hbar * spectral_derivative(grid.n_points, grid.length, nyquist)


def coordinate_rep(g: Grid, hbar: float, *, nyquist: str = "zero") -> FactorRep:
    Q = np.diag(g.points).astype(complex)
    P = _derivative_term(g, hbar, -1j, nyquist)
    return FactorRep(g, float(hbar), _frozen(Q), _frozen(P), "coordinate")


def momentum_rep(g: Grid, hbar: float, *, nyquist: str = "zero") -> FactorRep:
    P = np.diag(g.points).astype(complex)
    Q = _derivative_term(g, hbar, 1j, nyquist)
    return FactorRep(g, float(hbar), _frozen(Q), _frozen(P), "momentum")


_R_Q = _frozen(np.array([[1, 0], [0, 0]], dtype=complex))
_R_P = _frozen(np.array([[0, 0], [0, 1]], dtype=complex))
_I2 = _frozen(np.eye(2, dtype=complex))


@dataclass(frozen=True)
class RFactor:
    """The bookkeeping space H_r with projectors ``R_q``, ``R_p`` and mixing amplitudes."""

    c_q: complex = math.sqrt(0.5)
    c_p: complex = math.sqrt(0.5)
    R_q: np.ndarray = field(default=_R_Q, init=False, repr=False, compare=False)
    R_p: np.ndarray = field(default=_R_P, init=False, repr=False, compare=False)
    identity: np.ndarray = field(default=_I2, init=False, repr=False, compare=False)

    def __post_init__(self):
        weight = abs(self.c_q) ** 2 + abs(self.c_p) ** 2
        if abs(weight - 1) > 1e-12:
            raise ValueError(f"|c_q|^2 + |c_p|^2 = {weight!r}, must equal 1")

    @property
    def r_q(self) -> np.ndarray:
        return np.array([1, 0], dtype=complex)

    @property
    def r_p(self) -> np.ndarray:
        return np.array([0, 1], dtype=complex)

    @property
    def mixing_vector(self) -> np.ndarray:
        return self.c_q * self.r_q + self.c_p * self.r_p

    @property
    def dyad(self) -> np.ndarray:
        v = self.mixing_vector
        return np.outer(v, v.conj())

    def projector_identities(self) -> dict[str, float]:
        """Max-abs error of each projector identity; all are exactly zero."""
        Rq, Rp = self.R_q, self.R_p
        err = lambda a, b: float(np.max(np.abs(a - b)))  # noqa: E731
        return {
            "R_q R_p = 0": err(Rq @ Rp, 0),
            "R_q^2 = R_q": err(Rq @ Rq, Rq),
            "R_p^2 = R_p": err(Rp @ Rp, Rp),
            "R_q^dag = R_q": err(Rq.conj().T, Rq),
            "R_p^dag = R_p": err(Rp.conj().T, Rp),
            "R_q + R_p = I": err(Rq + Rp, self.identity),
        }


@dataclass(frozen=True)
class SemiclassicalParams:
    """``0 <= h <= h0`` with running ``ħ(h) = ħ0 * h / h0`` and ``ħ0 = h0 / 2π``."""

    h: float
    h0: float = 2 * math.pi

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValueError(f"h0 must be positive, got {self.h0}")
        if not 0 <= self.h <= self.h0:
            raise ValueError(f"h = {self.h} outside [0, h0 = {self.h0}]")

    @property
    def hbar0(self) -> float:
        return self.h0 / (2 * math.pi)

    @property
    def hbar(self) -> float:
        return self.hbar0 * (self.h / self.h0)

    @property
    def mixing(self) -> float:
        """The ``1 - h/h0`` weight multiplying the cross projector."""
        return 1.0 - self.h / self.h0
