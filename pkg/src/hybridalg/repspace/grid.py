"""Uniform periodic grids and the DFT differentiation matrix."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["Grid", "uniform_grid", "spectral_derivative", "compatible_momentum_length"]


@dataclass(frozen=True)
class Grid:
    """Centered uniform grid ``q_j = -L/2 + j*L/n``, ``j = 0..n-1``."""

    n_points: int
    length: float

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2 or self.n_points % 2:
            raise ValueError(f"n_points must be an even integer >= 2, got {self.n_points}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.arange(self.n_points) * self.spacing - self.length / 2
        pts.setflags(write=False)
        return pts

    def nearest_index(self, x: float) -> int:
        """Index of the grid node closest to ``x`` (lower index on ties)."""
        return int(np.argmin(np.abs(self.points - x)))


def uniform_grid(n: int, L: float) -> Grid:
    return Grid(n, float(L))


def spectral_derivative(n: int, L: float, nyquist: str = "zero") -> np.ndarray:
    """``D = F^† diag(i k) F`` for the unitary DFT ``F`` on ``n`` periodic points.

    With ``nyquist="zero"`` the unpaired frequency ``n/2`` is dropped and the
    result is cleaned to an exactly real antisymmetric matrix.
    ``nyquist="keep"`` assigns it ``+n/2``; the matrix is then complex and
    does not map real samples to real samples.  It exists for fault
    injection only.
    """
    if int(n) != n or n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n}")
    if nyquist not in ("zero", "keep"):
        raise ValueError(f"unknown Nyquist convention {nyquist!r}")
    j = np.arange(n)
    wave = np.where(j < n // 2, j, j - n).astype(float)
    wave[n // 2] = 0.0 if nyquist == "zero" else n / 2
    k = 2 * np.pi / L * wave
    F = np.fft.fft(np.eye(n), axis=0, norm="ortho")
    D = F.conj().T @ (1j * k[:, None] * F)
    if nyquist == "zero":
        D = 0.5 * (D - D.T).real
    return D.astype(complex)


def compatible_momentum_length(n: int, L_q: float, hbar: float) -> float:
    """Momentum-grid extent whose nodes are the ħ-scaled DFT frequencies."""
    return 2 * np.pi * hbar * n / L_q
