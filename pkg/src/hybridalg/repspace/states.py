"""States on the hybrid space and the mean-value quotient."""

from __future__ import annotations

import math

import numpy as np

from .factors import RFactor
from .grid import Grid
from .hybrid import HybridDensity, HybridOperator, HybridVector

__all__ = [
    "gaussian_profile",
    "gaussian_test_states",
    "fourier_state",
    "inverse_fourier_state",
    "embed_quantum_state",
    "point_state",
    "classical_state",
    "classical_gaussian_samples",
    "delta_samples",
    "delta_state",
    "mean_value",
]


def gaussian_profile(g: Grid, center: float = 0.0, width: float = 1.0, wavenumber: float = 0.0) -> np.ndarray:
    """Unit-norm samples of ``exp(-(x - center)^2 / (2 width^2) + i wavenumber x)``."""
    x = g.points
    v = np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * wavenumber * x)
    return v / np.linalg.norm(v)


def gaussian_test_states(gq: Grid, gp: Grid) -> list[HybridVector]:
    """A handful of smooth product states used for commutator residuals."""
    dims = (gq.n_points, gp.n_points, 2)
    mix = np.array([0.6, 0.8j])
    specs = [
        (0.0, 1.0, 0.0, 1.0, np.array([1, 0])),
        (0.0, 1.0, 0.0, 1.0, np.array([0, 1])),
        (0.7, 0.8, -0.4, 1.2, mix),
        (-1.0, 1.3, 0.5, 0.9, mix),
    ]
    states = []
    for cq, wq, cp, wp, r in specs:
        v = np.kron(np.kron(gaussian_profile(gq, cq, wq), gaussian_profile(gp, cp, wp)), r)
        states.append(HybridVector(dims, v))
    return states


def _check_fourier_grids(gq: Grid, gp: Grid, hbar: float):
    if not hbar > 0:
        raise ValueError("fourier_state needs hbar > 0; classical states never take this path")
    if gq.n_points != gp.n_points:
        raise ValueError(f"grids must have equal sizes, got {gq.n_points} and {gp.n_points}")
    required = 2 * math.pi * hbar * gq.n_points / gq.length
    if not math.isclose(gp.length, required, rel_tol=1e-12):
        raise ValueError(f"momentum grid length {gp.length!r} incompatible; required L_p = {required!r}")


def fourier_state(psi: np.ndarray, gq: Grid, gp: Grid, hbar: float) -> np.ndarray:
    """``ψ̃(p_k) = Δq / sqrt(2πħ) Σ_j exp(-i p_k q_j / ħ) ψ(q_j)``.

    Acts on wavefunction values (``Σ |ψ|² Δq = 1`` normalization), and is
    exactly unitary between the two weighted norms on compatible grids.
    """
    _check_fourier_grids(gq, gp, hbar)
    kernel = np.exp(-1j * np.outer(gp.points, gq.points) / hbar)
    return gq.spacing / math.sqrt(2 * math.pi * hbar) * (kernel @ np.asarray(psi, dtype=complex))


def inverse_fourier_state(phi: np.ndarray, gq: Grid, gp: Grid, hbar: float) -> np.ndarray:
    _check_fourier_grids(gq, gp, hbar)
    kernel = np.exp(1j * np.outer(gq.points, gp.points) / hbar)
    return gp.spacing / math.sqrt(2 * math.pi * hbar) * (kernel @ np.asarray(phi, dtype=complex))


def embed_quantum_state(
    psi_q: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    c_q: complex,
    c_p: complex,
    r: RFactor,
    *,
    gq: Grid,
    gp: Grid,
    hbar: float,
) -> HybridVector:
    """``c_q |ψ⟩⊗|a⟩⊗|r_q⟩ + c_p |b⟩⊗|ψ̃⟩⊗|r_p⟩`` for unit-norm sample vectors.

    ``a`` lives on the momentum grid, ``b`` on the coordinate grid; ψ̃ is the
    momentum-grid copy of ``psi_q``.
    """
    for name, v in (("psi_q", psi_q), ("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1) > 1e-10:
            raise ValueError(f"{name} must have unit norm, got {np.linalg.norm(v)!r}")
    weight = abs(c_q) ** 2 + abs(c_p) ** 2
    if abs(weight - 1) > 1e-12:
        raise ValueError(f"|c_q|^2 + |c_p|^2 = {weight!r}, must equal 1")
    dims = (gq.n_points, gp.n_points, 2)
    if len(psi_q) != gq.n_points or len(b) != gq.n_points or len(a) != gp.n_points:
        raise ValueError("vector lengths do not match the grids")
    if c_p != 0:
        # unit sample norm <-> wavefunction norm: scale by sqrt(Δ)
        psi_p = fourier_state(np.asarray(psi_q) / math.sqrt(gq.spacing), gq, gp, hbar) * math.sqrt(gp.spacing)
    else:
        psi_p = np.zeros(gp.n_points, dtype=complex)
    v = c_q * np.kron(np.kron(psi_q, a), r.r_q) + c_p * np.kron(np.kron(b, psi_p), r.r_p)
    return HybridVector(dims, v)


def point_state(i: int, j: int, r: RFactor, dims) -> HybridVector:
    """``|q_i⟩ ⊗ |p_j⟩ ⊗ (c_q |r_q⟩ + c_p |r_p⟩)``."""
    nq, np_, _ = dims
    eq = np.zeros(nq)
    eq[i] = 1
    ep = np.zeros(np_)
    ep[j] = 1
    return HybridVector(dims, np.kron(np.kron(eq, ep), r.mixing_vector))


def classical_state(rho_samples: np.ndarray, r: RFactor, gq: Grid, gp: Grid) -> HybridDensity:
    """``ρ(q̂⊗I, I⊗p̂) ⊗ |c⟩⟨c|`` from phase-space samples ``ρ[i, j] = ρ(q_i, p_j)``.

    The trace is ``Σ ρ_ij = 1 / (Δq Δp)``, the grid stand-in for δ(0)·δ(0).
    """
    rho = np.asarray(rho_samples)
    if np.iscomplexobj(rho):
        if np.any(rho.imag != 0):
            raise ValueError("classical density samples must be real")
        rho = rho.real
    rho = rho.astype(float)
    if rho.shape != (gq.n_points, gp.n_points):
        raise ValueError(f"samples shape {rho.shape} does not match grids")
    if np.any(rho < 0):
        raise ValueError("classical density samples must be non-negative")
    total = float(np.sum(rho)) * gq.spacing * gp.spacing
    if abs(total - 1) > 1e-10:
        raise ValueError(f"samples integrate to {total!r}, not 1")
    return HybridDensity((gq.n_points, gp.n_points, 2), "classical", weights=rho, dyad=r.dyad)


def classical_gaussian_samples(gq: Grid, gp: Grid, mu_q: float, mu_p: float, sigma_q: float, sigma_p: float) -> np.ndarray:
    """Gaussian phase-space density normalized by its Riemann sum on the grids."""
    gq_ = np.exp(-((gq.points - mu_q) ** 2) / (2 * sigma_q**2))
    gp_ = np.exp(-((gp.points - mu_p) ** 2) / (2 * sigma_p**2))
    rho = np.outer(gq_, gp_)
    return rho / (np.sum(rho) * gq.spacing * gp.spacing)


def delta_samples(gq: Grid, gp: Grid, q0: float, p0: float) -> np.ndarray:
    """Kronecker delta at the node nearest ``(q0, p0)``, scaled by ``1/(Δq Δp)``."""
    rho = np.zeros((gq.n_points, gp.n_points))
    rho[gq.nearest_index(q0), gp.nearest_index(p0)] = 1 / (gq.spacing * gp.spacing)
    return rho


def delta_state(q0: float, p0: float, r: RFactor, gq: Grid, gp: Grid) -> HybridDensity:
    return classical_state(delta_samples(gq, gp, q0, p0), r, gq, gp)


def mean_value(rho: HybridDensity, A: HybridOperator, *, tol: float = 1e-10):
    """``Tr(ρ A) / Tr ρ``.

    Returns a float when both arguments are Hermitian, after checking the
    imaginary part is below ``tol`` relative; a complex otherwise.
    """
    norm = rho.trace()
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("density has zero trace; the mean-value quotient is undefined")
    value = rho.trace_product(A) / norm
    if rho.is_hermitian() and A.is_hermitian():
        if abs(value.imag) > tol * max(1.0, abs(value.real)):
            raise ValueError(f"mean value of Hermitian operator has imaginary part {value.imag!r}")
        return float(value.real)
    return value
