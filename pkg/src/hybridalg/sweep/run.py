"""The semiclassical h-sweep.

Every record is a pure function of ``(setup, h)``; h-points can therefore be
evaluated on a thread pool and collected back in ascending order without
changing a single bit of the output.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .. import oracles
from ..ncpoly import NCPolynomial, WeylPolynomial, classical_limit, from_weyl_basis
from ..repspace import (
    HybridDensity,
    HybridOperator,
    RFactor,
    SemiclassicalParams,
    assemble_pair_cm,
    assemble_ptilde,
    assemble_qtilde,
    classical_gaussian_samples,
    classical_state,
    commutator_residual,
    compatible_momentum_length,
    coordinate_rep,
    delta_samples,
    embed_quantum_state,
    evaluate_operator_poly,
    gaussian_profile,
    gaussian_test_states,
    load_text,
    mean_value,
    momentum_rep,
    operator_norm,
    uniform_grid,
)
from .config import SweepConfig

__all__ = ["SweepRecord", "SweepSetup", "WORKERS_ENV", "evaluate_point", "lowest_spectrum", "run_sweep", "workers_from_env"]

log = logging.getLogger(__name__)

WORKERS_ENV = "HYBRIDALG_WORKERS"
SPECTRUM_SIZE = 4


@dataclass(frozen=True)
class SweepRecord:
    h: float
    hbar: float
    ccr_residual: float
    endpoint_distance_q: float
    endpoint_distance_p: float
    lowest_spectrum: tuple[float, ...]
    mean_value: float
    oracle_value: float
    abs_error: float

    COLUMNS = ("h", "hbar", "ccr_residual", "dist_q", "dist_p", "e0", "e1", "e2", "e3", "mean", "oracle", "abs_err")

    def row(self) -> tuple[float, ...]:
        return (
            self.h,
            self.hbar,
            self.ccr_residual,
            self.endpoint_distance_q,
            self.endpoint_distance_p,
            *self.lowest_spectrum,
            self.mean_value,
            self.oracle_value,
            self.abs_error,
        )

    def as_dict(self) -> dict:
        return dict(zip(self.COLUMNS, self.row()))

    @classmethod
    def from_dict(cls, d: dict) -> SweepRecord:
        return cls(
            h=float(d["h"]),
            hbar=float(d["hbar"]),
            ccr_residual=float(d["ccr_residual"]),
            endpoint_distance_q=float(d["dist_q"]),
            endpoint_distance_p=float(d["dist_p"]),
            lowest_spectrum=tuple(float(d[f"e{i}"]) for i in range(SPECTRUM_SIZE)),
            mean_value=float(d["mean"]),
            oracle_value=float(d["oracle"]),
            abs_error=float(d["abs_err"]),
        )


def _load_vector(spec: str, grid, width: float) -> np.ndarray:
    if spec == "gaussian":
        return gaussian_profile(grid, 0.0, width)
    _, v = load_text(spec)
    if v.ndim != 1 or v.size != grid.n_points:
        raise ValueError(f"{spec}: expected a vector of length {grid.n_points}")
    return v / np.linalg.norm(v)


class SweepSetup:
    """Everything that does not depend on h, built once per configuration."""

    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg
        self.hbar0 = cfg.hbar0
        self.gq = uniform_grid(cfg.N_q, cfg.L_q)
        self.gp = uniform_grid(cfg.N_p, compatible_momentum_length(cfg.N_p, cfg.L_q, self.hbar0))
        self.r = RFactor(cfg.c_q, cfg.c_p)
        self.dims = (cfg.N_q, cfg.N_p, 2)
        self.weyl = WeylPolynomial({(n, m, 0): c for n, m, c in cfg.hamiltonian})
        self.hamiltonian: NCPolynomial = from_weyl_basis(self.weyl)
        self.test_states = gaussian_test_states(self.gq, self.gp)
        self.q_cm, self.p_cm = assemble_pair_cm(coordinate_rep(self.gq, 0.0), momentum_rep(self.gp, 0.0), self.r)

    @cached_property
    def density(self) -> HybridDensity:
        spec = self.cfg.state
        if spec.kind == "embedded-ground-state":
            fq = coordinate_rep(self.gq, self.hbar0)
            hq = evaluate_operator_poly(self.hamiltonian, (fq.Q, fq.P), self.hbar0)
            _, vecs = np.linalg.eigh(0.5 * (hq + hq.conj().T))
            psi = vecs[:, 0]
            width = np.sqrt(self.hbar0)
            a = _load_vector(self.cfg.a_vector, self.gp, width)
            b = _load_vector(self.cfg.b_vector, self.gq, width)
            v = embed_quantum_state(psi, a, b, self.r.c_q, self.r.c_p, self.r, gq=self.gq, gp=self.gp, hbar=self.hbar0)
            return HybridDensity.pure(v)
        return classical_state(self.samples, self.r, self.gq, self.gp)

    @cached_property
    def samples(self) -> np.ndarray:
        spec = self.cfg.state
        if spec.kind == "classical-gaussian":
            return classical_gaussian_samples(self.gq, self.gp, *spec.params)
        if spec.kind == "delta":
            return delta_samples(self.gq, self.gp, *spec.params)
        raise ValueError(f"state {spec.kind} has no phase-space samples")

    @cached_property
    def oracle_value(self) -> float:
        """Ground energy of the single-space problem, or the phase-space Riemann sum."""
        if self.cfg.state.kind == "embedded-ground-state":
            rep = coordinate_rep(self.gq, self.hbar0)
            return float(oracles.solve_quantum_1d(self.hamiltonian, rep, 1).values[0])
        return oracles.classical_phase_average(self.samples, classical_limit(self.hamiltonian), self.gq, self.gp)

    def pair(self, h: float) -> tuple[SemiclassicalParams, HybridOperator, HybridOperator]:
        params = SemiclassicalParams(h, self.cfg.h0)
        fq = coordinate_rep(self.gq, params.hbar)
        fp = momentum_rep(self.gp, params.hbar)
        return params, assemble_qtilde(params, fq, fp, self.r), assemble_ptilde(params, fq, fp, self.r)

    def observable(self, h: float) -> tuple[SemiclassicalParams, HybridOperator, HybridOperator, HybridOperator]:
        params, qt, pt = self.pair(h)
        H = evaluate_operator_poly(self.hamiltonian, (qt, pt), params.hbar)
        # Hermitian part: finite grids satisfy the commutation relation only approximately
        H = (H + H.adjoint()).scale(0.5)
        return params, qt, pt, H


def lowest_spectrum(H: HybridOperator, count: int = SPECTRUM_SIZE) -> np.ndarray:
    """Lowest eigenvalues of a Hermitian operator, sector by sector when possible."""
    if H.is_structured and H.is_r_diagonal():
        blocks = [H.sector_block(s) for s in (0, 1)]
        vals = np.concatenate([np.linalg.eigvalsh(b) for b in blocks])
    else:
        vals = np.linalg.eigvalsh(H.matrix)
    return np.sort(vals)[:count]


def evaluate_point(setup: SweepSetup, h: float) -> SweepRecord:
    try:
        params, qt, pt, H = setup.observable(h)
        ccr = commutator_residual(qt, pt, params.hbar, setup.test_states)
        dq = operator_norm(qt - setup.q_cm)
        dp = operator_norm(pt - setup.p_cm)
        spectrum = tuple(float(x) for x in lowest_spectrum(H))
        mean = mean_value(setup.density, H)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise type(exc)(f"h = {h!r}: {exc}") from exc
    oracle = setup.oracle_value
    return SweepRecord(h, params.hbar, ccr, dq, dp, spectrum, mean, oracle, abs(mean - oracle))


def workers_from_env(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    n = int(raw)
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1, got {raw!r}")
    return n


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list[SweepRecord]:
    """Evaluate ``cfg.steps`` equally spaced h values from 0 to h0 inclusive.

    Only the two endpoint rows carry physical meaning; interior rows are
    diagnostics of the interpolating family.
    """
    workers = workers_from_env() if workers is None else workers
    setup = SweepSetup(cfg)
    # shared lazy state is built before any worker starts
    setup.density, setup.oracle_value  # noqa: B018
    hs = cfg.h_values()
    log.info("sweep: %d points, N_q=%d N_p=%d, workers=%d", len(hs), cfg.N_q, cfg.N_p, workers)
    if workers == 1:
        records = [evaluate_point(setup, h) for h in hs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda h: evaluate_point(setup, h), hs))
    records.sort(key=lambda rec: rec.h)
    return records
