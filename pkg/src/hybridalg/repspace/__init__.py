"""Finite grid realization of H_q ⊗ H_p ⊗ H_r."""

from .assembly import (
    assemble_pair_cm,
    assemble_pair_cm_minimal,
    assemble_pair_qm,
    assemble_ptilde,
    assemble_qtilde,
    commutant_witness,
    commutator_residual,
    doubled_observable,
    evaluate_operator_poly,
    operator_norm,
)
from .container import load_binary, load_text, save_binary, save_text
from .factors import FactorRep, RFactor, SemiclassicalParams, coordinate_rep, momentum_rep
from .grid import Grid, compatible_momentum_length, spectral_derivative, uniform_grid
from .hybrid import HybridDensity, HybridOperator, HybridVector, KronTerm, hybrid_commutator
from .states import (
    classical_gaussian_samples,
    classical_state,
    delta_samples,
    delta_state,
    embed_quantum_state,
    fourier_state,
    gaussian_profile,
    gaussian_test_states,
    inverse_fourier_state,
    mean_value,
    point_state,
)

__all__ = [
    "FactorRep",
    "Grid",
    "HybridDensity",
    "HybridOperator",
    "HybridVector",
    "KronTerm",
    "RFactor",
    "SemiclassicalParams",
    "assemble_pair_cm",
    "assemble_pair_cm_minimal",
    "assemble_pair_qm",
    "assemble_ptilde",
    "assemble_qtilde",
    "classical_gaussian_samples",
    "classical_state",
    "commutant_witness",
    "commutator_residual",
    "compatible_momentum_length",
    "coordinate_rep",
    "delta_samples",
    "delta_state",
    "doubled_observable",
    "embed_quantum_state",
    "evaluate_operator_poly",
    "fourier_state",
    "gaussian_profile",
    "gaussian_test_states",
    "hybrid_commutator",
    "inverse_fourier_state",
    "load_binary",
    "load_text",
    "mean_value",
    "momentum_rep",
    "operator_norm",
    "point_state",
    "save_binary",
    "save_text",
    "spectral_derivative",
    "uniform_grid",
]
