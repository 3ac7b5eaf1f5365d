"""Invariant verification suite.

Each check records a measured value and the bound it must not exceed.
Exact identities use bound 0; symbolic identities measure the number of
failing samples.  ``break_nyquist`` rebuilds every derivative with the
unpaired frequency row kept, a deliberate fault the CCR group must catch.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import oracles
from ..ncpoly import (
    HBAR,
    ClassicalPolynomial,
    P,
    Q,
    WeylPolynomial,
    adjoint,
    classical_limit,
    commutator,
    divide_by_ihbar,
    eval_classical,
    from_weyl_basis,
    multiply,
    normal_order,
    symmetrized_poisson,
    symmetrized_product,
    to_weyl_basis,
    weyl_monomial,
)
from ..ncpoly.sampling import random_coefficient, random_nc_polynomial, random_weyl_polynomial, random_word
from ..repspace import (
    HybridDensity,
    HybridOperator,
    RFactor,
    SemiclassicalParams,
    assemble_pair_cm,
    assemble_pair_qm,
    assemble_ptilde,
    assemble_qtilde,
    classical_gaussian_samples,
    classical_state,
    commutant_witness,
    commutator_residual,
    compatible_momentum_length,
    coordinate_rep,
    doubled_observable,
    embed_quantum_state,
    evaluate_operator_poly,
    fourier_state,
    gaussian_profile,
    gaussian_test_states,
    hybrid_commutator,
    inverse_fourier_state,
    mean_value,
    momentum_rep,
    operator_norm,
    point_state,
    spectral_derivative,
    uniform_grid,
)
from .config import SweepConfig

__all__ = ["CheckResult", "VerifyReport", "run_verify"]

# fixed reference setup for the quantum-branch numerics
REF_N, REF_L = 64, 20.0


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    measured: float
    bound: float
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.bound)  # NaN fails

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.group}.{self.name:<42s} measured={self.measured:.3e}  bound={self.bound:.1e}"


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{len(self.checks) - len(self.failures())}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _count(pred, samples) -> int:
    return sum(0 if pred(*s) else 1 for s in samples)


def _max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _sector_diff(a: HybridOperator, b: HybridOperator) -> float:
    """Relative max-abs difference, sector by sector when both are r-diagonal."""
    if a.is_structured and b.is_structured and a.is_r_diagonal() and b.is_r_diagonal():
        pairs = [(a.sector_block(s), b.sector_block(s)) for s in (0, 1)]
    else:
        pairs = [(a.matrix, b.matrix)]
    num = max(_max_abs(x - y) for x, y in pairs)
    den = max(max(_max_abs(x), _max_abs(y)) for x, y in pairs)
    return num / max(den, 1.0)


def _is_zero_op(op: HybridOperator) -> float:
    if op.is_structured and not op.terms:
        return 0.0
    return _max_abs(op.matrix)


# -- ncpoly --------------------------------------------------------------------

def _ncpoly_checks(rng: random.Random):
    yield "ccr_exact", 0.0, lambda: float(
        (commutator(Q, P) != HBAR.scale(1j)) + (not commutator(Q, Q).is_zero()) + (not commutator(P, P).is_zero())
    )

    def canonical():
        pairs = []
        while len(pairs) < 1000:
            w1 = random_word(rng, 10)
            w2 = random_word(rng, 10 - len(w1))
            pairs.append((w1, w2))
        return float(_count(lambda a, b: multiply(normal_order(a), normal_order(b)) == normal_order(a + b), pairs))

    yield "canonical_form", 0.0, canonical

    def double_path():
        cells = [(n, d - n) for d in range(9) for n in range(d + 1)]
        return float(_count(lambda n, m: weyl_monomial(n, m, "enumerate") == weyl_monomial(n, m, "recursive"), cells))

    yield "weyl_double_path", 0.0, double_path

    def hermiticity():
        cells = [(n, d - n) for d in range(7) for n in range(d + 1)]
        return float(_count(lambda n, m: adjoint(weyl_monomial(n, m)) == weyl_monomial(n, m), cells))

    yield "weyl_hermiticity", 0.0, hermiticity

    def round_trip():
        polys = [(random_nc_polynomial(rng, 8, 6, 2),) for _ in range(100)]
        return float(_count(lambda f: from_weyl_basis(to_weyl_basis(f)) == f, polys))

    yield "basis_round_trip", 0.0, round_trip

    unit = WeylPolynomial.monomial(0, 0)

    def circ_laws():
        triples = [tuple(random_weyl_polynomial(rng, 6, 3, 1) for _ in range(3)) for _ in range(200)]

        def ok(a, b, c):
            return (
                symmetrized_product(a, b) == symmetrized_product(b, a)
                and symmetrized_product(symmetrized_product(a, b), c) == symmetrized_product(a, symmetrized_product(b, c))
                and symmetrized_product(unit, a) == a == symmetrized_product(a, unit)
            )

        return float(_count(ok, triples))

    yield "circ_commutative_associative_unit", 0.0, circ_laws

    def bracket_laws():
        triples = [tuple(random_weyl_polynomial(rng, 4, 3, 1) for _ in range(3)) for _ in range(100)]
        B, M = symmetrized_poisson, symmetrized_product

        def ok(f, g, h):
            s = random_coefficient(rng)
            return (
                B(f, g) == -B(g, f)
                and B(f, g.scale(s) + h) == B(f, g).scale(s) + B(f, h)
                and (B(f, B(g, h)) + B(g, B(h, f)) + B(h, B(f, g))).is_zero()
                and B(f, M(g, h)) == M(B(f, g), h) + M(g, B(f, h))
            )

        bad = _count(ok, triples)
        q, p = WeylPolynomial.monomial(1, 0), WeylPolynomial.monomial(0, 1)
        return float(bad + (B(q, p) != unit))

    yield "bracket_antisym_bilinear_jacobi_leibniz", 0.0, bracket_laws

    def degree2():
        pairs = [(random_nc_polynomial(rng, 2, 4, 1), random_nc_polynomial(rng, 2, 4, 1)) for _ in range(200)]
        return float(
            _count(
                lambda f, g: from_weyl_basis(symmetrized_poisson(to_weyl_basis(f), to_weyl_basis(g)))
                == divide_by_ihbar(commutator(f, g)),
                pairs,
            )
        )

    yield "degree2_bracket_commutator", 0.0, degree2

    def homomorphism():
        monos = [WeylPolynomial.monomial(n, d - n) for d in range(5) for n in range(d + 1)]
        pairs = [(a, b) for a in monos for b in monos if a.degree() + b.degree() <= 4]
        cl = lambda w: classical_limit(from_weyl_basis(w))  # noqa: E731

        def ok(a, b):
            return cl(symmetrized_product(a, b)) == oracles.classical_product(cl(a), cl(b)) and cl(
                symmetrized_poisson(a, b)
            ) == oracles.classical_poisson(cl(a), cl(b))

        return float(_count(ok, pairs))

    yield "classical_limit_homomorphism", 0.0, homomorphism


# -- repspace ------------------------------------------------------------------

def _repspace_checks(cfg: SweepConfig, rng: random.Random, nyquist: str):
    hbar0 = cfg.hbar0
    r = RFactor(cfg.c_q, cfg.c_p)
    gq = uniform_grid(cfg.N_q, cfg.L_q)
    gp = uniform_grid(cfg.N_p, compatible_momentum_length(cfg.N_p, cfg.L_q, hbar0))
    fq0, fp0 = coordinate_rep(gq, hbar0, nyquist=nyquist), momentum_rep(gp, hbar0, nyquist=nyquist)
    q_qm, p_qm = assemble_pair_qm(fq0, fp0, r)
    q_cm, p_cm = assemble_pair_cm(coordinate_rep(gq, 0.0), momentum_rep(gp, 0.0), r)
    cache: dict = {}

    yield "projector_identities", 0.0, lambda: max(r.projector_identities().values())

    def tilde(h):
        params = SemiclassicalParams(h, cfg.h0)
        fq = coordinate_rep(gq, params.hbar, nyquist=nyquist)
        fp = momentum_rep(gp, params.hbar, nyquist=nyquist)
        return assemble_qtilde(params, fq, fp, r), assemble_ptilde(params, fq, fp, r)

    def endpoints():
        q1, p1 = tilde(cfg.h0)
        q0, p0 = tilde(0.0)
        eq = [q1.matrix, p1.matrix, q0.matrix, p0.matrix]
        ref = [q_qm.matrix, p_qm.matrix, q_cm.matrix, p_cm.matrix]
        return float(sum(0 if np.array_equal(a, b) else 1 for a, b in zip(eq, ref)))

    yield "endpoint_bitwise", 0.0, endpoints
    yield "cm_pair_commutes", 0.0, lambda: _is_zero_op(hybrid_commutator(q_cm, p_cm))

    def witness():
        w = commutant_witness(fq0, fp0, r)
        return max(_is_zero_op(hybrid_commutator(w, q_qm)), _is_zero_op(hybrid_commutator(w, p_qm)))

    yield "commutant_witness", 0.0, witness

    def doubling():
        worst = 0.0
        for _ in range(6):
            f = random_nc_polynomial(rng, 6, 4, 2)
            worst = max(worst, _sector_diff(evaluate_operator_poly(f, (q_qm, p_qm), hbar0), doubled_observable(f, fq0, fp0, r)))
        return worst

    yield "doubling_identity", 1e-12, doubling

    def classical_eval():
        worst = 0.0
        for _ in range(4):
            w = random_weyl_polynomial(rng, 4, 4, 0, complex_=False)
            f = from_weyl_basis(w)
            blocks = [evaluate_operator_poly(f, (q_cm, p_cm), 0.0).sector_block(s) for s in (0, 1)]
            target = np.array([[eval_classical(classical_limit(f), x, y) for y in gp.points] for x in gq.points]).ravel()
            scale = max(1.0, _max_abs(target))
            for b in blocks:
                off = b - np.diag(np.diag(b))
                worst = max(worst, _max_abs(off), _max_abs(np.diag(b) - target) / scale)
        return worst

    yield "classical_evaluation_diagonal", 1e-13, classical_eval

    def point_probe():
        f = from_weyl_basis(WeylPolynomial({(2, 0, 0): 0.5, (0, 2, 0): 0.5, (1, 1, 0): 0.25, (3, 0, 0): Fraction(-1, 10)}))
        H = evaluate_operator_poly(f, (q_cm, p_cm), 0.0)
        fc = classical_limit(f)
        leak, value = 0.0, 0.0
        for c_q, c_p in ((1, 0), (0, 1), (math.sqrt(0.5), 1j * math.sqrt(0.5)), (0.6, -0.8)):
            rr = RFactor(c_q, c_p)
            for _ in range(8):
                i, j = rng.randrange(gq.n_points), rng.randrange(gp.n_points)
                v = point_state(i, j, rr, H.dims).amplitudes
                hv = H.apply(v)
                on = v != 0
                leak = max(leak, _max_abs(hv[~on]))
                lam = eval_classical(fc, gq.points[i], gp.points[j])
                value = max(value, _max_abs(hv[on] / v[on] - lam) / max(1.0, abs(lam)))
        return leak, value

    yield "point_state_leakage", 0.0, lambda: cache.setdefault("p", point_probe())[0]
    yield "point_state_eigenvalue", 1e-14, lambda: cache.setdefault("p", point_probe())[1]

    samples = classical_gaussian_samples(gq, gp, 0.5, -0.3, 1.0, 1.2)
    rho = classical_state(samples, r, gq, gp)

    def state_props():
        cell = gq.spacing * gp.spacing
        trace_err = abs(rho.trace() * cell - 1)
        herm = 0.0 if rho.is_hermitian(0.0) else 1.0
        neg = max(0.0, -rho.min_eigenvalue())
        return max(trace_err, herm, neg)

    yield "classical_state_trace_psd", 1e-13, state_props

    def riemann():
        f = from_weyl_basis(WeylPolynomial({(2, 0, 0): 0.5, (0, 2, 0): 0.5, (1, 2, 0): Fraction(1, 5)}))
        H = evaluate_operator_poly(f, (q_cm, p_cm), 0.0)
        ref = oracles.classical_phase_average(samples, classical_limit(f), gq, gp)
        return abs(mean_value(rho, H) - ref) / max(1.0, abs(ref))

    yield "mean_value_riemann_sum", 1e-12, riemann

    def affine():
        m0 = [tilde(0.0)[k] for k in (0, 1)]
        m1 = [tilde(cfg.h0)[k] for k in (0, 1)]
        worst = 0.0
        for t in (0.25, 0.5, 0.75):
            mt = tilde(t * cfg.h0)
            for k in (0, 1):
                for s in (0, 1):
                    a, b, c = m0[k].sector_block(s), m1[k].sector_block(s), mt[k].sector_block(s)
                    worst = max(worst, _max_abs(c - (a + t * (b - a))) / max(1.0, _max_abs(b)))
        return worst

    yield "semiclassical_affine", 1e-12, affine

    def monotone():
        drop = 0.0
        prev = (-1.0, -1.0)
        for h in cfg.h_values():
            qt, pt = tilde(h)
            cur = (operator_norm(qt - q_cm), operator_norm(pt - p_cm))
            drop = max(drop, prev[0] - cur[0], prev[1] - cur[1])
            prev = cur
        return max(drop, 0.0)

    yield "distance_monotone", 1e-12, monotone

    def fourier():
        # square, compatible grids of the reference setup
        g1 = uniform_grid(REF_N, REF_L)
        g2 = uniform_grid(REF_N, compatible_momentum_length(REF_N, REF_L, hbar0))
        worst_norm, worst_trip = 0.0, 0.0
        for center, width, k in ((0.0, 1.0, 0.0), (1.5, 0.8, 1.2), (-2.0, 1.3, -0.7)):
            psi = gaussian_profile(g1, center, width, k) / math.sqrt(g1.spacing)
            phi = fourier_state(psi, g1, g2, hbar0)
            n_in = np.sum(np.abs(psi) ** 2) * g1.spacing
            n_out = np.sum(np.abs(phi) ** 2) * g2.spacing
            worst_norm = max(worst_norm, abs(n_out - n_in))
            worst_trip = max(worst_trip, _max_abs(inverse_fourier_state(phi, g1, g2, hbar0) - psi))
        return worst_norm, worst_trip

    yield "fourier_unitary", 1e-10, lambda: cache.setdefault("f", fourier())[0]
    yield "fourier_round_trip", 1e-9, lambda: cache.setdefault("f", fourier())[1]


def _ccr_checks(cfg: SweepConfig, nyquist: str):
    hbar0 = cfg.hbar0
    yield "derivative_real_antisymmetric", 0.0, lambda: max(
        _max_abs(D.imag) + _max_abs(D + D.T)
        for D in (spectral_derivative(REF_N, REF_L, nyquist), spectral_derivative(cfg.N_q, cfg.L_q, nyquist))
    )

    def residual():
        gq = uniform_grid(REF_N, REF_L)
        gp = uniform_grid(REF_N, compatible_momentum_length(REF_N, REF_L, hbar0))
        r = RFactor(cfg.c_q, cfg.c_p)
        q, p = assemble_pair_qm(coordinate_rep(gq, hbar0, nyquist=nyquist), momentum_rep(gp, hbar0, nyquist=nyquist), r)
        return commutator_residual(q, p, hbar0, gaussian_test_states(gq, gp))

    yield "qm_pair_residual", 1e-6, residual


# -- oracles -------------------------------------------------------------------

def _oracle_checks(cfg: SweepConfig, nyquist: str):
    hbar0 = cfg.hbar0
    osc = from_weyl_basis(WeylPolynomial({(2, 0, 0): 0.5, (0, 2, 0): 0.5}))

    def rep(n):
        return coordinate_rep(uniform_grid(n, REF_L), hbar0, nyquist=nyquist)

    def brute():
        cells = [(n, d - n) for d in range(9) for n in range(d + 1)]
        return float(_count(lambda n, m: oracles.brute_force_weyl(n, m) == weyl_monomial(n, m), cells))

    yield "brute_force_vs_weyl", 0.0, brute

    cache: dict = {}

    def solved(n):
        if n not in cache:
            cache[n] = oracles.solve_quantum_1d(osc, rep(n), 4)
        return cache[n]

    def relative_residual():
        r = rep(REF_N)
        M = evaluate_operator_poly(osc, (r.Q, r.P), hbar0)
        return float(np.max(solved(REF_N).residuals)) / float(np.linalg.norm(0.5 * (M + M.conj().T), 2))

    def orthonormality():
        V = solved(REF_N).vectors
        return _max_abs(V.conj().T @ V - np.eye(V.shape[1]))

    yield "eigen_relative_residual", 1e-8, relative_residual
    yield "eigen_orthonormality", 1e-10, orthonormality

    exact = hbar0 * (np.arange(4) + 0.5)
    yield "oscillator_spectrum", 1e-7, lambda: _max_abs(solved(REF_N).values - exact)
    yield "grid_refinement", 1e-7, lambda: _max_abs(solved(REF_N).values - solved(2 * REF_N).values)

    g_unit = uniform_grid(64, 2.0)
    uniform = np.full((64, 64), 1 / (g_unit.length * g_unit.length))

    def average(f):
        return oracles.classical_phase_average(uniform, ClassicalPolynomial(f), g_unit, g_unit)

    yield "phase_average_normalization", 1e-12, lambda: abs(average({(0, 0): 1}) - 1)
    yield "phase_average_q2", 1e-3, lambda: abs(average({(2, 0): 1}) - 1 / 3)

    def embedded_ground():
        gq = uniform_grid(REF_N, REF_L)
        gp = uniform_grid(REF_N, compatible_momentum_length(REF_N, REF_L, hbar0))
        r = RFactor(cfg.c_q, cfg.c_p)
        fq, fp = coordinate_rep(gq, hbar0, nyquist=nyquist), momentum_rep(gp, hbar0, nyquist=nyquist)
        psi = solved(REF_N).vectors[:, 0]
        w = math.sqrt(hbar0)
        a, b = gaussian_profile(gp, 0, w), gaussian_profile(gq, 0, w)
        v = embed_quantum_state(psi, a, b, r.c_q, r.c_p, r, gq=gq, gp=gp, hbar=hbar0)
        q, p = assemble_pair_qm(fq, fp, r)
        H = evaluate_operator_poly(osc, (q, p), hbar0)
        H = (H + H.adjoint()).scale(0.5)
        return abs(mean_value(HybridDensity.pure(v), H) - float(solved(REF_N).values[0]))

    yield "embedded_ground_energy", 1e-7, embedded_ground


# -- driver --------------------------------------------------------------------

def run_verify(
    cfg: SweepConfig | None = None,
    *,
    break_nyquist: bool = False,
    seed: int = 20240101,
    echo: Callable[[str], None] | None = None,
) -> VerifyReport:
    """Run every invariant check; ``echo`` receives each result line as it completes."""
    cfg = cfg or SweepConfig()
    nyquist = "keep" if break_nyquist else "zero"
    rng = random.Random(seed)
    groups = [
        ("ncpoly", _ncpoly_checks(rng)),
        ("ccr", _ccr_checks(cfg, nyquist)),
        ("repspace", _repspace_checks(cfg, rng, nyquist)),
        ("oracles", _oracle_checks(cfg, nyquist)),
    ]
    report = VerifyReport()
    for group, checks in groups:
        for name, bound, fn in checks:
            t0 = time.perf_counter()
            try:
                measured = float(fn())
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                measured = math.inf
                if echo:
                    echo(f"error in {group}.{name}: {exc}")
            result = CheckResult(group, name, measured, bound, time.perf_counter() - t0)
            report.checks.append(result)
            if echo:
                echo(result.line())
    return report
