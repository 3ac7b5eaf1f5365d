from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from hybridalg.ncpoly import NCPolynomial, WeylPolynomial, classical_limit, eval_classical, from_weyl_basis
from hybridalg.repspace import (
    Grid,
    HybridDensity,
    HybridOperator,
    HybridVector,
    KronTerm,
    RFactor,
    SemiclassicalParams,
    assemble_pair_cm,
    assemble_pair_cm_minimal,
    assemble_pair_qm,
    assemble_ptilde,
    assemble_qtilde,
    classical_gaussian_samples,
    classical_state,
    commutant_witness,
    commutator_residual,
    compatible_momentum_length,
    coordinate_rep,
    delta_samples,
    delta_state,
    doubled_observable,
    embed_quantum_state,
    evaluate_operator_poly,
    fourier_state,
    gaussian_profile,
    gaussian_test_states,
    hybrid_commutator,
    inverse_fourier_state,
    load_binary,
    load_text,
    mean_value,
    momentum_rep,
    operator_norm,
    point_state,
    save_binary,
    save_text,
    spectral_derivative,
    uniform_grid,
)

from .strategies import nc_polys

H0 = 2 * math.pi
HALF = Fraction(1, 2)
OSC = from_weyl_basis(WeylPolynomial({(2, 0, 0): HALF, (0, 2, 0): HALF}))
S = math.sqrt(0.5)


def grids(n=64, L=20.0, hbar=1.0):
    return uniform_grid(n, L), uniform_grid(n, compatible_momentum_length(n, L, hbar))


def qm_setup(n=64, L=20.0, hbar=1.0, r=None):
    gq, gp = grids(n, L, hbar)
    r = r or RFactor(S, S)
    fq, fp = coordinate_rep(gq, hbar), momentum_rep(gp, hbar)
    return gq, gp, fq, fp, r


# -- grids and the derivative ------------------------------------------------------------------

@pytest.mark.parametrize(
    "n,L,expected",
    [(4, 4, [-2, -1, 0, 1]), (2, 2, [-1, 0])],
)
def test_uniform_grid_points(n, L, expected):
    assert_array_equal(uniform_grid(n, L).points, expected)


def test_uniform_grid_spacing():
    g = uniform_grid(8, 16)
    assert g.spacing == 2 and g.points[0] == -8


@pytest.mark.parametrize("n,L", [(3, 1.0), (0, 1.0), (4, 0.0), (4, -2.0)])
def test_grid_validation(n, L):
    with pytest.raises(ValueError):
        Grid(n, L)


@given(st.integers(1, 64).map(lambda k: 2 * k), st.floats(0.5, 100))
def test_grid_invariants(n, L):
    g = uniform_grid(n, L)
    d = np.diff(g.points)
    assert np.all(d > 0)
    assert_allclose(d, g.spacing, rtol=1e-12)
    assert math.isclose(g.spacing * n, L, rel_tol=1e-15)


def test_grid_points_are_read_only():
    g = uniform_grid(8, 1.0)
    with pytest.raises(ValueError):
        g.points[0] = 1.0


@pytest.mark.parametrize("m", [-31, -7, -1, 0, 1, 5, 31])
def test_derivative_plane_wave(m):
    n, L = 64, 20.0
    g = uniform_grid(n, L)
    k = 2 * math.pi * m / L
    f = np.exp(1j * k * g.points)
    assert np.max(np.abs(spectral_derivative(n, L) @ f - 1j * k * f)) <= 1e-12


def test_derivative_kills_constants():
    assert np.max(np.abs(spectral_derivative(32, 7.0) @ np.ones(32))) <= 1e-13


def test_derivative_is_real_antisymmetric():
    D = spectral_derivative(16, 3.0)
    assert_array_equal(D.imag, 0)
    assert_array_equal(D, -D.T)


def test_derivative_matches_cot_closed_form():
    # periodic sinc differentiation: D_jk = (π/L) (-1)^(j-k) cot(π (j-k)/n) for even n
    n, L = 32, 10.0
    j = np.arange(n)
    diff = j[:, None] - j[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ref = (math.pi / L) * (-1.0) ** diff / np.tan(math.pi * diff / n)
    ref[diff == 0] = 0
    assert np.max(np.abs(spectral_derivative(n, L) - ref)) <= 1e-12


def test_keep_nyquist_breaks_antisymmetry():
    D = spectral_derivative(16, 3.0, nyquist="keep")
    assert np.max(np.abs(D.imag)) > 0.1
    with pytest.raises(ValueError):
        spectral_derivative(16, 3.0, nyquist="drop")


def test_position_derivative_commutator_on_gaussian():
    n, L = 64, 20.0
    g = uniform_grid(n, L)
    D = spectral_derivative(n, L)
    X = np.diag(g.points)
    v = gaussian_profile(g)
    assert np.max(np.abs((X @ D - D @ X) @ v + v)) <= 1e-8


# -- factor representations ---------------------------------------------------------------------

def test_coordinate_rep_examples():
    g = uniform_grid(16, 8.0)
    assert_array_equal(coordinate_rep(g, 0.0).P, np.zeros((16, 16)))
    assert_array_equal(coordinate_rep(g, 1.0).Q, np.diag(g.points))
    assert_allclose(coordinate_rep(g, 2.0).P, -2j * spectral_derivative(16, 8.0), rtol=0, atol=0)


def test_momentum_rep_sign():
    g = uniform_grid(32, 12.0)
    fp = momentum_rep(g, 1.0)
    v = gaussian_profile(g, 0.5, 1.3)
    assert_allclose(fp.Q @ v, 1j * (spectral_derivative(32, 12.0) @ v), rtol=0, atol=1e-15)
    assert_array_equal(fp.P, np.diag(g.points))


@pytest.mark.parametrize("make", [coordinate_rep, momentum_rep])
def test_factor_operators_hermitian(make):
    f = make(uniform_grid(24, 5.0), 0.7)
    for M in (f.Q, f.P):
        assert np.max(np.abs(M - M.conj().T)) <= 1e-15


def test_negative_hbar_rejected():
    with pytest.raises(ValueError):
        coordinate_rep(uniform_grid(4, 1.0), -1.0)


def test_compatible_momentum_length():
    assert math.isclose(compatible_momentum_length(64, 20.0, 1.0), 2 * math.pi * 64 / 20)


# -- R factor and parameters ------------------------------------------------------------------------

def test_projector_identities_exact():
    errs = RFactor(S, S).projector_identities()
    assert len(errs) == 6
    assert all(v == 0.0 for v in errs.values())


def test_weight_condition_enforced():
    with pytest.raises(ValueError):
        RFactor(1, 1)
    RFactor(0.6, 0.8j)


def test_semiclassical_params():
    p = SemiclassicalParams(math.pi)
    assert p.hbar0 == 1.0 and p.hbar == 0.5 and p.mixing == 0.5
    assert SemiclassicalParams(0.0).hbar == 0.0
    assert SemiclassicalParams(H0, H0).mixing == 0.0
    with pytest.raises(ValueError):
        SemiclassicalParams(7.0)
    with pytest.raises(ValueError):
        SemiclassicalParams(-0.1)


# -- hybrid operators ----------------------------------------------------------------------------

def _random_op(rng, dims, count=3):
    nq, np_, _ = dims
    terms = []
    for _ in range(count):
        a = rng.normal(size=(nq, nq)) + 1j * rng.normal(size=(nq, nq))
        b = rng.normal(size=(np_, np_)) + 1j * rng.normal(size=(np_, np_))
        r = rng.normal(size=(2, 2)) + 0j
        terms.append(KronTerm(a, b if rng.random() < 0.7 else None, r))
    return HybridOperator(dims, terms)


def _dense(op):
    out = 0
    nq, np_, _ = op.dims
    for t in op.terms:
        a = np.eye(nq) if t.a is None else t.a
        b = np.eye(np_) if t.b is None else t.b
        out = out + np.kron(np.kron(a, b), t.r)
    return out


def test_structured_operator_matches_dense():
    rng = np.random.default_rng(1)
    dims = (3, 4, 2)
    A, B = _random_op(rng, dims), _random_op(rng, dims)
    v = rng.normal(size=24) + 1j * rng.normal(size=24)
    assert_allclose(A.matrix, _dense(A), atol=1e-13)
    assert_allclose((A @ B).matrix, _dense(A) @ _dense(B), atol=1e-11)
    assert_allclose((A + B).matrix, _dense(A) + _dense(B), atol=1e-13)
    assert_allclose(A.adjoint().matrix, _dense(A).conj().T, atol=1e-13)
    assert_allclose(A.apply(v), _dense(A) @ v, atol=1e-12)
    assert_allclose(hybrid_commutator(A, B).matrix, _dense(A) @ _dense(B) - _dense(B) @ _dense(A), atol=1e-11)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        HybridOperator.identity((2, 2, 2)) + HybridOperator.identity((2, 4, 2))
    with pytest.raises(ValueError):
        HybridOperator((2, 2, 2), matrix=np.eye(7))


def test_sector_block():
    _, _, fq, fp, r = qm_setup(8, 4.0)
    q, _ = assemble_pair_qm(fq, fp, r)
    M = q.matrix
    assert_array_equal(q.sector_block(0), M[0::2, 0::2])
    assert_array_equal(q.sector_block(1), M[1::2, 1::2])
    assert q.is_r_diagonal()


def test_hybrid_vector_norm_and_inner():
    v = HybridVector((1, 1, 2), np.array([3, 4j]))
    assert v.norm() == 5.0
    assert v.inner(v) == 25
    with pytest.raises(ValueError):
        HybridVector((1, 1, 2), np.array([1, np.inf]))


# -- assembly --------------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def n32():
    gq, gp = grids(32)
    r = RFactor(S, S)
    qm = assemble_pair_qm(coordinate_rep(gq, 1.0), momentum_rep(gp, 1.0), r)
    cm = assemble_pair_cm(coordinate_rep(gq, 0.0), momentum_rep(gp, 0.0), r)
    return gq, gp, r, qm, cm


def _tilde(gq, gp, r, h):
    params = SemiclassicalParams(h, H0)
    fq, fp = coordinate_rep(gq, params.hbar), momentum_rep(gp, params.hbar)
    return params, assemble_qtilde(params, fq, fp, r), assemble_ptilde(params, fq, fp, r)


def test_qtilde_at_h0_is_qm_pair_bitwise(n32):
    gq, gp, r, (q, p), _ = n32
    _, qt, pt = _tilde(gq, gp, r, H0)
    assert_array_equal(qt.matrix, q.matrix)
    assert_array_equal(pt.matrix, p.matrix)


def test_qtilde_at_zero_is_cm_pair_bitwise(n32):
    gq, gp, r, _, (q, p) = n32
    _, qt, pt = _tilde(gq, gp, r, 0.0)
    assert_array_equal(qt.matrix, q.matrix)
    assert_array_equal(pt.matrix, p.matrix)


def test_qtilde_midpoint_distance_bound(n32):
    gq, gp, r, _, (qcm, _) = n32
    params, qt, _ = _tilde(gq, gp, r, H0 / 2)
    d_norm = np.linalg.norm(spectral_derivative(gp.n_points, gp.length), 2)
    bound = np.max(np.abs(gq.points)) * params.h / H0 + params.hbar * d_norm
    dist = operator_norm(qt - qcm)
    assert 0 < dist <= bound * (1 + 1e-12)
    assert math.isclose(dist, np.linalg.norm((qt - qcm).matrix, 2), rel_tol=1e-10)


def test_assembly_rejects_wrong_hbar(n32):
    gq, gp, r, _, _ = n32
    with pytest.raises(ValueError):
        assemble_qtilde(SemiclassicalParams(1.0), coordinate_rep(gq, 1.0), momentum_rep(gp, 1.0), r)
    with pytest.raises(ValueError):
        assemble_pair_qm(momentum_rep(gp, 1.0), coordinate_rep(gq, 1.0), r)


def test_qm_commutator_residual():
    gq, gp, fq, fp, r = qm_setup()
    q, p = assemble_pair_qm(fq, fp, r)
    assert commutator_residual(q, p, 1.0, gaussian_test_states(gq, gp)) <= 1e-6


def test_midpoint_commutator_residual():
    gq, gp = grids(64)
    params, qt, pt = _tilde(gq, gp, RFactor(S, S), H0 / 2)
    assert commutator_residual(qt, pt, params.hbar, gaussian_test_states(gq, gp)) <= 1e-6


def test_cm_commutator_residual_is_zero(n32):
    gq, gp, _, _, (q, p) = n32
    assert commutator_residual(q, p, 0.0, gaussian_test_states(gq, gp)) == 0.0


def test_commutator_residual_needs_states(n32):
    _, _, _, (q, p), _ = n32
    with pytest.raises(ValueError):
        commutator_residual(q, p, 1.0, [])


def test_commutant_witness_commutes_exactly(n32):
    gq, gp, r, (q, p), _ = n32
    w = commutant_witness(coordinate_rep(gq, 1.0), momentum_rep(gp, 1.0), r)
    for x in (q, p):
        assert not hybrid_commutator(w, x).matrix.any()
    # and it is not a multiple of the identity
    assert np.linalg.matrix_rank(w.matrix - w.matrix[0, 0] * np.eye(w.size)) > 0


def test_cm_pair_commutes_exactly(n32):
    _, _, _, _, (q, p) = n32
    assert not hybrid_commutator(q, p).matrix.any()


@settings(max_examples=25)
@given(nc_polys(6, max_terms=5, max_hbar=2))
def test_doubling_identity(f):
    gq, gp, fq, fp, r = qm_setup(8, 4.0)
    q, p = assemble_pair_qm(fq, fp, r)
    lhs = evaluate_operator_poly(f, (q, p), 1.0).matrix
    rhs = doubled_observable(f, fq, fp, r).matrix
    scale = max(1.0, float(np.max(np.abs(rhs))))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


def test_evaluate_first_generator(n32):
    _, _, _, (q, p), _ = n32
    assert evaluate_operator_poly(NCPolynomial({(1, 0, 0): 1}), (q, p), 1.0).equals(q)


def test_weyl_11_on_cm_pair(n32):
    gq, gp, _, _, (q, p) = n32
    W11 = from_weyl_basis(WeylPolynomial.monomial(1, 1))
    M = evaluate_operator_poly(W11, (q, p), 0.0).matrix
    expected = np.kron(np.kron(np.diag(gq.points), np.diag(gp.points)), np.eye(2))
    assert_array_equal(M, expected)


def test_oscillator_on_single_factor():
    fq = coordinate_rep(uniform_grid(64, 20.0), 1.0)
    M = evaluate_operator_poly(OSC, (fq.Q, fq.P), 1.0)
    assert abs(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0] - 0.5) <= 1e-8


def test_evaluate_rejects_mismatched_pair():
    with pytest.raises(ValueError):
        evaluate_operator_poly(OSC, (np.eye(3), np.eye(4)), 1.0)


@pytest.mark.parametrize(
    "w",
    [
        {(2, 0, 0): HALF, (0, 2, 0): HALF},
        {(1, 1, 0): 1, (3, 0, 0): Fraction(-1, 4), (0, 0, 0): 2},
        {(2, 2, 0): 1, (0, 1, 0): 3},
    ],
)
def test_cm_evaluation_is_diagonal_with_samples(n32, w):
    gq, gp, _, _, (q, p) = n32
    f = from_weyl_basis(WeylPolynomial(w))
    H = evaluate_operator_poly(f, (q, p), 0.0)
    M = H.matrix
    assert not (M - np.diag(np.diag(M))).any()
    fc = classical_limit(f)
    samples = np.array([[eval_classical(fc, x, y) for y in gp.points] for x in gq.points])
    assert_allclose(np.diag(M), np.repeat(samples.ravel(), 2), rtol=1e-14, atol=1e-14)
    assert_allclose(np.sort(np.linalg.eigvalsh(M)), np.sort(np.repeat(samples.ravel(), 2)), atol=1e-12)


@pytest.mark.parametrize("c", [(1, 0), (0, 1), (S, S), (0.6, -0.8j)])
def test_point_states_are_exact_eigenvectors(n32, c):
    gq, gp, _, _, (q, p) = n32
    f = from_weyl_basis(WeylPolynomial({(2, 0, 0): HALF, (0, 2, 0): HALF, (1, 2, 0): 1}))
    H = evaluate_operator_poly(f, (q, p), 0.0)
    r = RFactor(*c)
    for i, j in [(0, 0), (5, 17), (31, 3)]:
        v = point_state(i, j, r, H.dims).amplitudes
        lam = eval_classical(classical_limit(f), gq.points[i], gp.points[j])
        assert_allclose(H.apply(v), lam * v, rtol=0, atol=4e-16 * max(1, abs(lam)))


def test_cm_minimal_pair(n32):
    gq, gp, _, _, (q, p) = n32
    fq, fp = coordinate_rep(gq, 0.0), momentum_rep(gp, 0.0)
    a, b = assemble_pair_cm_minimal(fq, fp)
    assert not (a @ b - b @ a).any()
    assert_array_equal(q.sector_block(0), a)
    assert_array_equal(p.sector_block(1), b)
    H = evaluate_operator_poly(OSC, (a, b), 0.0)
    samples = 0.5 * (gq.points[:, None] ** 2 + gp.points[None, :] ** 2)
    assert_allclose(np.sort(np.linalg.eigvalsh(H)), np.sort(samples.ravel()), atol=1e-12)


def test_semiclassical_family_is_affine(n32):
    gq, gp, r, _, _ = n32
    (_, q0, p0), (_, q1, p1) = _tilde(gq, gp, r, 0.0), _tilde(gq, gp, r, H0)
    for t in (0.1, 0.5, 0.9):
        _, qt, pt = _tilde(gq, gp, r, t * H0)
        assert_allclose(qt.matrix, q0.matrix + t * (q1.matrix - q0.matrix), atol=1e-12)
        assert_allclose(pt.matrix, p0.matrix + t * (p1.matrix - p0.matrix), atol=1e-12)


def test_endpoint_distances_non_decreasing(n32):
    gq, gp, r, _, (qcm, pcm) = n32
    dist = []
    for h in np.linspace(0, H0, 6):
        _, qt, pt = _tilde(gq, gp, r, float(h))
        dist.append((operator_norm(qt - qcm), operator_norm(pt - pcm)))
    d = np.array(dist)
    assert d[0, 0] == d[0, 1] == 0.0
    assert np.all(np.diff(d, axis=0) >= 0)


def test_operator_norm_matches_dense():
    gq, gp, fq, fp, r = qm_setup(8, 4.0)
    q, p = assemble_pair_qm(fq, fp, r)
    for op in (q, p, q @ p, q - p.scale(0.3)):
        assert math.isclose(operator_norm(op), np.linalg.norm(op.matrix, 2), rel_tol=1e-10)


# -- Fourier transport and embedding ------------------------------------------------------------

def test_fourier_of_ground_state():
    gq, gp = grids()
    psi = math.pi**-0.25 * np.exp(-gq.points**2 / 2)
    phi = fourier_state(psi, gq, gp, 1.0)
    assert np.max(np.abs(phi - math.pi**-0.25 * np.exp(-gp.points**2 / 2))) <= 1e-10
    assert abs(np.sum(np.abs(phi) ** 2) * gp.spacing - 1) <= 1e-10


def test_fourier_shift_theorem():
    gq, gp = grids()
    psi = math.pi**-0.25 * np.exp(-((gq.points - 0.5) ** 2) / 2)
    m = 7
    p0 = m * gp.spacing
    shifted = fourier_state(psi * np.exp(1j * p0 * gq.points), gq, gp, 1.0)
    assert np.max(np.abs(shifted - np.roll(fourier_state(psi, gq, gp, 1.0), m))) <= 1e-8


@pytest.mark.parametrize("center,width,k", [(0.0, 1.0, 0.0), (1.0, 0.7, 2.0), (-2.5, 1.5, -1.0)])
def test_fourier_unitary_and_invertible(center, width, k):
    gq, gp = grids(hbar=0.8)
    psi = gaussian_profile(gq, center, width, k) / math.sqrt(gq.spacing)
    phi = fourier_state(psi, gq, gp, 0.8)
    assert abs(np.sum(np.abs(phi) ** 2) * gp.spacing - 1) <= 1e-10
    assert np.max(np.abs(inverse_fourier_state(phi, gq, gp, 0.8) - psi)) <= 1e-9


def test_fourier_rejects_classical_and_bad_grids():
    gq, gp = grids()
    psi = gaussian_profile(gq)
    with pytest.raises(ValueError, match="hbar"):
        fourier_state(psi, gq, gp, 0.0)
    with pytest.raises(ValueError):
        fourier_state(psi, gq, uniform_grid(64, 10.0), 1.0)
    with pytest.raises(ValueError):
        fourier_state(psi[:32], gq, uniform_grid(32, gp.length), 1.0)


def test_embed_single_branch_exact():
    gq, gp, _, _, _ = qm_setup(16, 8.0)
    r = RFactor(1, 0)
    psi, a, b = gaussian_profile(gq, 0.3), gaussian_profile(gp), gaussian_profile(gq)
    v = embed_quantum_state(psi, a, b, 1, 0, r, gq=gq, gp=gp, hbar=1.0)
    assert_array_equal(v.amplitudes, np.kron(np.kron(psi, a), r.r_q))


def test_embed_is_normalized():
    gq, gp, _, _, r = qm_setup()
    psi = gaussian_profile(gq, 0.4, 0.9, 0.3)
    v = embed_quantum_state(psi, gaussian_profile(gp), gaussian_profile(gq), S, S, r, gq=gq, gp=gp, hbar=1.0)
    assert abs(v.norm() - 1) <= 1e-10


def test_embed_rejects_bad_inputs():
    gq, gp, _, _, r = qm_setup(16, 8.0)
    g = gaussian_profile(gq)
    with pytest.raises(ValueError):
        embed_quantum_state(2 * g, g, g, S, S, r, gq=gq, gp=gp, hbar=1.0)
    with pytest.raises(ValueError):
        embed_quantum_state(g, g, g, 1, 1, r, gq=gq, gp=gp, hbar=1.0)


def test_embedded_ground_state_energy():
    gq, gp, fq, fp, r = qm_setup()
    M = evaluate_operator_poly(OSC, (fq.Q, fq.P), 1.0)
    vals, vecs = np.linalg.eigh(0.5 * (M + M.conj().T))
    v = embed_quantum_state(vecs[:, 0], gaussian_profile(gp), gaussian_profile(gq), S, S, r, gq=gq, gp=gp, hbar=1.0)
    q, p = assemble_pair_qm(fq, fp, r)
    H = evaluate_operator_poly(OSC, (q, p), 1.0)
    H = (H + H.adjoint()).scale(0.5)
    assert abs(mean_value(HybridDensity.pure(v), H) - 0.5) <= 1e-7


# -- classical states and the mean-value quotient -----------------------------------------------------

def test_uniform_classical_state(n32):
    gq, gp, r, _, _ = n32
    rho = np.full((32, 32), 1 / (gq.length * gp.length))
    state = classical_state(rho, r, gq, gp)
    cell = gq.spacing * gp.spacing
    assert abs(state.trace() * cell - 1) <= 1e-13
    d = np.diag(state.matrix).reshape(32, 32, 2)
    assert np.ptp(d[..., 0]) == 0 and np.ptp(d[..., 1]) == 0


@pytest.mark.parametrize("params", [(0.0, 0.0, 1.0, 1.0), (0.5, -0.3, 1.0, 1.2), (-1.0, 2.0, 0.6, 2.0)])
def test_classical_gaussian_mean_is_riemann_sum(n32, params):
    from hybridalg import oracles

    gq, gp, r, _, (q, p) = n32
    samples = classical_gaussian_samples(gq, gp, *params)
    state = classical_state(samples, r, gq, gp)
    f = from_weyl_basis(WeylPolynomial({(2, 0, 0): HALF, (0, 2, 0): HALF, (1, 1, 0): Fraction(1, 3)}))
    H = evaluate_operator_poly(f, (q, p), 0.0)
    ref = oracles.classical_phase_average(samples, classical_limit(f), gq, gp)
    assert abs(mean_value(state, H) - ref) <= 1e-12 * max(1, abs(ref))


def test_classical_state_is_hermitian_psd(n32):
    gq, gp, r, _, _ = n32
    state = classical_state(classical_gaussian_samples(gq, gp, 0, 0, 1, 1), r, gq, gp)
    assert state.is_hermitian()
    assert state.min_eigenvalue() >= -1e-12


def test_classical_trace_product_fast_path_matches_dense(n32):
    gq, gp, r, (q, p), _ = n32
    state = classical_state(classical_gaussian_samples(gq, gp, 0.2, 0.1, 1, 1.5), RFactor(0.6, 0.8j), gq, gp)
    dense = HybridDensity.from_matrix(state.dims, state.matrix)
    A = q @ p
    assert abs(state.trace_product(A) - dense.trace_product(A)) <= 1e-9 * abs(dense.trace_product(A))


@pytest.mark.parametrize("bad", ["negative", "unnormalized", "complex", "shape"])
def test_classical_state_rejections(n32, bad):
    gq, gp, r, _, _ = n32
    rho = classical_gaussian_samples(gq, gp, 0, 0, 1, 1)
    if bad == "negative":
        rho = rho.copy()
        rho[0, 0] = -1e-3
    elif bad == "unnormalized":
        rho = 2 * rho
    elif bad == "complex":
        rho = rho * (1 + 1e-3j)
    else:
        rho = rho[:, :-2]
    with pytest.raises(ValueError):
        classical_state(rho, r, gq, gp)


@pytest.mark.parametrize("q0,p0", [(0.0, 0.0), (0.4, 0.9), (-3.3, 2.2)])
def test_delta_state_mean(n32, q0, p0):
    gq, gp, r, _, (q, p) = n32
    f = from_weyl_basis(WeylPolynomial({(2, 0, 0): HALF, (0, 2, 0): HALF, (1, 3, 0): 1}))
    H = evaluate_operator_poly(f, (q, p), 0.0)
    i, j = gq.nearest_index(q0), gp.nearest_index(p0)
    expected = eval_classical(classical_limit(f), gq.points[i], gp.points[j])
    got = mean_value(delta_state(q0, p0, r, gq, gp), H)
    assert abs(got - expected) <= 1e-13 * max(1, abs(expected))
    samples = delta_samples(gq, gp, q0, p0)
    assert np.count_nonzero(samples) == 1


def test_nearest_index_ties_go_low():
    g = uniform_grid(4, 4.0)
    assert g.nearest_index(-0.5) == 1
    assert g.nearest_index(100) == 3


def test_mean_value_of_identity():
    dims = (2, 3, 2)
    rho = HybridDensity.from_matrix(dims, np.eye(12))
    assert mean_value(rho, HybridOperator.identity(dims)) == 1.0


def test_mean_value_rejects_zero_trace():
    dims = (2, 2, 2)
    with pytest.raises(ValueError, match="trace"):
        mean_value(HybridDensity.from_matrix(dims, np.zeros((8, 8))), HybridOperator.identity(dims))


def test_mean_value_of_non_hermitian_is_complex():
    dims = (2, 2, 2)
    rho = HybridDensity.from_matrix(dims, np.eye(8))
    A = HybridOperator(dims, matrix=1j * np.eye(8))
    assert mean_value(rho, A) == 1j


# -- export ------------------------------------------------------------------------------------------

def test_text_container_round_trip_vector(tmp_path, n32):
    gq, gp, _, _, _ = n32
    v = gaussian_test_states(gq, gp)[2]
    save_text(tmp_path / "v.txt", v)
    dims, data = load_text(tmp_path / "v.txt")
    assert dims == (32, 32, 2)
    assert_array_equal(data, v.amplitudes)
    assert (tmp_path / "v.txt").read_text().startswith("dims: 32 32 2\n")


def test_text_container_round_trip_matrix_is_column_major(tmp_path):
    rng = np.random.default_rng(3)
    M = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    op = HybridOperator((2, 2, 2), matrix=M)
    save_text(tmp_path / "m.txt", op)
    lines = (tmp_path / "m.txt").read_text().splitlines()
    assert len(lines) == 65
    re_, im_ = (float(x) for x in lines[2].split(","))
    assert complex(re_, im_) == M[1, 0]
    dims, data = load_text(tmp_path / "m.txt")
    assert dims == (2, 2, 2)
    assert_array_equal(data, M)


def test_binary_container_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    M = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    save_binary(tmp_path / "m.npz", HybridOperator((2, 2, 2), matrix=M))
    dims, data = load_binary(tmp_path / "m.npz")
    assert dims == (2, 2, 2)
    assert_array_equal(data, M)


def test_text_container_errors(tmp_path):
    (tmp_path / "a.txt").write_text("1.0,0.0\n")
    with pytest.raises(ValueError, match="dims"):
        load_text(tmp_path / "a.txt")
    (tmp_path / "b.txt").write_text("dims: 2\n1.0,0.0\n")
    with pytest.raises(ValueError):
        load_text(tmp_path / "b.txt")
    (tmp_path / "c.txt").write_text("dims: 1\nfoo\n")
    with pytest.raises(ValueError, match=":2:"):
        load_text(tmp_path / "c.txt")
