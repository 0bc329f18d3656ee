"""Unit tests for the dense Hermitian/block-operator toolbox."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_density, random_hermitian, random_spd
from qbayes.matcore import (
    ExtendedOperator,
    NotPsdError,
    RegularizationWarning,
    check_hermitian,
    hermitian_eig,
    hermitize,
    lyapunov_solve,
    partial_trace_h,
    partial_transpose_1,
    psd_sqrt,
    regularize_state,
    sym_split,
    trace_abs,
    weighted_trace_abs,
)


def test_hermitize_projects_onto_hermitian_part():
    A = np.array([[1.0, 2.0 + 1j], [0.0, 3.0]])
    H = hermitize(A)
    assert np.allclose(H, H.conj().T)
    assert np.allclose(H, (A + A.conj().T) / 2)


def test_check_hermitian_accepts_and_rejects():
    H = random_hermitian(np.random.default_rng(0), 3)
    assert np.allclose(check_hermitian(H), H)
    with pytest.raises(ValueError):
        check_hermitian(H + 1e-3 * np.array([[0, 1j, 0], [0, 0, 0], [0, 0, 0]]))


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_hermitian_eig_reconstructs(seed):
    """w, U satisfy A = U diag(w) U^dagger with orthonormal U."""
    rng = np.random.default_rng(seed)
    A = random_hermitian(rng, 4)
    w, U = hermitian_eig(A)
    assert np.allclose(U @ np.diag(w) @ U.conj().T, A, atol=1e-12)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(1)
    S = random_density(rng, 4)
    R = psd_sqrt(S)
    assert np.allclose(R @ R, S, atol=1e-12)
    assert np.allclose(R, R.conj().T)


def test_psd_sqrt_clamps_roundoff_but_rejects_negatives():
    eps = np.diag([1.0, -1e-14])
    psd_sqrt(eps)    # tiny negative eigenvalue is treated as zero
    with pytest.raises(NotPsdError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_regularize_state_passthrough_and_floor():
    rng = np.random.default_rng(2)
    S = random_density(rng, 3)
    assert regularize_state(S) is S or np.allclose(regularize_state(S), S)
    singular = np.diag([1.0, 0.0, 0.0]).astype(complex)
    with pytest.warns(RegularizationWarning):
        Sreg = regularize_state(singular)
    assert np.linalg.eigvalsh(Sreg)[0] > 0
    assert abs(np.trace(Sreg) - 1.0) < 1e-12


def test_lyapunov_solve_inverts_the_anticommutator():
    rng = np.random.default_rng(3)
    S = random_density(rng, 4)
    L_target = random_hermitian(rng, 4)
    D = (S @ L_target + L_target @ S) / 2
    L = lyapunov_solve(S, D)
    assert np.allclose(L, L_target, atol=1e-10)
    assert np.allclose(L, L.conj().T)


def test_trace_abs_sums_eigenvalue_magnitudes():
    rng = np.random.default_rng(4)
    H = random_hermitian(rng, 5)
    assert abs(trace_abs(H) - np.abs(np.linalg.eigvalsh(H)).sum()) < 1e-10
    # anti-Hermitian path: eigenvalues are purely imaginary
    assert abs(trace_abs(1j * H) - np.abs(np.linalg.eigvalsh(H)).sum()) < 1e-10
    # diagonalizable non-normal input goes through the general path
    P = np.array([[1.0, 0.3], [0.0, 1.0]])
    A = P @ np.diag([2.0, -3.0]) @ np.linalg.inv(P)
    assert abs(trace_abs(A) - 5.0) < 1e-10


def test_weighted_trace_abs_is_a_similarity_invariant():
    """TrAbs(sqrt(W) B sqrt(W)) equals the sum of |eigenvalues| of W B."""
    rng = np.random.default_rng(5)
    W = random_spd(rng, 4)
    B = rng.standard_normal((4, 4))
    B = (B - B.T) / 2
    R = psd_sqrt(W)
    direct = trace_abs(R @ B @ R)
    assert abs(weighted_trace_abs(W, B) - direct) < 1e-10
    eig_sum = np.abs(np.linalg.eigvals(W @ B)).sum()
    assert abs(weighted_trace_abs(W, B) - eig_sum) < 1e-9


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(2, 4))
@settings(max_examples=25, deadline=None)
def test_extended_operator_full_round_trip(seed, n, d):
    """Block array -> flat matrix -> block array is exact."""
    rng = np.random.default_rng(seed)
    blocks = rng.standard_normal((n, n, d, d)) + 1j * rng.standard_normal((n, n, d, d))
    op = ExtendedOperator(blocks)
    assert op.nblocks == n and op.blockdim == d
    back = ExtendedOperator.from_full(op.full(), n, d)
    assert np.array_equal(back.blocks, blocks)


def test_extended_operator_hermitian_and_block_symmetric_flags():
    rng = np.random.default_rng(6)
    H = random_hermitian(rng, 6)
    op = ExtendedOperator.from_full(H, 2, 3)
    assert op.is_hermitian()
    # Hermitian as a 6x6 matrix does not imply block symmetry
    sym, antisym = sym_split(op)
    assert sym.is_block_symmetric()
    assert np.allclose(sym.blocks + antisym.blocks, op.blocks)
    assert np.allclose(antisym.blocks, -antisym.blocks.transpose(1, 0, 2, 3))


def test_partial_trace_and_partial_transpose():
    rng = np.random.default_rng(7)
    blocks = rng.standard_normal((3, 3, 2, 2)) + 1j * rng.standard_normal((3, 3, 2, 2))
    op = ExtendedOperator(blocks)
    pt = partial_trace_h(op)
    assert pt.shape == (3, 3)
    assert np.allclose(pt[1, 2], np.trace(blocks[1, 2]))
    flipped = partial_transpose_1(op)
    assert np.array_equal(flipped.blocks[0, 2], blocks[2, 0])
    # involution, and the full trace is preserved
    assert np.array_equal(partial_transpose_1(flipped).blocks, blocks)
    assert np.isclose(np.trace(flipped.full()), np.trace(op.full()))


def test_tensor_product_round_trip_through_full():
    """W (x) S laid out blockwise matches np.kron."""
    rng = np.random.default_rng(8)
    W = random_spd(rng, 2)
    S = random_density(rng, 3)
    blocks = W[:, :, None, None] * S[None, None, :, :]
    assert np.allclose(ExtendedOperator(blocks).full(), np.kron(W, S))


@given(st.integers(0, 10**6), st.integers(2, 5))
@settings(max_examples=25, deadline=None)
def test_trace_abs_dominates_the_trace_and_ignores_rotations(seed, d):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, d)
    U = random_unitary(rng, d)
    assert trace_abs(H) >= abs(np.trace(H).real) - 1e-12
    assert abs(trace_abs(U @ H @ U.conj().T) - trace_abs(H)) < 1e-9
