"""Unit tests for the dense interior-point conic solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_hermitian
from qbayes.conic import (
    ConicProgram,
    ProgramError,
    SolveOptions,
    SolverFailureError,
    dump_program,
    holevo_lemma_sdp_value,
    holevo_lemma_value,
    im_entry_coeff,
    random_lemma_triple,
    re_entry_coeff,
    realify,
    smat,
    solve,
    solve_or_raise,
    svec,
    svec_dim,
)


@given(st.integers(0, 10**6), st.integers(1, 6))
@settings(max_examples=25, deadline=None)
def test_svec_smat_round_trip_preserves_inner_products(seed, k):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((k, k))
    A = (A + A.T) / 2
    B = rng.standard_normal((k, k))
    B = (B + B.T) / 2
    assert svec(A).shape == (svec_dim(k),)
    assert np.allclose(smat(svec(A), k), A, atol=1e-14)
    assert abs(svec(A) @ svec(B) - np.trace(A @ B)) < 1e-10


def test_realify_embeds_the_hermitian_spectrum():
    rng = np.random.default_rng(31)
    H = random_hermitian(rng, 4)
    T = realify(H)
    assert np.allclose(T, T.T, atol=1e-14)
    doubled = np.sort(np.concatenate([np.linalg.eigvalsh(H)] * 2))
    assert np.allclose(np.sort(np.linalg.eigvalsh(T)), doubled, atol=1e-10)


def test_entry_coefficients_extract_real_and_imaginary_parts():
    """Tr(C H) picks out Re/Im of a chosen entry of Hermitian H."""
    rng = np.random.default_rng(32)
    H = random_hermitian(rng, 3)
    for a in range(3):
        for b in range(a + 1, 3):
            re = np.trace(re_entry_coeff(3, a, b) @ H)
            im = np.trace(im_entry_coeff(3, a, b) @ H)
            assert abs(re - H[a, b].real) < 1e-12
            assert abs(im - H[a, b].imag) < 1e-12
    assert abs(np.trace(re_entry_coeff(3, 1, 1) @ H) - H[1, 1].real) < 1e-12
    # the realified embedding halves the pairing, which add_eq compensates
    C = re_entry_coeff(3, 0, 2)
    pair = svec(realify(C) / 2.0) @ svec(realify(H))
    assert abs(pair - H[0, 2].real) < 1e-12


def smallest_eigenvalue_program():
    """min t s.t. t I - H >= 0, via one complex block and a free scalar."""
    rng = np.random.default_rng(33)
    H = random_hermitian(rng, 3)
    prog = ConicProgram()
    blk = prog.add_psd_block(3, complex_=True)
    t = prog.add_free(1)
    for a in range(3):
        for b in range(a, 3):
            # (tI - H)_{ab} fixed entrywise: Re and, off-diagonal, Im
            target = (1.0 if a == b else 0.0)
            prog.add_eq({blk: re_entry_coeff(3, a, b)}, free={int(t[0]): -target},
                        rhs=-H[a, b].real)
            if a != b:
                prog.add_eq({blk: im_entry_coeff(3, a, b)}, rhs=-H[a, b].imag)
    prog.set_objective(free={int(t[0]): 1.0})
    return prog, H


def test_largest_eigenvalue_as_an_sdp():
    prog, H = smallest_eigenvalue_program()
    sol = solve_or_raise(prog)
    top = np.linalg.eigvalsh(H)[-1]
    assert abs(sol.primal_value - top) < 1e-7
    assert sol.status == "optimal"
    assert sol.gap <= 1e-8
    assert sol.feas_primal <= 1e-8


def test_equality_pinned_diagonal():
    """min Tr X with X_00 = 1 over 2x2 PSD X has value 1."""
    prog = ConicProgram()
    blk = prog.add_psd_block(2)
    C = np.zeros((2, 2))
    C[0, 0] = 1.0
    prog.add_eq({blk: C}, rhs=1.0)
    prog.set_objective({blk: np.eye(2)})
    sol = solve_or_raise(prog)
    assert abs(sol.primal_value - 1.0) < 1e-8
    X = sol.variable_values[0]
    assert np.linalg.eigvalsh((X + X.conj().T) / 2)[0] >= -1e-8
    assert abs(X[0, 0] - 1.0) < 1e-7
    assert abs(X[1, 1]) < 1e-7


def test_offset_is_reported_in_both_values():
    prog = ConicProgram()
    blk = prog.add_psd_block(1)
    prog.add_eq({blk: np.ones((1, 1))}, rhs=2.0)
    prog.set_objective({blk: np.ones((1, 1))}, offset=-5.0)
    sol = solve_or_raise(prog)
    assert abs(sol.primal_value - (2.0 - 5.0)) < 1e-8
    assert abs(sol.dual_value - sol.primal_value) <= 1e-7
    assert sol.dual_value <= sol.primal_value + 1e-9


def test_negative_trace_probe_is_flagged_infeasible():
    prog = ConicProgram()
    blk = prog.add_psd_block(2)
    prog.add_eq({blk: np.eye(2)}, rhs=-1.0)
    prog.set_objective({blk: np.eye(2)})
    assert solve(prog).status == "infeasible"
    with pytest.raises(SolverFailureError):
        solve_or_raise(prog)


def test_unbounded_objective_is_flagged():
    """min -Tr X with only X_01 pinned can push the diagonal to infinity."""
    prog = ConicProgram()
    blk = prog.add_psd_block(2)
    C = np.zeros((2, 2))
    C[0, 1] = C[1, 0] = 0.5
    prog.add_eq({blk: C}, rhs=1.0)
    prog.set_objective({blk: -np.eye(2)})
    assert solve(prog).status == "unbounded"


def test_solutions_are_deterministic():
    prog, _ = smallest_eigenvalue_program()
    a = solve(prog)
    b = solve(prog)
    assert a.primal_value == b.primal_value
    assert a.iterations == b.iterations
    assert np.array_equal(a.free_values, b.free_values)


def test_retry_ladder_rescues_a_bad_profile():
    """A hopeless centering floor on the first attempt still ends optimal."""
    prog, H = smallest_eigenvalue_program()
    sol = solve(prog, SolveOptions(sigma_min=0.9999, max_iters=60))
    assert sol.status == "optimal"
    assert abs(sol.primal_value - np.linalg.eigvalsh(H)[-1]) < 1e-7


def test_gap_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("QBAYES_GAP_TOL", "1e-5")
    assert SolveOptions().resolved_gap_tol() == 1e-5
    monkeypatch.setenv("QBAYES_GAP_TOL", "not-a-number")
    with pytest.warns(UserWarning):
        assert SolveOptions().resolved_gap_tol() == 1e-8
    monkeypatch.delenv("QBAYES_GAP_TOL")
    assert SolveOptions(gap_tol=1e-10).resolved_gap_tol() == 1e-10


def test_program_validation_rejects_bad_shapes():
    prog = ConicProgram()
    blk = prog.add_psd_block(2)
    with pytest.raises(ProgramError):
        prog.add_eq({blk: np.eye(3)})
    with pytest.raises(ProgramError):
        prog.add_eq({blk + 7: np.eye(2)})
    with pytest.raises(ProgramError):
        ConicProgram().assemble()


def test_dump_program_round_trips_the_structure():
    prog, _ = smallest_eigenvalue_program()
    text = dump_program(prog)
    assert "block 0 complex 3" in text
    assert "offset" in text


def test_lemma_identity_on_random_triples():
    """Closed form Tr(WA) + TrAbs(WB) equals its SDP on seeded draws."""
    rng = np.random.default_rng(34)
    deep = SolveOptions(gap_tol=1e-10)
    for _ in range(6):
        k = int(rng.integers(2, 5))
        W, A, B = random_lemma_triple(rng, k)
        closed = holevo_lemma_value(W, A, B)
        sol = holevo_lemma_sdp_value(W, A, B, deep)
        assert sol.status == "optimal"
        assert abs(sol.primal_value - closed) < 1e-7


def test_lemma_value_requires_a_positive_weight():
    with pytest.raises(ValueError):
        holevo_lemma_value(np.diag([1.0, 0.0]), np.eye(2), np.zeros((2, 2)))
