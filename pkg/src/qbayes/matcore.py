"""Dense complex linear algebra for block operators on C^n (x) H.

Everything routes through the Hermitian eigendecomposition: square roots,
Lyapunov solves and trace norms are eigenbasis computations, so their
numerical behaviour is consistent and easy to audit. All functions are pure;
inputs are never mutated.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

# Module-wide tolerance defaults; functions take overrides where it matters.
HERM_TOL = 1e-12        # max |A - A^dag| accepted before symmetrization
PSD_CLAMP = 1e-10       # eigenvalues above -PSD_CLAMP are clamped to zero
STRICT_POS_MIN = 1e-10  # minimum eigenvalue for "strictly positive" states
REG_EPS = 1e-10         # mixing weight of the regularization fallback
DEFECTIVE_COND = 1e8    # eigenvector condition number treated as defective

SQRT2 = np.sqrt(2.0)


class NotPsdError(ValueError):
    """A matrix required to be positive semidefinite is not."""


class SingularStateError(ValueError):
    """A state is singular beyond what regularization absorbs."""


class IllConditionedError(ValueError):
    """An eigenvector basis is too ill-conditioned to trust."""


class NumericalFailureError(RuntimeError):
    """An iterative kernel failed to converge."""


class RegularizationWarning(UserWarning):
    """A near-singular state was replaced by (1-eps) S + eps I/d."""


class ConditioningWarning(UserWarning):
    """A computation fell back to a less stable path."""


def hermitize(A: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (A + A^dag) / 2."""
    A = np.asarray(A, dtype=complex)
    return (A + A.conj().T) / 2


def check_hermitian(A: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Symmetrize A, raising if it deviates from Hermitian by more than tol."""
    A = np.asarray(A, dtype=complex)
    dev = np.abs(A - A.conj().T).max() if A.size else 0.0
    if dev > tol * max(1.0, np.abs(A).max()):
        raise ValueError(f"matrix deviates from Hermitian by {dev:.3e}")
    return hermitize(A)


def hermitian_eig(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary eigenvector matrix U) with
    A = U diag(w) U^dag.
    """
    A = np.asarray(A, dtype=complex)
    try:
        w, U = npl.eigh(A)
    except npl.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    return w, U


def psd_sqrt(A: np.ndarray, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Square root of a PSD Hermitian matrix.

    Eigenvalues in [-clamp, 0) are rounding noise and are clamped to zero;
    anything below -clamp raises NotPsdError.
    """
    w, U = hermitian_eig(A)
    if w.size and w[0] < -clamp:
        raise NotPsdError(f"eigenvalue {w[0]:.3e} below -{clamp:.0e}")
    w = np.maximum(w, 0.0)
    return hermitize((U * np.sqrt(w)) @ U.conj().T)


def regularize_state(S: np.ndarray, min_eig: float = STRICT_POS_MIN,
                     eps: float = REG_EPS) -> np.ndarray:
    """Return S, or (1-eps) S + eps I/d when its minimum eigenvalue is <= min_eig.

    Emits RegularizationWarning when the fallback fires so reports can record
    it; raises SingularStateError if the state is still not strictly positive
    afterwards (only possible for badly malformed input).
    """
    S = np.asarray(S, dtype=complex)
    d = S.shape[0]
    w = npl.eigvalsh(hermitize(S))
    if w[0] > min_eig:
        return S
    warnings.warn(
        f"state regularized: min eigenvalue {w[0]:.3e} <= {min_eig:.0e}",
        RegularizationWarning, stacklevel=2)
    Sreg = (1.0 - eps) * S + eps * np.eye(d) / d
    if npl.eigvalsh(hermitize(Sreg))[0] <= 0.0:
        raise SingularStateError("state singular beyond regularization")
    return Sreg


def lyapunov_solve(S: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Solve D = (S L + L S) / 2 for Hermitian L, S a strictly positive state.

    Computed in the eigenbasis of S: Lt_ab = 2 Dt_ab / (w_a + w_b). States
    with min eigenvalue <= STRICT_POS_MIN are regularized first (with a
    RegularizationWarning).
    """
    S = regularize_state(S)
    w, U = hermitian_eig(S)
    Dt = U.conj().T @ np.asarray(D, dtype=complex) @ U
    L = U @ (2.0 * Dt / (w[:, None] + w[None, :])) @ U.conj().T
    return hermitize(L)


def trace_abs(A: np.ndarray) -> float:
    """Sum of the absolute values of the eigenvalues of A.

    Hermitian and anti-Hermitian inputs are handled with eigh; anything else
    goes through a general eigensolver and raises IllConditionedError when the
    eigenvector basis looks defective (condition number > DEFECTIVE_COND).
    """
    A = np.asarray(A, dtype=complex)
    scale = max(1.0, float(np.abs(A).max())) if A.size else 1.0
    if np.abs(A - A.conj().T).max() <= HERM_TOL * scale:
        return float(np.abs(npl.eigvalsh(hermitize(A))).sum())
    if np.abs(A + A.conj().T).max() <= HERM_TOL * scale:
        # eigenvalues are i times those of the Hermitian matrix -iA
        return float(np.abs(npl.eigvalsh(hermitize(-1j * A))).sum())
    vals, vecs = npl.eig(A)
    if npl.cond(vecs) > DEFECTIVE_COND:
        raise IllConditionedError(
            "matrix is too close to defective for a trustworthy eigenbasis")
    return float(np.abs(vals).sum())


def weighted_trace_abs(W: np.ndarray, B: np.ndarray) -> float:
    """TrAbs(W B) for PSD Hermitian W via the congruence sqrt(W) B sqrt(W).

    The congruence has the same nonzero spectrum as W B and is normal for the
    inputs arising here (B antisymmetric real or anti-Hermitian), so its
    singular values are the absolute eigenvalues. Exact for W > 0 and stable:
    no non-normal eigenproblem is ever formed.
    """
    R = psd_sqrt(W)
    M = R @ np.asarray(B, dtype=complex) @ R
    return float(npl.svd(M, compute_uv=False).sum())


@dataclass(frozen=True)
class ExtendedOperator:
    """Operator on C^n (x) H stored as an (n, n) grid of (d, d) blocks."""

    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise ValueError(f"expected an (n, n, d, d) block grid, got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("non-finite entries in block grid")
        object.__setattr__(self, "blocks", b)

    @property
    def nblocks(self) -> int:
        return self.blocks.shape[0]

    @property
    def blockdim(self) -> int:
        return self.blocks.shape[2]

    def full(self) -> np.ndarray:
        """The (n d, n d) matrix with blocks[j, k] at block position (j, k)."""
        n, d = self.nblocks, self.blockdim
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)

    @classmethod
    def from_full(cls, M: np.ndarray, n: int, d: int) -> "ExtendedOperator":
        M = np.asarray(M, dtype=complex)
        if M.shape != (n * d, n * d):
            raise ValueError(f"expected shape {(n * d, n * d)}, got {M.shape}")
        return cls(M.reshape(n, d, n, d).transpose(0, 2, 1, 3))

    def is_hermitian(self, tol: float = HERM_TOL) -> bool:
        M = self.full()
        scale = max(1.0, float(np.abs(M).max()))
        return bool(np.abs(M - M.conj().T).max() <= tol * scale)

    def is_block_symmetric(self, tol: float = HERM_TOL) -> bool:
        dev = np.abs(self.blocks - self.blocks.transpose(1, 0, 2, 3)).max()
        scale = max(1.0, float(np.abs(self.blocks).max()))
        return bool(dev <= tol * scale)


def partial_trace_h(A: ExtendedOperator) -> np.ndarray:
    """Trace out H: result[j, k] = Tr blocks[j, k]. Hermitian if A is."""
    return np.trace(A.blocks, axis1=2, axis2=3)


def partial_transpose_1(A: ExtendedOperator) -> ExtendedOperator:
    """Transpose over the C^n factor: blocks[j, k] -> blocks[k, j].

    Pure relabeling, hence a bit-exact involution.
    """
    return ExtendedOperator(A.blocks.transpose(1, 0, 2, 3))


def sym_split(A: ExtendedOperator) -> tuple[ExtendedOperator, ExtendedOperator]:
    """Split A into its block-symmetric and block-antisymmetric parts.

    minus = (A - A^T1) / 2 is exactly block-antisymmetric (floating-point
    subtraction is sign-symmetric); plus = A - minus, so plus + minus
    reproduces A exactly whenever the subtraction incurs no rounding
    (always on dyadic inputs, and to machine precision otherwise).
    """
    t1 = A.blocks.transpose(1, 0, 2, 3)
    minus = (A.blocks - t1) * 0.5
    plus = A.blocks - minus
    return ExtendedOperator(plus), ExtendedOperator(minus)
