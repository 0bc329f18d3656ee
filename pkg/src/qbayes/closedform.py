"""Closed-form Bayes-risk lower bounds: SLD, RLD, and van Tree baselines.

These need only eigendecompositions. The SLD bound is Tr(W (M - K)) with K
the Gram matrix of the averaged-state logarithmic derivatives; the RLD bound
adds a trace-norm term from the imaginary part of its Gram matrix; the van
Tree baseline combines prior and averaged quantum Fisher information.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .matcore import (ConditioningWarning, STRICT_POS_MIN, hermitian_eig,
                      hermitize, lyapunov_solve, regularize_state,
                      weighted_trace_abs)
from .model import BayesMoments, CapabilityError, StatisticalModel, build_moments

INFO_SINGULAR_TOL = 1e-12
DERIV_TRACE_TOL = 1e-9


class SingularInformationError(ValueError):
    """The total Fisher information matrix is singular."""


@dataclass(frozen=True)
class SldPackage:
    """Bayesian SLDs L_j and their symmetrized Gram matrix K."""

    L: np.ndarray   # (n, d, d) Hermitian
    K: np.ndarray   # (n, n) real symmetric


@dataclass(frozen=True)
class RldPackage:
    """Bayesian RLDs (not Hermitian in general) and their Gram matrix."""

    Ltilde: np.ndarray   # (n, d, d) complex
    Ktilde: np.ndarray   # (n, n) complex Hermitian


def _symmetrized_gram(S: np.ndarray, L: np.ndarray) -> np.ndarray:
    """K_jk = Tr(S (L_j L_k + L_k L_j)) / 2, returned exactly symmetric."""
    n = L.shape[0]
    K = np.zeros((n, n))
    for j in range(n):
        for k in range(j, n):
            val = 0.5 * np.trace(S @ (L[j] @ L[k] + L[k] @ L[j])).real
            K[j, k] = K[k, j] = float(val)
    return K


def sld_bound(moments: BayesMoments, W: np.ndarray) -> tuple[float, SldPackage]:
    """Bayesian SLD bound Tr(W (M - K)).

    L_j solves the averaged-state Lyapunov equation D_B[j] = (S_B L_j +
    L_j S_B)/2; near-singular S_B is regularized (see matcore).
    """
    W = np.asarray(W, dtype=float)
    L = np.stack([lyapunov_solve(moments.S_B, Dj) for Dj in moments.D_B])
    K = _symmetrized_gram(moments.S_B, L)
    value = float(np.trace(W @ (moments.M - K)))
    return value, SldPackage(L=L, K=K)


def rld_bound(moments: BayesMoments, W: np.ndarray) -> tuple[float, RldPackage]:
    """Bayesian RLD bound Tr(W (M - Re Kt)) + TrAbs(W Im Kt).

    Lt_j = S_B^{-1} D_B[j]; Kt_jk = Tr(S_B Lt_k Lt_j^dag). The trace-norm
    term always uses the PSD-congruence path: sqrt(W) Im(Kt) sqrt(W) is
    antisymmetric, hence normal, and shares its nonzero spectrum with
    W Im(Kt), so the congruence stays exact even for singular W, where the
    raw product can be a defective nilpotent the eigensolver cannot handle.
    Singular W still draws a warning because the bound's derivation wants
    W > 0.
    """
    W = np.asarray(W, dtype=float)
    S = regularize_state(moments.S_B)
    w, U = hermitian_eig(S)
    Sinv = (U / w) @ U.conj().T
    Lt = np.stack([Sinv @ Dj for Dj in moments.D_B])
    n = Lt.shape[0]
    Kt = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            Kt[j, k] = np.trace(S @ Lt[k] @ Lt[j].conj().T)
    Kt = (Kt + Kt.conj().T) / 2
    imK = Kt.imag    # real antisymmetric
    value = float(np.trace(W @ (moments.M - Kt.real)))
    if npl.eigvalsh(W)[0] <= STRICT_POS_MIN:
        warnings.warn("singular weight matrix: the identity behind the "
                      "trace-norm term assumes W > 0", ConditioningWarning,
                      stacklevel=2)
    value += weighted_trace_abs(W, imK)
    return value, RldPackage(Ltilde=Lt, Ktilde=Kt)


def sld_fisher_point(state: np.ndarray, derivatives: np.ndarray) -> np.ndarray:
    """Pointwise SLD quantum Fisher information matrix.

    Solves (S L_j + L_j S)/2 = dS/dtheta_j per parameter and returns the
    symmetrized Gram matrix. Derivatives must be traceless (trace-preserving
    family).
    """
    derivatives = np.asarray(derivatives, dtype=complex)
    for j, Dj in enumerate(derivatives):
        tr = abs(complex(np.trace(Dj)))
        if tr > DERIV_TRACE_TOL:
            raise ValueError(f"derivative {j} has trace {tr:.3e}, expected 0")
    L = np.stack([lyapunov_solve(state, Dj) for Dj in derivatives])
    return _symmetrized_gram(np.asarray(state, dtype=complex), L)


def van_tree_bound(model: StatisticalModel, W: np.ndarray) -> float:
    """Van Tree baseline Tr(W (J_prior + sum_m pi_m J_Q(theta_m))^{-1}).

    Needs state derivatives on every grid point and a prior score vector per
    point; neither is ever finite-differenced from the grid. The grid form is
    a modeling surrogate for the continuous-prior inequality.
    """
    W = np.asarray(W, dtype=float)
    if not model.has_derivatives():
        raise CapabilityError("van Tree needs state_derivatives on every grid point")
    if model.prior_score is None:
        raise CapabilityError("van Tree needs a prior_score attached to the model")
    pi = model.pi
    score = model.prior_score
    J_prior = np.einsum("m,mi,mj->ij", pi, score, score)
    J_avg = np.zeros((model.n, model.n))
    for m, p in enumerate(model.points):
        J_avg = J_avg + pi[m] * sld_fisher_point(p.state, p.state_derivatives)
    J_total = J_prior + J_avg
    evals = npl.eigvalsh(hermitize(J_total).real)
    if evals[0] <= INFO_SINGULAR_TOL * max(1.0, evals[-1]):
        raise SingularInformationError("total information matrix is singular")
    return float(np.trace(npl.solve(J_total, W)))


def personick_value(moments: BayesMoments) -> float:
    """The scalar m - K for one-parameter moments (W = 1 convention)."""
    if moments.n != 1:
        raise ValueError("personick_value is single-parameter only")
    value, _ = sld_bound(moments, np.eye(1))
    return value


def collapse_values(model: StatisticalModel) -> dict:
    """SLD and RLD values for a model with its constant weight (convenience)."""
    if not model.weight_spec.is_constant:
        raise CapabilityError("closed-form bounds need a constant weight matrix")
    mom = build_moments(model)
    W = model.weight_spec.constant
    sld, _ = sld_bound(mom, W)
    rld, _ = rld_bound(mom, W)
    return {"sld": sld, "rld": rld}
