"""Small dense semidefinite programming with a deterministic interior-point solver.

Programs are equality-constrained over PSD blocks (real-symmetric or
complex-Hermitian) plus free real scalars; inequalities are the caller's job
via slack blocks. The solver is a primal-dual path-following method on the
homogeneous self-dual embedding with Nesterov-Todd scaling and dense LU
linear algebra, so infeasibility is certified rather than diverged on.
Problem sizes here are at most a few hundred rows; robustness beats sparsity.

Complex Hermitian blocks are rewritten over real symmetric cones at assembly
(`realify`), with the factor-2 inner-product mismatch folded into the
coefficients, and answers are reported back in the complex picture.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.linalg as npl
import scipy.linalg as sla

from .matcore import SQRT2, check_hermitian, hermitize, weighted_trace_abs

GAP_TOL = 1e-8       # relative duality gap at optimality
FEAS_TOL = 1e-8      # scaled primal residual at optimality
DRES_GUARD = 1e-6    # sanity ceiling on the scaled dual residual; typical
                     # solves land near 1e-12, but degenerate endgames can
                     # float around 1e-8 while gap and primal residual converge
MAX_ITERS = 200
STEP_FRAC = 0.98     # fraction of the step to the cone boundary
SIGMA_MIN = 0.05     # keeps every step at least mildly centering
PROX_GAMMA = 0.01    # wide-neighborhood floor on complementarity eigenvalues
GAP_TOL_ENV = "QBAYES_GAP_TOL"


class ProgramError(ValueError):
    """A conic program is malformed."""


class SolverFailureError(RuntimeError):
    """A solve did not reach a certified status; diagnostics attached."""

    def __init__(self, message: str, solution: "ConicSolution | None" = None):
        super().__init__(message)
        self.solution = solution


# ---------------------------------------------------------------------------
# Symmetric vectorization and the real picture of Hermitian blocks
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _triu(k: int):
    return np.triu_indices(k)


def svec_dim(k: int) -> int:
    return k * (k + 1) // 2


def svec(X: np.ndarray) -> np.ndarray:
    """Isometric vectorization of a real symmetric matrix (off-diag x sqrt2)."""
    iu, ju = _triu(X.shape[0])
    v = np.ascontiguousarray(X[iu, ju], dtype=float)
    v[iu != ju] *= SQRT2
    return v


def smat(v: np.ndarray, k: int) -> np.ndarray:
    """Inverse of svec."""
    iu, ju = _triu(k)
    w = np.asarray(v, dtype=float).copy()
    w[iu != ju] /= SQRT2
    X = np.zeros((k, k))
    X[iu, ju] = w
    X[ju, iu] = w
    return X


def realify(H: np.ndarray) -> np.ndarray:
    """Real-symmetric picture [[Re H, -Im H], [Im H, Re H]] of Hermitian H.

    Eigenvalues double up, PSD is preserved both ways, and Frobenius inner
    products double: <T(A), T(B)> = 2 <A, B>. Assembly compensates with a
    factor 1/2 on coefficient matrices.
    """
    H = np.asarray(H, dtype=complex)
    return np.block([[H.real, -H.imag], [H.imag, H.real]])


def _complexify(Y: np.ndarray, k: int) -> np.ndarray:
    """Project a real-symmetric 2k x 2k iterate back to a Hermitian k x k matrix."""
    P = (Y[:k, :k] + Y[k:, k:]) / 2
    Q = (Y[k:, :k] - Y[:k, k:]) / 2
    return P + 1j * Q


def re_entry_coeff(k: int, a: int, b: int) -> np.ndarray:
    """Hermitian C with Tr(C H) = Re H[a, b] for Hermitian H."""
    C = np.zeros((k, k), dtype=complex)
    if a == b:
        C[a, a] = 1.0
    else:
        C[a, b] = 0.5
        C[b, a] = 0.5
    return C


def im_entry_coeff(k: int, a: int, b: int) -> np.ndarray:
    """Hermitian C with Tr(C H) = Im H[a, b] for Hermitian H (a != b)."""
    if a == b:
        raise ProgramError("diagonal entries of a Hermitian matrix are real")
    C = np.zeros((k, k), dtype=complex)
    C[a, b] = 0.5j
    C[b, a] = -0.5j
    return C


# ---------------------------------------------------------------------------
# Program assembly
# ---------------------------------------------------------------------------

@dataclass
class _Block:
    kind: str      # "real" | "complex"
    dim: int       # matrix dimension in its own picture

    @property
    def real_dim(self) -> int:
        return self.dim if self.kind == "real" else 2 * self.dim


@dataclass
class _Row:
    coeffs: dict            # block index -> coefficient matrix
    free: np.ndarray | None
    rhs: float


class ConicProgram:
    """Equality-form conic program over PSD blocks and free scalars.

    Constraints and the objective are real linear functionals given by one
    coefficient matrix per referenced block (symmetric for real blocks,
    Hermitian for complex ones; contributing <C, X>) plus coefficients on the
    free variables.
    """

    def __init__(self):
        self.blocks: list[_Block] = []
        self.nfree = 0
        self.rows: list[_Row] = []
        self.obj: _Row | None = None
        self.offset = 0.0

    def add_psd_block(self, dim: int, complex_: bool = False) -> int:
        if dim < 1:
            raise ProgramError(f"block dimension {dim} < 1")
        self.blocks.append(_Block("complex" if complex_ else "real", dim))
        return len(self.blocks) - 1

    def add_free(self, count: int) -> np.ndarray:
        """Declare free scalars; returns their indices."""
        if count < 0:
            raise ProgramError("negative free-variable count")
        idx = np.arange(self.nfree, self.nfree + count)
        self.nfree += count
        return idx

    def _check_row(self, coeffs: dict | None, free) -> _Row:
        coeffs = dict(coeffs or {})
        for bid, C in coeffs.items():
            if not 0 <= bid < len(self.blocks):
                raise ProgramError(f"unknown block {bid}")
            blk = self.blocks[bid]
            C = np.asarray(C)
            if C.shape != (blk.dim, blk.dim):
                raise ProgramError(
                    f"coefficient shape {C.shape} for block of dim {blk.dim}")
            if blk.kind == "complex":
                coeffs[bid] = check_hermitian(C)
            else:
                C = C.real.astype(float)
                if np.abs(C - C.T).max() > 1e-12 * max(1.0, np.abs(C).max()):
                    raise ProgramError("real-block coefficient not symmetric")
                coeffs[bid] = (C + C.T) / 2
        fvec = None
        if free is not None:
            if isinstance(free, dict):
                fvec = np.zeros(self.nfree)
                for i, v in free.items():
                    fvec[i] = v
            else:
                fvec = np.asarray(free, dtype=float)
                if fvec.shape != (self.nfree,):
                    raise ProgramError(f"free coefficient length {fvec.shape}")
        return _Row(coeffs=coeffs, free=fvec, rhs=0.0)

    def add_eq(self, coeffs: dict | None = None, free=None, rhs: float = 0.0) -> None:
        """Add the equality  sum_b <C_b, X_b> + f . u = rhs."""
        row = self._check_row(coeffs, free)
        row.rhs = float(rhs)
        self.rows.append(row)

    def set_objective(self, coeffs: dict | None = None, free=None,
                      offset: float = 0.0) -> None:
        """Minimize  sum_b <C_b, X_b> + f . u + offset."""
        self.obj = self._check_row(coeffs, free)
        self.offset = float(offset)

    # -- numeric form -------------------------------------------------------

    def _layout(self):
        starts = []
        pos = self.nfree
        for blk in self.blocks:
            starts.append(pos)
            pos += svec_dim(blk.real_dim)
        return starts, pos

    def _row_vector(self, row: _Row, N: int, starts) -> np.ndarray:
        v = np.zeros(N)
        if row.free is not None:
            v[:self.nfree] = row.free
        for bid, C in row.coeffs.items():
            blk = self.blocks[bid]
            if blk.kind == "complex":
                R = realify(C) / 2.0     # <T(C)/2, T(X)> = <C, X>
            else:
                R = C
            s = starts[bid]
            v[s:s + svec_dim(blk.real_dim)] = svec(R)
        return v

    def assemble(self):
        starts, N = self._layout()
        if N == 0:
            raise ProgramError("program has no variables")
        A = np.zeros((len(self.rows), N))
        b = np.zeros(len(self.rows))
        for i, row in enumerate(self.rows):
            A[i] = self._row_vector(row, N, starts)
            b[i] = row.rhs
        obj = self.obj if self.obj is not None else _Row({}, None, 0.0)
        c = self._row_vector(obj, N, starts)
        return A, b, c, starts, N


def dump_program(p: ConicProgram) -> str:
    """Plain-text dump for cross-checking against external solvers.

    Format: one `block ID kind dim` line per block, `free COUNT`, then
    `obj BLOCK I J RE IM` / `objfree IDX V` / `offset V` entries and per
    constraint `con ROW BLOCK I J RE IM` / `confree ROW IDX V` / `rhs ROW V`.
    Only nonzero upper-triangle coefficients are listed.
    """
    out = ["conic-program"]
    for i, blk in enumerate(p.blocks):
        out.append(f"block {i} {blk.kind} {blk.dim}")
    out.append(f"free {p.nfree}")
    out.append(f"offset {p.offset!r}")

    def emit(tag: str, row: _Row):
        for bid in sorted(row.coeffs):
            C = np.asarray(row.coeffs[bid], dtype=complex)
            for a in range(C.shape[0]):
                for b_ in range(a, C.shape[1]):
                    z = C[a, b_]
                    if z != 0:
                        out.append(f"{tag} {bid} {a} {b_} {z.real!r} {z.imag!r}")
        if row.free is not None:
            for i, v in enumerate(row.free):
                if v != 0:
                    out.append(f"{tag}free {i} {v!r}")

    if p.obj is not None:
        emit("obj", p.obj)
    for r, row in enumerate(p.rows):
        for bid in sorted(row.coeffs):
            C = np.asarray(row.coeffs[bid], dtype=complex)
            for a in range(C.shape[0]):
                for b_ in range(a, C.shape[1]):
                    z = C[a, b_]
                    if z != 0:
                        out.append(f"con {r} {bid} {a} {b_} {z.real!r} {z.imag!r}")
        if row.free is not None:
            for i, v in enumerate(row.free):
                if v != 0:
                    out.append(f"confree {r} {i} {v!r}")
        out.append(f"rhs {r} {row.rhs!r}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveOptions:
    gap_tol: float | None = None     # None: QBAYES_GAP_TOL env or GAP_TOL
    feas_tol: float = FEAS_TOL
    max_iters: int = MAX_ITERS
    step_frac: float = STEP_FRAC
    refine: int = 1                  # rounds of iterative refinement per solve
    sigma_min: float = SIGMA_MIN     # centering weight floor

    def resolved_gap_tol(self) -> float:
        if self.gap_tol is not None:
            return self.gap_tol
        env = os.environ.get(GAP_TOL_ENV)
        if env:
            try:
                return float(env)
            except ValueError:
                warnings.warn(f"ignoring malformed {GAP_TOL_ENV}={env!r}")
        return GAP_TOL


@dataclass(frozen=True)
class ConicSolution:
    """Solve outcome; `gap` and feasibility residuals are the scaled measures
    the optimality test used."""

    status: str                      # optimal | infeasible | unbounded | numerical-failure
    primal_value: float
    dual_value: float
    gap: float
    feas_primal: float
    feas_dual: float
    variable_values: tuple
    free_values: np.ndarray
    y: np.ndarray
    iterations: int


def _congruence_rep(P: np.ndarray) -> np.ndarray:
    """svec-coordinate matrix of M -> P M P^T for symmetric P."""
    k = P.shape[0]
    iu, ju = _triu(k)
    cols = np.einsum("am,bm->mab", P[:, iu], P[:, ju])
    cols = cols + cols.transpose(0, 2, 1)
    diag = iu == ju
    cols[diag] *= 0.5
    cols[~diag] /= SQRT2
    H = cols[:, iu, ju]
    H[:, ~diag] *= SQRT2
    return np.ascontiguousarray(H.T)


def _factor_psd(X: np.ndarray) -> np.ndarray:
    """Some full-rank factor L with L L^T = X (cholesky, eigh fallback)."""
    try:
        return npl.cholesky(X)
    except npl.LinAlgError:
        w, U = npl.eigh((X + X.T) / 2)
        floor = max(w.max(), 1.0) * 1e-14
        return U * np.sqrt(np.maximum(w, floor))


def _alpha_boundary(L: np.ndarray, dX: np.ndarray) -> float:
    """sup alpha with X + alpha dX >= 0, given a factor L of X."""
    M = npl.solve(L, dX)
    M = npl.solve(L, M.T).T
    wmin = npl.eigvalsh((M + M.T) / 2)[0]
    if wmin >= 0:
        return np.inf
    return 1.0 / (-wmin)


# fallback (sigma_min, step_frac, gamma_cap, iters) profiles tried in order
# when a run stalls; slow creep near the tolerance earns a larger budget
_RETRY_PROFILES = ((0.15, 0.95, 0.05, 400), (0.3, 0.9, 0.05, 400))


def solve(program: ConicProgram, options: SolveOptions | None = None) -> ConicSolution:
    """Run the homogeneous self-dual interior-point method on the program.

    Deterministic for fixed input and options. Status `optimal` certifies a
    relative duality gap <= gap_tol (measured against the reported value) and
    a scaled primal residual <= feas_tol, with the dual residual under the
    DRES_GUARD ceiling; primal/dual infeasibility is reported from the
    embedding's certificates. A stalled run is retried on a fixed ladder of
    more conservative profiles before `numerical-failure` comes back carrying
    the best iterate seen.
    """
    opts = options or SolveOptions()
    gap_tol = opts.resolved_gap_tol()
    profiles = [(opts.sigma_min, opts.step_frac, PROX_GAMMA, opts.max_iters)]
    for sm, sf, gc, mi in _RETRY_PROFILES:
        profiles.append((sm, sf, gc, max(mi, opts.max_iters)))
    fallback = None
    for sigma_min, step_frac, gamma_cap, iters in profiles:
        sol = _attempt(program, opts, gap_tol, sigma_min, step_frac,
                       gamma_cap, iters)
        if sol.status != "numerical-failure":
            return sol
        score = max(sol.feas_primal, sol.feas_dual, sol.gap)
        if fallback is None or score < fallback[0]:
            fallback = (score, sol)
    return fallback[1]


def _attempt(program: ConicProgram, opts: SolveOptions, gap_tol: float,
             sigma_min: float, step_frac: float, gamma_cap: float,
             iters: int) -> ConicSolution:
    feas_tol = opts.feas_tol

    A, b, c, starts, N = program.assemble()
    p = A.shape[0]
    real_dims = [blk.real_dim for blk in program.blocks]
    nu = sum(real_dims)
    nfree = program.nfree
    bnorm = 1.0 + (np.abs(b).max() if p else 0.0)
    cnorm = 1.0 + (np.abs(c).max() if N else 0.0)

    def block_slices():
        for blk, s in zip(program.blocks, starts):
            yield blk, s, svec_dim(blk.real_dim)

    # interior start: identity in every block, tau = kappa = 1
    x = np.zeros(N)
    s = np.zeros(N)
    for blk, st, ln in block_slices():
        e = svec(np.eye(blk.real_dim))
        x[st:st + ln] = e
        s[st:st + ln] = e
    y = np.zeros(p)
    tau, kappa = 1.0, 1.0

    def unpack(xvec: np.ndarray):
        vals = []
        for blk, st, ln in block_slices():
            Y = smat(xvec[st:st + ln], blk.real_dim)
            if blk.kind == "complex":
                vals.append(hermitize(_complexify(Y, blk.dim)))
            else:
                vals.append((Y + Y.T) / 2)
        return tuple(vals)

    def measures(xv, yv, sv, tv):
        xh, yh, sh = xv / tv, yv / tv, sv / tv
        pres = (np.abs(A @ xh - b).max() / bnorm) if p else 0.0
        dres = np.abs(A.T @ yh + sh - c).max() / cnorm
        pobj = float(c @ xh)
        dobj = float(b @ yh) if p else 0.0
        # the gap is measured against the reported value, offset included
        gap = abs(pobj - dobj) / max(1.0, abs(pobj + program.offset))
        return pres, dres, gap, pobj, dobj

    def final(status, xv, yv, sv, tv, iters, meas):
        pres, dres, gap, pobj, dobj = meas
        return ConicSolution(
            status=status,
            primal_value=pobj + program.offset,
            dual_value=dobj + program.offset,
            gap=gap, feas_primal=pres, feas_dual=dres,
            variable_values=unpack(xv / tv),
            free_values=xv[:nfree] / tv,
            y=yv / tv, iterations=iters)

    best = None   # (score, status-free snapshot)
    it = 0
    for it in range(iters):
        meas = measures(x, y, s, tau)
        pres, dres, gap, pobj, dobj = meas
        score = max(pres, dres, gap)
        if best is None or score < best[0]:
            best = (score, (x.copy(), y.copy(), s.copy(), tau, it, meas))
        if pres <= feas_tol and dres <= max(feas_tol, DRES_GUARD) and gap <= gap_tol:
            return final("optimal", x, y, s, tau, it, meas)

        # certificates from the embedding
        by = float(b @ y) if p else 0.0
        cx = float(c @ x)
        if by > 0 and np.abs(A.T @ y + s).max() <= feas_tol * by:
            return final("infeasible", x, y, s, tau, it, meas)
        if cx < 0 and (np.abs(A @ x).max() if p else 0.0) <= feas_tol * (-cx):
            return final("unbounded", x, y, s, tau, it, meas)

        mu = (float(x @ s) + tau * kappa) / (nu + 1)

        # NT scaling per block: H = G^2 with G the scaled-space congruence
        Hb, Gib = {}, {}
        factors = []
        xinv_vec = np.zeros(N)
        prox0 = tau * kappa / mu
        for blk, st, ln in block_slices():
            k = blk.real_dim
            X = smat(x[st:st + ln], k)
            Sb = smat(s[st:st + ln], k)
            Lx = _factor_psd(X)
            Ls = _factor_psd(Sb)
            B = Lx.T @ Sb @ Lx
            wB, UB = npl.eigh((B + B.T) / 2)
            if wB[0] <= 0:
                return final("numerical-failure", *best[1][:4], best[1][4], best[1][5])
            prox0 = min(prox0, wB[0] / mu)
            Tinv = npl.solve(Lx.T, (UB * wB ** 0.5) @ UB.T) @ npl.solve(Lx, np.eye(k))
            Tinv = (Tinv + Tinv.T) / 2
            wT, UT = npl.eigh(Tinv)
            if wT[0] <= 0:
                return final("numerical-failure", *best[1][:4], best[1][4], best[1][5])
            Hb[st] = _congruence_rep(Tinv)
            Gib[st] = _congruence_rep((UT * wT ** -0.5) @ UT.T)
            Xi = npl.solve(Lx.T, npl.solve(Lx, np.eye(k)))
            xinv_vec[st:st + ln] = svec((Xi + Xi.T) / 2)
            factors.append((Lx, Ls, st, ln, k))

        def apply_blocks(table, v, offset=0):
            out = np.zeros_like(v)
            for blk, st, ln in block_slices():
                lo = st - offset
                out[lo:lo + ln] = table[st] @ v[lo:lo + ln]
            return out

        r_d = A.T @ y + s - c * tau
        r_p = (A @ x - b * tau) if p else np.zeros(0)
        r_g = cx - by + kappa

        # eliminate the cone step through the scaling: LU lives on the
        # (p + 1 + nfree) system in (dy, dtau, dx_free)
        Af = A[:, :nfree]
        cf = c[:nfree]
        ncone = N - nfree
        AkGi = np.zeros((p, ncone))
        for blk, st, ln in block_slices():
            AkGi[:, st - nfree:st - nfree + ln] = A[:, st:st + ln] @ Gib[st]
        cGi = apply_blocks(Gib, c[nfree:], offset=nfree)
        q = p + 1 + nfree
        M2 = np.zeros((q, q))
        M2[:p, :p] = AkGi @ AkGi.T
        v1 = AkGi @ cGi
        M2[:p, p] = -(v1 + b)
        M2[:p, p + 1:] = Af
        M2[p, :p] = b - v1
        M2[p, p] = float(cGi @ cGi) + kappa / tau
        M2[p, p + 1:] = -cf
        M2[p + 1:, :p] = Af.T
        M2[p + 1:, p] = -cf
        # equilibrate before factoring: near a degenerate optimum the rows
        # span many orders of magnitude, which starves the small pivots; the
        # tiny shift on the balanced matrix is corrected by refinement below
        rscale = 1.0 / np.maximum(np.abs(M2).max(axis=1), 1e-300)
        M2s = M2 * rscale[:, None]
        cscale = 1.0 / np.maximum(np.abs(M2s).max(axis=0), 1e-300)
        M2s = M2s * cscale[None, :]
        M2s[np.diag_indices(q)] += 1e-14
        try:
            lu = sla.lu_factor(M2s)
        except (ValueError, npl.LinAlgError):
            return final("numerical-failure", *best[1][:4], best[1][4], best[1][5])

        def reduced_solve(r1, r2, r3):
            t0 = apply_blocks(Gib, r1[nfree:], offset=nfree)
            rhs2 = np.concatenate([r2 + AkGi @ t0, [r3 - float(cGi @ t0)],
                                   r1[:nfree]])
            sol2 = cscale * sla.lu_solve(lu, rscale * rhs2)
            dy = sol2[:p]
            dtau = float(sol2[p])
            w = AkGi.T @ dy - cGi * dtau - t0
            dx = np.concatenate([sol2[p + 1:],
                                 apply_blocks(Gib, w, offset=nfree)])
            return dx, dy, dtau

        def newton(sigma: float, eta: float):
            Rc = sigma * mu * xinv_vec - s
            r1 = -eta * r_d - Rc
            r2 = -eta * r_p
            r3 = eta * r_g + (sigma * mu - tau * kappa) / tau
            dx, dy, dtau = reduced_solve(r1, r2, r3)
            for _ in range(max(0, opts.refine)):
                hdx = np.concatenate([np.zeros(nfree),
                                      apply_blocks(Hb, dx[nfree:], offset=nfree)])
                e1 = r1 - (A.T @ dy - c * dtau - hdx)
                e2 = r2 - (A @ dx - b * dtau)
                e3 = r3 - (-float(c @ dx) + float(b @ dy) + (kappa / tau) * dtau)
                fx, fy, ftau = reduced_solve(e1, e2, e3)
                dx = dx + fx
                dy = dy + fy
                dtau = dtau + ftau
            hdx = np.concatenate([np.zeros(nfree),
                                  apply_blocks(Hb, dx[nfree:], offset=nfree)])
            ds = Rc - hdx
            dkappa = (sigma * mu - tau * kappa - kappa * dtau) / tau
            return dx, dy, dtau, ds, dkappa

        def boundary(dx, ds, dtau, dkappa) -> float:
            if not (np.isfinite(dx).all() and np.isfinite(ds).all()
                    and np.isfinite(dtau) and np.isfinite(dkappa)):
                return 0.0
            alpha = np.inf
            if dtau < 0:
                alpha = min(alpha, tau / -dtau)
            if dkappa < 0:
                alpha = min(alpha, kappa / -dkappa)
            for Lx, Ls, st, ln, k in factors:
                alpha = min(alpha, _alpha_boundary(Lx, smat(dx[st:st + ln], k)))
                alpha = min(alpha, _alpha_boundary(Ls, smat(ds[st:st + ln], k)))
            return alpha

        # wide-neighborhood guard: a step is admitted only while every
        # complementarity eigenvalue stays >= gamma * mu of the new point
        gamma = min(gamma_cap, 0.9 * prox0)

        def centered(al, dx, ds, dtau, dkappa) -> bool:
            tk = (tau + al * dtau) * (kappa + al * dkappa)
            xs = float((x + al * dx) @ (s + al * ds))
            mup = (xs + tk) / (nu + 1)
            if not np.isfinite(mup) or mup <= 0 or tk < gamma * mup:
                return False
            for blk, st, ln in block_slices():
                k = blk.real_dim
                Xp = smat(x[st:st + ln] + al * dx[st:st + ln], k)
                Sp = smat(s[st:st + ln] + al * ds[st:st + ln], k)
                try:
                    Lc = npl.cholesky(Xp)
                except npl.LinAlgError:
                    return False
                if npl.eigvalsh(Lc.T @ Sp @ Lc)[0] < gamma * mup:
                    return False
            return True

        def admitted(alpha, dx, ds, dtau, dkappa) -> float:
            while alpha > 1e-10 and not centered(alpha, dx, ds, dtau, dkappa):
                alpha *= 0.8
            return alpha

        # affine probe fixes the centering weight (floored: every step recenters)
        dxa, dya, dtaua, dsa, dkappaa = newton(0.0, 1.0)
        alpha_a = min(1.0, boundary(dxa, dsa, dtaua, dkappaa))
        mu_aff = (float((x + alpha_a * dxa) @ (s + alpha_a * dsa))
                  + (tau + alpha_a * dtaua) * (kappa + alpha_a * dkappaa)) / (nu + 1)
        sigma = min(0.9999, max(sigma_min, max(0.0, (mu_aff / mu)) ** 3))

        dx, dy, dtau, ds, dkappa = newton(sigma, 1.0 - sigma)
        alpha = min(1.0, step_frac * boundary(dx, ds, dtau, dkappa))
        alpha = admitted(alpha, dx, ds, dtau, dkappa)
        if not np.isfinite(alpha) or alpha <= 1e-10:
            # blocked: one pure-centering attempt before giving up
            dx, dy, dtau, ds, dkappa = newton(0.8, 0.2)
            alpha = min(1.0, step_frac * boundary(dx, ds, dtau, dkappa))
            alpha = admitted(alpha, dx, ds, dtau, dkappa)
            if not np.isfinite(alpha) or alpha <= 1e-10:
                return final("numerical-failure", *best[1][:4], best[1][4], best[1][5])

        x = x + alpha * dx
        y = y + alpha * dy
        s = s + alpha * ds
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
        if tau <= 0 or kappa < 0 or not np.isfinite(x).all():
            return final("numerical-failure", *best[1][:4], best[1][4], best[1][5])

    bx, by_, bs, btau, bit, bmeas = best[1]
    return final("numerical-failure", bx, by_, bs, btau, iters, bmeas)


def solve_or_raise(program: ConicProgram, options: SolveOptions | None = None,
                   what: str = "SDP") -> ConicSolution:
    """solve(), raising SolverFailureError unless the status is `optimal`."""
    sol = solve(program, options)
    if sol.status != "optimal":
        raise SolverFailureError(f"{what} ended with status {sol.status}", sol)
    return sol


# ---------------------------------------------------------------------------
# The weighted trace-norm identity and its SDP twin
# ---------------------------------------------------------------------------

def holevo_lemma_value(W: np.ndarray, A: np.ndarray, B: np.ndarray) -> float:
    """Closed form Tr(W A) + TrAbs(W B), W symmetric > 0, A symmetric, B antisymmetric.

    Equals min{Tr(W V) : V real symmetric, V >= A + iB}; the agreement is a
    property test against holevo_lemma_sdp_value. The trace-norm term is
    evaluated through the PSD congruence (singular values of sqrt(W) B
    sqrt(W)), which never forms a non-normal eigenproblem.
    """
    W = np.asarray(W, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if npl.eigvalsh((W + W.T) / 2)[0] <= 0:
        raise ValueError("weight matrix must be strictly positive")
    return float(np.trace(W @ A)) + weighted_trace_abs(W, B)


def holevo_lemma_sdp_value(W: np.ndarray, A: np.ndarray, B: np.ndarray,
                           options: SolveOptions | None = None) -> ConicSolution:
    """min Tr(W V) over real symmetric V >= A + iB, as one Hermitian-block SDP.

    The variable is Z = V - A - iB >= 0; realness of V pins Im Z = -B on the
    strict upper triangle, and the objective is <W, Z> + Tr(W A).
    """
    W = np.asarray(W, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    k = W.shape[0]
    prog = ConicProgram()
    z = prog.add_psd_block(k, complex_=True)
    for a in range(k):
        for bb in range(a + 1, k):
            prog.add_eq({z: im_entry_coeff(k, a, bb)}, rhs=-B[a, bb])
    prog.set_objective({z: W.astype(complex)}, offset=float(np.trace(W @ A)))
    return solve(prog, options)


def random_lemma_triple(rng: np.random.Generator, k: int):
    """Random (W, A, B): W symmetric > 0, A symmetric, B antisymmetric."""
    G = rng.standard_normal((k, k))
    W = G @ G.T + k * np.eye(k) * 0.1
    A0 = rng.standard_normal((k, k))
    A = (A0 + A0.T) / 2
    B0 = rng.standard_normal((k, k))
    B = (B0 - B0.T) / 2
    return W, A, B


def holevo_lemma_suite(trials: int = 50, seed: int = 0,
                       sizes: tuple = (2, 3, 4),
                       options: SolveOptions | None = None) -> list[dict]:
    """Closed form vs SDP on random triples; one result dict per trial.

    Each dict carries both values, their absolute difference, and the solve
    status; CLI `lemmas` and the acceptance run both consume this.
    """
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        k = int(sizes[t % len(sizes)])
        W, A, B = random_lemma_triple(rng, k)
        closed = holevo_lemma_value(W, A, B)
        sol = holevo_lemma_sdp_value(W, A, B, options)
        out.append({
            "trial": t, "dim": k,
            "closed_form": closed,
            "sdp_value": sol.primal_value,
            "abs_diff": abs(closed - sol.primal_value),
            "status": sol.status,
        })
    return out
