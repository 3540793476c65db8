"""Steady states and time evolution of Liouvillians.

The steady state solves L rho = 0 with Tr rho = 1.  Adding the rank-one term
u w^T (w the trace functional, u any unit-trace state) gives a nonsingular
system (L + u w^T) rho = u exactly when the steady state is unique.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spl
from scipy.linalg.lapack import ztrsyl

from ..errors import DegenerateSteadyState, NoConvergence
from .models import KronStructure, Superoperator
from .operators import DensityOperator

DENSE_MAX = 64 * 64
DIRECT_MAX = 600_000
RCOND_FLOOR = 1e-13
METHODS = ("auto", "dense", "direct", "iterative")


def _anchor(L: Superoperator, which: int = 0) -> np.ndarray:
    """Projector onto the ``which``-th basis state, as a Liouville vector."""
    w = L.trace_vector()
    u = np.zeros(L.size, dtype=complex)
    u[np.flatnonzero(w)[which]] = 1.0
    return u


def _finish(L: Superoperator, v: np.ndarray, tol: float) -> DensityOperator:
    residual = np.linalg.norm(L.matrix @ v)
    scale = max(1.0, abs(L.matrix).sum(axis=1).max()) * max(np.linalg.norm(v), 1.0)
    if residual > tol * scale:
        raise NoConvergence(f"steady-state residual {residual:.3g} exceeds tolerance")
    rho = L.embed(v)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho)
    return DensityOperator(L.dims, rho)


def _solve_dense(L: Superoperator, check_unique: bool):
    w = L.trace_vector()
    u = _anchor(L)
    A = L.matrix.toarray() + np.outer(u, w)
    lu, piv = sla.lu_factor(A)
    if check_unique:
        anorm = np.abs(A).sum(axis=0).max()
        rcond, _ = sla.lapack.zgecon(lu, anorm, norm="1")
        if rcond < RCOND_FLOOR:
            raise DegenerateSteadyState(f"augmented Liouvillian is singular (rcond={rcond:.3g})")
    return sla.lu_solve((lu, piv), u)


def _solve_direct(L: Superoperator, check_unique: bool):
    w = L.trace_vector()
    u = _anchor(L)
    k = int(np.flatnonzero(u)[0])
    # u w^T has a single nonzero row because u is a basis vector
    row = sp.csr_matrix((w[w != 0].astype(complex), (np.full((w != 0).sum(), k),
                                                     np.flatnonzero(w))), shape=L.matrix.shape)
    A = (L.matrix + row).tocsc()
    try:
        lu = spl.splu(A)
    except RuntimeError as exc:
        raise DegenerateSteadyState(f"augmented Liouvillian is singular: {exc}") from exc
    if check_unique:
        inv = spl.LinearOperator(A.shape, matvec=lu.solve,
                                 rmatvec=lambda x: lu.solve(x, trans="H"), dtype=complex)
        cond = spl.onenormest(A) * spl.onenormest(inv)
        if not np.isfinite(cond) or cond > 1.0 / RCOND_FLOOR:
            raise DegenerateSteadyState(f"augmented Liouvillian is near singular (cond~{cond:.3g})")
    return lu.solve(u)


class KronPreconditioner:
    """Inverse of A0 (x) I + I (x) B0 - sigma, used to precondition Krylov solves.

    A0 is diagonalized directly; B0 splits into blocks of fixed phonon
    coherence order nb - nb', each diagonalized on its own.  When either
    eigenbasis is badly conditioned the Schur forms are used instead.
    """

    def __init__(self, ks: KronStructure, sigma: float = 1e-4, cond_max: float = 1e8):
        A0 = ks.A0.toarray()
        B0T = ks.B0.T.toarray()
        n = ks.n
        nbi, nbj = np.divmod(np.arange(n * n), n)
        order = nbi - nbj
        self.blocks = [np.flatnonzero(order == k) for k in range(-(n - 1), n)]
        la, VA = np.linalg.eig(A0)
        good = np.linalg.cond(VA) < cond_max
        eigs = []
        for idx in self.blocks:
            mu, V = np.linalg.eig(B0T[np.ix_(idx, idx)])
            good = good and np.linalg.cond(V) < cond_max
            eigs.append((mu, V))
        self.mode = "eig" if good else "schur"
        if self.mode == "eig":
            self.VA, self.VAi = VA, np.linalg.inv(VA)
            # phonon indices regrouped block by block
            self.perm = np.concatenate(self.blocks)
            bounds = np.cumsum([0] + [len(idx) for idx in self.blocks])
            self.slices = [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
            self.V = [V for _, V in eigs]
            self.Vi = [np.linalg.inv(V) for _, V in eigs]
            mu_all = np.concatenate([mu for mu, _ in eigs])
            self.den = la[:, None] + mu_all[None, :] - sigma
        else:
            self.TA, self.UA = sla.schur(A0, output="complex")
            self.schur_blocks = []
            for idx in self.blocks:
                sub = B0T[np.ix_(idx, idx)] - sigma * np.eye(len(idx))
                T, U = sla.schur(sub, output="complex")
                self.schur_blocks.append((idx, T, U))

    def __call__(self, R: np.ndarray) -> np.ndarray:
        if self.mode == "eig":
            Rt = (self.VAi @ R)[:, self.perm]
            Y = np.empty_like(Rt)
            for sl, V in zip(self.slices, self.V):
                Y[:, sl] = Rt[:, sl] @ V
            Y /= self.den
            out = np.empty_like(Y)
            for sl, Vi in zip(self.slices, self.Vi):
                out[:, self.perm[sl]] = Y[:, sl] @ Vi
            return self.VA @ out
        Rt = self.UA.conj().T @ R
        out = np.empty_like(Rt)
        for idx, T, U in self.schur_blocks:
            Y, scale, info = ztrsyl(self.TA, T, Rt[:, idx] @ U)
            out[:, idx] = (Y / scale) @ U.conj().T
        return self.UA @ out


def _kron_trace(ks: KronStructure):
    return np.eye(ks.m).ravel(), np.eye(ks.n).ravel()


def _solve_kron(L: Superoperator, u_kind: str, prec: KronPreconditioner, rtol: float,
                maxiter: int, x0=None):
    ks = L.structure
    M, N = ks.m ** 2, ks.n ** 2
    tq, tb = _kron_trace(ks)
    U = np.zeros((M, N), dtype=complex)
    if u_kind == "excited":
        # |e, 0, 0><e, 0, 0|
        q = ks.m // 2
        U[q * ks.m + q, 0] = 1.0
    else:
        U[0, 0] = 1.0

    def matvec(x):
        X = x.reshape(M, N)
        return (ks.apply_kron(X) + U * (tq @ X @ tb)).ravel()

    A = spl.LinearOperator((M * N, M * N), matvec=matvec, dtype=complex)
    P = spl.LinearOperator((M * N, M * N), matvec=lambda r: prec(r.reshape(M, N)).ravel(),
                           dtype=complex)
    x, info = spl.bicgstab(A, U.ravel(), x0=x0, M=P, rtol=rtol, atol=0.0, maxiter=maxiter)
    if info != 0:
        raise NoConvergence(f"BiCGSTAB did not converge (info={info})")
    return x


def _solve_iterative(L: Superoperator, check_unique: bool, rtol: float, maxiter: int):
    # with a unique steady state every anchor reaches the same solution
    loose = max(rtol, 1e-8)
    if L.structure is None:
        x = _solve_gmres(L, rtol, maxiter)
        y = _solve_gmres(L, loose, maxiter, which=1) if check_unique else x
    else:
        ks = L.structure
        prec = KronPreconditioner(ks)
        x = _solve_kron(L, "ground", prec, rtol, maxiter)
        y = _solve_kron(L, "excited", prec, loose, maxiter) if check_unique else x
    # solver noise scales like cond * rtol; a second steady state differs at O(1)
    diff = np.linalg.norm(x - y) / max(np.linalg.norm(x), 1e-300)
    if diff > max(1e-6, 1e4 * loose):
        raise DegenerateSteadyState(f"steady state depends on the anchor (rel diff {diff:.3g})")
    if L.structure is None:
        return x
    return ks.from_kron(x.reshape(ks.m ** 2, ks.n ** 2))


def _solve_gmres(L: Superoperator, rtol: float, maxiter: int, which: int = 0):
    w = L.trace_vector()
    u = _anchor(L, which)
    A = spl.LinearOperator(L.matrix.shape, matvec=lambda x: L.matrix @ x + u * (w @ x),
                           dtype=complex)
    ilu = spl.spilu((L.matrix + sp.diags(np.full(L.size, 1e-8))).tocsc())
    P = spl.LinearOperator(L.matrix.shape, matvec=ilu.solve, dtype=complex)
    x, info = spl.gmres(A, u, M=P, rtol=rtol, atol=0.0, restart=200, maxiter=maxiter)
    if info != 0:
        raise NoConvergence(f"GMRES did not converge (info={info})")
    return x


def choose_method(L: Superoperator) -> str:
    if L.size <= DENSE_MAX:
        return "dense"
    if L.structure is not None or L.size > DIRECT_MAX:
        return "iterative"
    return "direct"


def steady_density(L: Superoperator, method: str = "auto", check_unique: bool = True,
                   tol: float = 1e-10, rtol: float = 1e-10,
                   maxiter: int = 5000) -> DensityOperator:
    """Unique steady state of L, normalized to unit trace.

    Raises DegenerateSteadyState when the null space is not one-dimensional
    and NoConvergence when the iterative path fails.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = choose_method(L)
    if method == "dense":
        v = _solve_dense(L, check_unique)
    elif method == "direct":
        v = _solve_direct(L, check_unique)
    else:
        v = _solve_iterative(L, check_unique, rtol, maxiter)
    return _finish(L, v, tol)


def evolve_density(L: Superoperator, rho0: DensityOperator, times,
                   tol: float = 1e-8) -> list[DensityOperator]:
    """rho(t) = exp(L t) rho0 at each requested time (times start at 0)."""
    times = np.asarray(times, dtype=float)
    if times[0] != 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must start at 0 and be strictly increasing")
    v = L.restrict(rho0.data)
    A = L.matrix.tocsc()
    out = []
    t_prev = 0.0
    for t in times:
        if t > t_prev:
            v = spl.expm_multiply(A * (t - t_prev), v)
        t_prev = t
        rho = DensityOperator(L.dims, L.embed(v))
        if abs(rho.trace - rho0.trace) > tol or rho.hermiticity_error() > tol:
            raise NoConvergence(f"trace or hermiticity drifted at t={t:.6g}")
        out.append(rho)
    return out
