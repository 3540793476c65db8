"""Liouvillians for the full qubit-photon-phonon model and the reduced models."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..coeffs import RateCoefficients, SecularCoefficients
from ..errors import DimensionOverflow
from ..moments import residual_detuning
from ..params import SystemParams, validate
from .operators import (SIGMA_MINUS, SIGMA_Z, FockConfig, commutator_term, coherent_term,
                        dag, destroy, hamiltonian_term, identity, kron_all, sandwich, spost,
                        spre)

# Largest Liouville dimension the builders accept.
MAX_FULL_DIM = 2_000_000
MAX_MODE_DIM = 4_000_000


@dataclass
class KronStructure:
    """L = A0 (x) I + I (x) B0 + sum_k Ak (x) Bk in (qubit+photon) x phonon Liouville order.

    ``m`` and ``n`` are the Hilbert dimensions of the two factors.
    """
    A0: sp.csr_matrix
    B0: sp.csr_matrix
    couplings: list
    m: int
    n: int

    def to_kron(self, x: np.ndarray) -> np.ndarray:
        m, n = self.m, self.n
        return x.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)

    def from_kron(self, X: np.ndarray) -> np.ndarray:
        m, n = self.m, self.n
        return X.reshape(m, m, n, n).transpose(0, 2, 1, 3).ravel()

    def apply_kron(self, X: np.ndarray) -> np.ndarray:
        """L acting on X of shape (m*m, n*n)."""
        Y = self.A0 @ X + (self.B0 @ X.T).T
        for Ak, Bk in self.couplings:
            Y += Ak @ (Bk @ X.T).T
        return Y


@dataclass
class Superoperator:
    """Sparse Liouvillian acting on row-major vec(rho).

    When ``basis`` is set the matrix is restricted to those Liouville indices
    (an invariant sector); entries of rho outside it are zero in steady state.
    """
    matrix: sp.csr_matrix
    dims: tuple
    basis: np.ndarray | None = None
    structure: KronStructure | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def hilbert_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def trace_vector(self) -> np.ndarray:
        d = self.hilbert_dim
        w = np.zeros(d * d)
        w[np.arange(d) * (d + 1)] = 1.0
        return w if self.basis is None else w[self.basis]

    def embed(self, v: np.ndarray) -> np.ndarray:
        """Sector vector -> full d x d matrix."""
        d = self.hilbert_dim
        if self.basis is None:
            return np.asarray(v, dtype=complex).reshape(d, d)
        full = np.zeros(d * d, dtype=complex)
        full[self.basis] = v
        return full.reshape(d, d)

    def restrict(self, rho: np.ndarray) -> np.ndarray:
        flat = np.asarray(rho, dtype=complex).ravel()
        return flat if self.basis is None else flat[self.basis]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.embed(self.matrix @ self.restrict(rho))


def _check_dim(d: int, cap: int):
    if d * d > cap:
        raise DimensionOverflow(f"Liouville dimension {d * d} exceeds cap {cap}")


def full_parts(p: SystemParams, f: FockConfig) -> KronStructure:
    na, nb = f.n_photon_max + 1, f.n_phonon_max + 1
    Ia = identity(na)
    a = kron_all(identity(2), destroy(na))
    sm = kron_all(sp.csr_matrix(SIGMA_MINUS), Ia)
    sz = kron_all(sp.csr_matrix(SIGMA_Z), Ia)
    sp_ = dag(sm)
    ad = dag(a)
    H_qa = (p.Delta * sz - p.Delta1 * (ad @ a) + p.Omega * (sp_ + sm)
            + p.g * (ad @ sm + a @ sp_))
    A0 = (hamiltonian_term(H_qa)
          + commutator_term(p.gamma, sp_, sm)
          + commutator_term(p.gamma_c, sz, sz)
          + commutator_term(p.kappa_a, ad, a))
    b = destroy(nb)
    bd = dag(b)
    B0 = (hamiltonian_term(p.omega * (bd @ b))
          + commutator_term(p.kappa_b * (1 + p.nbar), bd, b)
          + commutator_term(p.kappa_b * p.nbar, b, bd))
    X = b + bd
    couplings = [(-1j * p.lam * spre(sz), spre(X)),
                 (1j * p.lam * spost(sz), spost(X))]
    return KronStructure(A0=A0.tocsr(), B0=B0.tocsr(),
                         couplings=[(A.tocsr(), B.tocsr()) for A, B in couplings],
                         m=2 * na, n=nb)


def build_full_liouvillian(p: SystemParams, f: FockConfig,
                           max_dim: int = MAX_FULL_DIM) -> Superoperator:
    """Liouvillian of the driven qubit coupled to the cavity and the phonon mode."""
    validate(p, require_drive=False)
    dims = (2, f.n_photon_max + 1, f.n_phonon_max + 1)
    _check_dim(int(np.prod(dims)), max_dim)
    ks = full_parts(p, f)
    m, n = ks.m, ks.n
    K = sp.kron(ks.A0, identity(n * n)) + sp.kron(identity(m * m), ks.B0)
    for Ak, Bk in ks.couplings:
        K = K + sp.kron(Ak, Bk)
    K = K.tocsr()
    # canonical index (i, j, i', j') -> kron index (i, i', j, j')
    kidx = np.arange(m * m * n * n).reshape(m, m, n, n).transpose(0, 2, 1, 3).ravel()
    L = K[kidx][:, kidx].tocsr()
    return Superoperator(matrix=L, dims=dims, structure=ks, label="full")


def _mode_ops(f: FockConfig):
    na, nb = f.n_photon_max + 1, f.n_phonon_max + 1
    a = kron_all(destroy(na), identity(nb))
    b = kron_all(identity(na), destroy(nb))
    return (na, nb), a, b


def excitation_sector(f: FockConfig) -> np.ndarray:
    """Liouville indices of |na, nb><na', nb'| with na + nb = na' + nb'."""
    na, nb = f.n_photon_max + 1, f.n_phonon_max + 1
    exc = (np.arange(na)[:, None] + np.arange(nb)[None, :]).ravel()
    d = na * nb
    i, j = np.nonzero(exc[:, None] == exc[None, :])
    return np.sort(i * d + j)


def _finish(L, dims, f, sector, label, meta=None):
    L = L.tocsr()
    basis = None
    if sector:
        basis = excitation_sector(f)
        L = L[basis][:, basis].tocsr()
    L.eliminate_zeros()
    return Superoperator(matrix=L, dims=dims, basis=basis, label=label, meta=meta or {})


def build_reduced_liouvillian(r: RateCoefficients, p: SystemParams, f: FockConfig,
                              sector: bool = True,
                              max_dim: int = MAX_MODE_DIM) -> Superoperator:
    """Photon-phonon master equation with the dressed-state rate coefficients.

    Coefficients enter starred (the stored values are un-starred).  With
    ``sector`` the Liouvillian is restricted to the excitation-conserving
    coherences, which are the only ones populated in steady state.
    """
    dims, a, b = _mode_ops(f)
    _check_dim(int(np.prod(dims)), max_dim)
    ad, bd = dag(a), dag(b)
    cj = np.conj
    H = 0.5 * (p.Delta1 + p.omega) * (bd @ b - ad @ a)
    L = (hamiltonian_term(H)
         + commutator_term(cj(r.A1), a, ad)
         + commutator_term(cj(r.B1), ad, a)
         + commutator_term(cj(r.A2), b, bd)
         + commutator_term(cj(r.B2), bd, b)
         + commutator_term(-cj(r.C1), b, ad)
         + commutator_term(-cj(r.D1), bd, a)
         + commutator_term(-cj(r.C2), ad, b)
         + commutator_term(-cj(r.D2), a, bd))
    return _finish(L, dims, f, sector, "reduced")


def build_secular_liouvillian(s: SecularCoefficients, p: SystemParams, f: FockConfig,
                              sector: bool = True,
                              max_dim: int = MAX_MODE_DIM) -> Superoperator:
    """Beam-splitter model with exchange rate eta and the bare mode losses."""
    dims, a, b = _mode_ops(f)
    _check_dim(int(np.prod(dims)), max_dim)
    ad, bd = dag(a), dag(b)
    det = residual_detuning(p, s)
    L = (coherent_term(0.25j * det, ad @ a - bd @ b)
         + coherent_term(1j * s.eta, a @ bd)
         + commutator_term(p.kappa_a, ad, a)
         + commutator_term(p.kappa_b * (1 + p.nbar), bd, b)
         + commutator_term(p.kappa_b * p.nbar, b, bd))
    return _finish(L, dims, f, sector, "secular")


__all__ = ["KronStructure", "Superoperator", "full_parts", "build_full_liouvillian",
           "build_reduced_liouvillian", "build_secular_liouvillian", "excitation_sector",
           "sandwich"]
