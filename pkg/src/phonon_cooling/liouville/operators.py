"""Fock-space operators, density operators and superoperator helpers.

Vectorization is row-major: vec(rho)[i*d + j] = rho[i, j], so that
vec(A rho B) = (A kron B^T) vec(rho).

Subsystem order is qubit, photon, phonon.  The qubit basis is (|g>, |e>), so
S^- = |g><e| and S_z = diag(-1/2, 1/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError
from ..moments import MomentState
from ..params import SystemParams

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_Z = np.diag([-0.5, 0.5]).astype(complex)


@dataclass(frozen=True)
class FockConfig:
    n_photon_max: int = 6
    n_phonon_max: int = 40
    tail_tol: float = 1e-8

    def __post_init__(self):
        if self.n_photon_max < 2 or self.n_phonon_max < 2:
            raise ConfigError("Fock truncations must be >= 2")
        if not self.tail_tol > 0:
            raise ConfigError("tail_tol must be > 0")


def thermal_levels(nbar: float, tail_tol: float = 1e-8) -> int:
    """Smallest N with (nbar/(1+nbar))**N < tail_tol."""
    if nbar <= 0:
        return 0
    ratio = nbar / (1.0 + nbar)
    return int(math.floor(math.log(tail_tol) / math.log(ratio))) + 1


def default_fock(p: SystemParams, tail_tol: float = 1e-8) -> FockConfig:
    n_b = min(max(thermal_levels(p.nbar, tail_tol), 10), 80)
    return FockConfig(n_photon_max=6, n_phonon_max=n_b, tail_tol=tail_tol)


def geometric_tail_levels(mean: float, tail_tol: float) -> int:
    """Smallest N whose top-level population of a geometric distribution is below tail_tol."""
    mean = max(mean, 0.0)
    if mean == 0:
        return 2
    ratio = mean / (1.0 + mean)
    n = math.log(tail_tol * (1.0 + mean)) / math.log(ratio)
    return max(2, int(math.floor(n)) + 1)


def fock_for_moments(naa: float, nbb: float, tail_tol: float = 1e-8, margin: int = 2,
                     cap: int = 120) -> FockConfig:
    """Truncation sized from expected occupations, assuming geometric marginals.

    Exact for the Gaussian steady states of the quadratic models.
    """
    na = min(geometric_tail_levels(naa, tail_tol) + margin, cap)
    nb = min(geometric_tail_levels(nbb, tail_tol) + margin, cap)
    return FockConfig(n_photon_max=na, n_phonon_max=nb, tail_tol=tail_tol)


def destroy(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n, dtype=float)), 1, shape=(n, n), format="csr",
                    dtype=complex)


def identity(n: int) -> sp.csr_matrix:
    return sp.identity(n, dtype=complex, format="csr")


def kron_all(*ops) -> sp.csr_matrix:
    out = ops[0]
    for op in ops[1:]:
        out = sp.kron(out, op, format="csr")
    return sp.csr_matrix(out)


def dag(op):
    return op.conj().T.tocsr() if sp.issparse(op) else op.conj().T


def spre(A) -> sp.csr_matrix:
    """Superoperator rho -> A rho."""
    return sp.kron(sp.csr_matrix(A), identity(A.shape[0]), format="csr")


def spost(B) -> sp.csr_matrix:
    """Superoperator rho -> rho B."""
    return sp.kron(identity(B.shape[0]), sp.csr_matrix(B).T, format="csr")


def sandwich(A, B) -> sp.csr_matrix:
    """Superoperator rho -> A rho B."""
    return sp.kron(sp.csr_matrix(A), sp.csr_matrix(B).T, format="csr")


def hamiltonian_term(H) -> sp.csr_matrix:
    """-i [H, rho]."""
    return -1j * (spre(H) - spost(H))


def commutator_term(x: complex, O1, O2) -> sp.csr_matrix:
    """-x [O1, O2 rho] + h.c., expanded term by term.

    = -x O1 O2 rho + x O2 rho O1 - x* rho O2^+ O1^+ + x* O1^+ rho O2^+
    """
    O1 = sp.csr_matrix(O1)
    O2 = sp.csr_matrix(O2)
    xc = np.conj(x)
    return (-x * spre(O1 @ O2) + x * sandwich(O2, O1)
            - xc * spost(dag(O2) @ dag(O1)) + xc * sandwich(dag(O1), dag(O2)))


def coherent_term(x: complex, Q) -> sp.csr_matrix:
    """x [Q, rho] + h.c."""
    Q = sp.csr_matrix(Q)
    K = x * Q - np.conj(x) * dag(Q)
    return spre(K) - spost(K)


@dataclass
class DensityOperator:
    """Density matrix over a tensor-product space.

    ``dims`` is (2, Na+1, Nb+1) for the full model and (Na+1, Nb+1) for the
    photon-phonon models.
    """
    dims: tuple
    data: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.data = np.asarray(self.data, dtype=complex)
        d = int(np.prod(self.dims))
        if self.data.shape != (d, d):
            raise ValueError(f"data shape {self.data.shape} does not match dims {self.dims}")

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def check(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10,
              pos_tol: float = 1e-8) -> dict:
        report = {
            "hermiticity_error": self.hermiticity_error(),
            "trace_error": abs(self.trace - 1.0),
            "min_eigenvalue": self.min_eigenvalue(),
        }
        report["valid"] = (report["hermiticity_error"] <= herm_tol
                           and report["trace_error"] <= trace_tol
                           and report["min_eigenvalue"] >= -pos_tol)
        return report

    def mode_dims(self) -> tuple[int, int]:
        return self.dims[-2], self.dims[-1]

    def photon_phonon(self) -> np.ndarray:
        """Reduced density matrix of the photon and phonon modes (qubit traced out)."""
        na, nb = self.mode_dims()
        if len(self.dims) == 2:
            return self.data
        q = int(np.prod(self.dims[:-2]))
        t = self.data.reshape(q, na * nb, q, na * nb)
        return np.einsum("iaib->ab", t)

    def populations(self) -> tuple[np.ndarray, np.ndarray]:
        """Photon and phonon Fock-level populations."""
        na, nb = self.mode_dims()
        diag = np.real(np.diag(self.photon_phonon())).reshape(na, nb)
        return diag.sum(axis=1), diag.sum(axis=0)


def moments_of(rho: DensityOperator) -> MomentState:
    na, nb = rho.mode_dims()
    flat = rho.photon_phonon()
    diag = np.real(np.diag(flat)).reshape(na, nb)
    naa = float(np.sum(diag * np.arange(na)[:, None]))
    nbb = float(np.sum(diag * np.arange(nb)[None, :]))
    a = kron_all(destroy(na), identity(nb))
    b = kron_all(identity(na), destroy(nb))
    op_ab = (dag(a) @ b).tocoo()
    # Tr(O rho) = sum_ij O_ij rho_ji
    nab = complex(np.sum(op_ab.data * flat[op_ab.col, op_ab.row]))
    nba = complex(np.sum(np.conj(op_ab.data) * flat[op_ab.row, op_ab.col]))
    return MomentState(naa=naa, nbb=nbb, nab=nab, nba=nba)


@dataclass(frozen=True)
class TruncationReport:
    passed: bool
    photon_tail: float
    phonon_tail: float


def truncation_check(rho: DensityOperator, f: FockConfig) -> TruncationReport:
    pa, pb = rho.populations()
    tail_a, tail_b = float(abs(pa[-1])), float(abs(pb[-1]))
    return TruncationReport(passed=tail_a < f.tail_tol and tail_b < f.tail_tol,
                            photon_tail=tail_a, phonon_tail=tail_b)
