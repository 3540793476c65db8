"""Linear equations of motion for the photon/phonon second moments.

The reduced master equation is quadratic in the mode operators, so the four
moments v = (<a^+a>, <b^+b>, <a^+b>, <b^+a>) obey a closed affine system
dv/dt = M v + c.  The secular variant keeps only the photon-phonon exchange
rate eta, which closes on (<a^+a>, <x>, <b^+b>) with x = a b^+ - a^+ b.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .coeffs import RateCoefficients, SecularCoefficients
from .errors import AllLossless, SecularPole, Singular, Unstable
from .params import SystemParams

NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class MomentState:
    naa: float
    nbb: float
    nab: complex
    nba: complex

    def as_vector(self) -> np.ndarray:
        return np.array([self.naa, self.nbb, self.nab, self.nba], dtype=complex)

    @classmethod
    def from_vector(cls, v) -> "MomentState":
        v = np.asarray(v, dtype=complex)
        return cls(naa=float(v[0].real), nbb=float(v[1].real), nab=complex(v[2]), nba=complex(v[3]))

    @property
    def x(self) -> complex:
        """Mean of x = a b^+ - a^+ b."""
        return self.nba - self.nab


@dataclass(frozen=True)
class MomentGenerator:
    M: np.ndarray
    c: np.ndarray

    def rhs(self, v):
        return self.M @ v + self.c


@dataclass(frozen=True)
class SecularState:
    naa: float
    nbb: float
    x: complex


def build_generator(r: RateCoefficients, p: SystemParams) -> MomentGenerator:
    """Drift matrix and source vector for v = (naa, nbb, nab, nba)."""
    cj = np.conj
    A1, A2, B1, B2 = r.A1, r.A2, r.B1, r.B2
    C1, C2, D1, D2 = r.C1, r.C2, r.D1, r.D2
    phase = 1j * (p.Delta1 + p.omega)

    M = np.array([
        [A1 - B1 + cj(A1) - cj(B1), 0, cj(C2) - D2, C2 - cj(D2)],
        [0, A2 - B2 + cj(A2) - cj(B2), -(cj(C1) - D1), -(C1 - cj(D1))],
        [-(C1 - cj(D1)), C2 - cj(D2), cj(A1) - B1 + A2 - cj(B2) - phase, 0],
        [-(cj(C1) - D1), cj(C2) - D2, 0, A1 - cj(B1) + cj(A2) - B2 + phase],
    ], dtype=complex)
    c = np.array([A1 + cj(A1), A2 + cj(A2), -C1 - cj(D2), -cj(C1) - D2], dtype=complex)
    return MomentGenerator(M=M, c=c)


def check_stable(M: np.ndarray) -> np.ndarray:
    eig = np.linalg.eigvals(M)
    if np.max(eig.real) >= 0:
        raise Unstable(f"drift has eigenvalue with Re >= 0 (max Re = {np.max(eig.real):.3g})", eig)
    return eig


def _fixed_point(M, c):
    check_stable(M)
    try:
        v = np.linalg.solve(M, -c)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    residual = np.linalg.norm(M @ v + c)
    if residual > 1e-10 * max(np.linalg.norm(c), np.finfo(float).tiny):
        raise Singular(f"fixed-point residual {residual:.3g} too large")
    return v


def steady_state(gm: MomentGenerator) -> MomentState:
    v = _fixed_point(gm.M, gm.c)
    return MomentState.from_vector(v)


def evolve(gm: MomentGenerator, v0: MomentState, times, rtol: float = 1e-9,
           atol: float = 1e-12) -> list[MomentState]:
    """Integrate dv/dt = M v + c and return the states at ``times``.

    ``times`` must start at 0 and increase strictly.
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must start at 0 and be strictly increasing")
    y0 = v0.as_vector()
    bound = 1e6 * (1 + np.linalg.norm(y0))

    def blowup(t, y):
        return bound - np.linalg.norm(y)
    blowup.terminal = True

    sol = solve_ivp(lambda t, y: gm.M @ y + gm.c, (0.0, times[-1]), y0,
                    method="DOP853", t_eval=times, rtol=rtol, atol=atol, events=blowup)
    if sol.status == 1:
        raise Unstable(f"trajectory norm exceeded {bound:.3g} at t={sol.t_events[0][0]:.6g}")
    if not sol.success:
        raise RuntimeError(sol.message)
    return [MomentState.from_vector(col) for col in sol.y.T]


def build_secular_generator(s: SecularCoefficients, p: SystemParams) -> MomentGenerator:
    """Drift for (naa, <x>, nbb) with the matching condition imposed."""
    eta, ka, kb = s.eta, p.kappa_a, p.kappa_b
    M = np.array([
        [-2 * ka, -1j * eta, 0],
        [-2j * eta, -(ka + kb), 2j * eta],
        [0, 1j * eta, -2 * kb],
    ], dtype=complex)
    c = np.array([0, 0, 2 * kb * p.nbar], dtype=complex)
    return MomentGenerator(M=M, c=c)


def secular_moment_generator(s: SecularCoefficients, p: SystemParams) -> MomentGenerator:
    """Secular dynamics in the (naa, nbb, nab, nba) basis, detuning kept.

    The residual detuning Delta1 + omega - delta_a + delta_b rotates the
    cross-correlations; at the matched detuning this is equivalent to
    ``build_secular_generator``.
    """
    eta, ka, kb = s.eta, p.kappa_a, p.kappa_b
    det = residual_detuning(p, s)
    M = np.array([
        [-2 * ka, 0, 1j * eta, -1j * eta],
        [0, -2 * kb, -1j * eta, 1j * eta],
        [1j * eta, -1j * eta, -(ka + kb) - 1j * det, 0],
        [-1j * eta, 1j * eta, 0, -(ka + kb) + 1j * det],
    ], dtype=complex)
    c = np.array([0, 2 * kb * p.nbar, 0, 0], dtype=complex)
    return MomentGenerator(M=M, c=c)


def secular_steady_state(s: SecularCoefficients, p: SystemParams) -> SecularState:
    ka, kb, eta, nbar = p.kappa_a, p.kappa_b, s.eta, p.nbar
    if ka == 0 and kb == 0:
        raise AllLossless("kappa_a + kappa_b must be > 0")
    if eta == 0:
        # no exchange: cavity empty, resonator thermal
        return SecularState(naa=0.0, nbb=float(nbar), x=0j)
    eta2 = eta * eta
    denom = ka * kb + eta2
    if denom > 0:
        share = kb / (ka + kb)
        naa = nbar * share * (eta2 / denom)
        nbb = nbar * share * (1 + ka * ka / denom)
    elif kb == 0:
        naa = nbb = 0.0
    else:
        # eta^2 underflows with kappa_a ~ 0: both modes share the bath
        naa = nbb = nbar * kb / (ka + kb)
    # d(naa)/dt = 0  =>  -i eta <x> = 2 kappa_a naa
    x = 2j * ka * naa / eta
    return SecularState(naa=naa, nbb=nbb, x=complex(x))


def residual_detuning(p: SystemParams, s: SecularCoefficients) -> float:
    return p.Delta1 + p.omega - s.delta_a + s.delta_b


def matched_detuning(p: SystemParams, s: SecularCoefficients) -> float:
    """Delta1 at which Delta1 + omega = delta_a - delta_b."""
    value = -p.omega + s.delta_a - s.delta_b
    if not np.isfinite(value):
        raise SecularPole("secular shifts are not finite")
    return value
