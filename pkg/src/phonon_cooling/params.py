"""Physical inputs and the dressed-state quantities derived from them.

All rates and frequencies are in units of the spontaneous decay rate ``gamma``,
which is 1 unless explicitly overridden.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import NegativeRate, ZeroDrive

# config/CLI key -> dataclass field; "lambda" is a Python keyword
FIELD_ALIASES = {"lambda": "lam"}


@dataclass(frozen=True)
class SystemParams:
    gamma_c: float = 0.0
    kappa_a: float = 0.0
    kappa_b: float = 0.0
    g: float = 0.0
    lam: float = 0.0
    Omega: float = 1.0
    Delta: float = 0.0
    Delta1: float = 0.0
    omega: float = 0.0
    nbar: float = 0.0
    gamma: float = 1.0

    def replace(self, **changes) -> "SystemParams":
        changes = {FIELD_ALIASES.get(k, k): v for k, v in changes.items()}
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["lambda"] = out.pop("lam")
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        names = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in data.items():
            name = FIELD_ALIASES.get(key, key)
            if name not in names:
                raise KeyError(f"unknown parameter {key!r}")
            kwargs[name] = float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class DressedParams:
    theta: float
    OmegaR: float
    Gamma_par: float
    Gamma_perp: float
    gamma_plus: float
    gamma_minus: float
    gamma_0: float
    P_plus: float
    P_minus: float


def fig2_params(nbar: float = 10.0, Delta1: float = -50.0) -> SystemParams:
    """Reference parameter set for the steady-state sweeps (Delta/(2 Omega) = 0.5)."""
    Omega = 50.0
    return SystemParams(gamma_c=0.3, kappa_a=0.01, kappa_b=0.001, g=2.0, lam=4.0,
                        Omega=Omega, Delta=2 * Omega * 0.5, Delta1=Delta1,
                        omega=50.0, nbar=nbar)


def validate(p: SystemParams, require_drive: bool = True) -> SystemParams:
    """Check sign constraints and return ``p`` unchanged.

    ``require_drive=False`` admits Omega == 0, which only the bare
    (undressed) Liouvillian can handle.
    """
    for name in ("gamma_c", "kappa_a", "kappa_b", "omega", "nbar", "g", "lam"):
        value = getattr(p, name)
        if not value >= 0:  # also rejects NaN
            raise NegativeRate(f"{name} must be >= 0, got {value}")
    if not p.gamma > 0:
        raise NegativeRate(f"gamma must be > 0, got {p.gamma}")
    if require_drive:
        if not p.Omega > 0:
            raise ZeroDrive(f"Omega must be > 0, got {p.Omega}")
    elif not p.Omega >= 0:
        raise NegativeRate(f"Omega must be >= 0, got {p.Omega}")
    for name in ("Delta", "Delta1"):
        if not math.isfinite(getattr(p, name)):
            raise ValueError(f"{name} must be finite")
    return p


def derive_dressed(p: SystemParams) -> DressedParams:
    validate(p)
    # cot(2 theta) = Delta / (2 Omega), branch 2 theta in (0, pi)
    two_theta = math.atan2(2.0 * p.Omega, p.Delta)
    theta = 0.5 * two_theta
    gamma, gamma_c = p.gamma, p.gamma_c

    OmegaR = math.hypot(p.Omega, 0.5 * p.Delta)
    # algebraic forms keep P+ = P- exact at Delta = 0
    s2, c2 = p.Omega / OmegaR, 0.5 * p.Delta / OmegaR
    c4, s4 = (0.5 * (1.0 + c2)) ** 2, (0.5 * (1.0 - c2)) ** 2
    Gamma_par = gamma * (1.0 - c2**2) + gamma_c * s2**2
    gamma_plus = gamma * c4 + 0.25 * gamma_c * s2**2
    gamma_minus = gamma * s4 + 0.25 * gamma_c * s2**2
    gamma_0 = 0.25 * (gamma * s2**2 + gamma_c * c2**2)
    Gamma_perp = 4.0 * gamma_0 + gamma_plus + gamma_minus
    total = gamma_plus + gamma_minus
    return DressedParams(
        theta=theta,
        OmegaR=OmegaR,
        Gamma_par=Gamma_par,
        Gamma_perp=Gamma_perp,
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        gamma_0=gamma_0,
        P_plus=gamma_minus / total,
        P_minus=gamma_plus / total,
    )
