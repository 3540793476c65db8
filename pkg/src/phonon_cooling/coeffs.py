"""Rate coefficients of the reduced photon-phonon master equation.

The closed-form expressions are written for the *starred* (complex-conjugated)
coefficients A1*, A2*, C1*, C2*.  This module evaluates those and returns the
un-starred values; every consumer conjugates where its equation asks for a
starred coefficient.

B_i follows from A_i by exchanging the dressed populations P+ <-> P- and adding
the bath damping (kappa_a to B1, kappa_b to B2).  The thermal term kappa_b*nbar
inside A2 carries no population factor and is left alone by the exchange.

D_i follows from C_i by the same exchange.  The exchange rule admits two
readings, selected by ``cross_convention``:

``"conjugate"`` (default)
    The exchanged expression is the un-starred coefficient:
    B_i = swap(A_i*) + damping and D_i = swap(C_i*).  The imaginary parts of
    A_i and B_i then add up to the frequency shifts, which places the cooling
    resonance at Delta1 + omega = delta_a - delta_b, and the cross terms
    reduce to the coherent exchange i*eta*[a b^+, rho] + h.c. for vanishing
    widths.  The moment drift is stable across the cooling resonance.
``"literal"``
    The exchanged expression is the starred coefficient:
    B_i* = swap(A_i*) + damping and D_i* = swap(C_i*).  The shifts of A_i and
    B_i cancel, and the cross-dissipator is not positive; the moment drift
    turns unstable near Delta1 = -omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateWidths, SecularPole
from .params import DressedParams, SystemParams, derive_dressed

CROSS_CONVENTIONS = ("conjugate", "literal")


@dataclass(frozen=True)
class RateCoefficients:
    A1: complex
    A2: complex
    B1: complex
    B2: complex
    C1: complex
    C2: complex
    D1: complex
    D2: complex

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2")}


@dataclass(frozen=True)
class SecularCoefficients:
    eta: float
    delta_a: float
    delta_b: float


@dataclass(frozen=True)
class SecularValidity:
    ratios: dict
    threshold: float
    secular: bool


def _check_denominators(p: SystemParams, d: DressedParams) -> None:
    two_or = 2.0 * d.OmegaR
    denominators = {
        "Gamma_par -/+ i Delta1": complex(d.Gamma_par, p.Delta1),
        "Gamma_par +/- i omega": complex(d.Gamma_par, p.omega),
        "Gamma_perp, 2 OmegaR - Delta1": complex(d.Gamma_perp, two_or - p.Delta1),
        "Gamma_perp, 2 OmegaR + Delta1": complex(d.Gamma_perp, two_or + p.Delta1),
        "Gamma_perp, 2 OmegaR - omega": complex(d.Gamma_perp, two_or - p.omega),
        "Gamma_perp, 2 OmegaR + omega": complex(d.Gamma_perp, two_or + p.omega),
    }
    for name, z in denominators.items():
        if z == 0:
            raise DegenerateWidths(f"vanishing denominator ({name})")


def starred_expressions(p: SystemParams, d: DressedParams, P_plus: float, P_minus: float):
    """A1*, A2* (without the thermal term), C1*, C2* for given populations.

    The populations are explicit arguments so the P+ <-> P- exchange is a
    plain argument swap.
    """
    th = d.theta
    s, c = math.sin(th), math.cos(th)
    s2, c2 = math.sin(2 * th), math.cos(2 * th)
    g, lam, D1, w = p.g, p.lam, p.Delta1, p.omega
    Gpar, Gperp, OR = d.Gamma_par, d.Gamma_perp, d.OmegaR
    gl = g * lam * s2

    A1s = (0.25 * g**2 * s2**2 / (Gpar - 1j * D1)
           + g**2 * P_minus * s**4 / (Gperp + 1j * (2 * OR - D1))
           + g**2 * P_plus * c**4 / (Gperp - 1j * (2 * OR + D1)))
    A2s = 0.25 * (lam**2 * c2**2 / (Gpar + 1j * w)
                  + lam**2 * P_minus * s2**2 / (Gperp + 1j * (2 * OR + w))
                  + lam**2 * P_plus * s2**2 / (Gperp - 1j * (2 * OR - w)))
    C1s = (0.5 * P_plus * gl * c**2 / (Gperp - 1j * (2 * OR + D1))
           - 0.5 * P_minus * gl * s**2 / (Gperp + 1j * (2 * OR - D1))
           - 0.25 * gl * c2 / (Gpar - 1j * D1))
    C2s = (0.5 * P_minus * gl * c**2 / (Gperp + 1j * (2 * OR - w))
           - 0.5 * P_plus * gl * s**2 / (Gperp - 1j * (2 * OR + w))
           - 0.25 * gl * c2 / (Gpar - 1j * w))
    return A1s, A2s, C1s, C2s


def rate_coefficients(p: SystemParams, d: DressedParams | None = None,
                      cross_convention: str = "conjugate") -> RateCoefficients:
    if d is None:
        d = derive_dressed(p)
    if cross_convention not in CROSS_CONVENTIONS:
        raise ValueError(f"cross_convention must be one of {CROSS_CONVENTIONS}")
    _check_denominators(p, d)

    A1s, A2s, C1s, C2s = starred_expressions(p, d, d.P_plus, d.P_minus)
    B1s, B2s, D1s, D2s = starred_expressions(p, d, d.P_minus, d.P_plus)
    thermal = p.kappa_b * p.nbar
    A2s = A2s + thermal
    B2s = B2s + thermal + p.kappa_b
    B1s = B1s + p.kappa_a

    conj = complex.conjugate
    B1, B2, D1, D2 = (complex(z) for z in (B1s, B2s, D1s, D2s))
    if cross_convention == "literal":
        B1, B2, D1, D2 = conj(B1), conj(B2), conj(D1), conj(D2)
    return RateCoefficients(
        A1=conj(complex(A1s)), A2=conj(complex(A2s)), B1=B1, B2=B2,
        C1=conj(complex(C1s)), C2=conj(complex(C2s)), D1=D1, D2=D2,
    )


def secular_coefficients(p: SystemParams, d: DressedParams | None = None,
                         pole_floor: float = 1e-9) -> SecularCoefficients:
    if d is None:
        d = derive_dressed(p)
    OR, w = d.OmegaR, p.omega
    denom = 4 * OR**2 - w**2
    if abs(denom) < pole_floor * p.gamma**2:
        raise SecularPole(f"|4 OmegaR^2 - omega^2| = {abs(denom):.3g} below floor")
    th = d.theta
    dP = d.P_plus - d.P_minus
    s2, c2 = math.sin(2 * th), math.cos(2 * th)
    delta_a = p.g**2 * dP * (math.sin(th)**4 / (2 * OR + w) + math.cos(th)**4 / (2 * OR - w))
    delta_b = OR * p.lam**2 * s2**2 * dP / denom
    eta = p.g * p.lam * s2 * dP * (OR * c2 + w / 2) / denom
    return SecularCoefficients(eta=eta, delta_a=delta_a, delta_b=delta_b)


def secular_validity_report(p: SystemParams, d: DressedParams | None = None,
                            threshold: float = 0.1) -> SecularValidity:
    """Width-to-splitting ratios that must be small for the secular limit."""
    if d is None:
        d = derive_dressed(p)

    def ratio(width, splitting):
        splitting = abs(splitting)
        return math.inf if splitting == 0 else width / splitting

    two_or = 2 * d.OmegaR
    ratios = {
        "Gamma_par/|Delta1|": ratio(d.Gamma_par, p.Delta1),
        "Gamma_par/omega": ratio(d.Gamma_par, p.omega),
        "Gamma_perp/|2OmegaR+Delta1|": ratio(d.Gamma_perp, two_or + p.Delta1),
        "Gamma_perp/|2OmegaR-Delta1|": ratio(d.Gamma_perp, two_or - p.Delta1),
        "Gamma_perp/|2OmegaR+omega|": ratio(d.Gamma_perp, two_or + p.omega),
        "Gamma_perp/|2OmegaR-omega|": ratio(d.Gamma_perp, two_or - p.omega),
    }
    return SecularValidity(ratios=ratios, threshold=threshold,
                           secular=all(r < threshold for r in ratios.values()))
