"""Phonon cooling through a driven two-level system coupled to a lossy cavity."""
from .coeffs import rate_coefficients, secular_coefficients, secular_validity_report
from .moments import (MomentState, build_generator, build_secular_generator, evolve,
                      matched_detuning, secular_steady_state, steady_state)
from .params import DressedParams, SystemParams, derive_dressed, fig2_params, validate

__all__ = [
    "rate_coefficients", "secular_coefficients", "secular_validity_report", "MomentState",
    "build_generator", "build_secular_generator", "evolve", "matched_detuning",
    "secular_steady_state", "steady_state", "DressedParams", "SystemParams", "derive_dressed",
    "fig2_params", "validate",
]
