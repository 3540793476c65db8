"""Density-matrix oracles: full model, reduced and secular master equations."""
from .models import (KronStructure, Superoperator, build_full_liouvillian,
                     build_reduced_liouvillian, build_secular_liouvillian, excitation_sector)
from .operators import (DensityOperator, FockConfig, TruncationReport, default_fock,
                        fock_for_moments, moments_of, thermal_levels, truncation_check)
from .solvers import evolve_density, steady_density

__all__ = [
    "KronStructure", "Superoperator", "build_full_liouvillian", "build_reduced_liouvillian",
    "build_secular_liouvillian", "excitation_sector", "DensityOperator", "FockConfig",
    "TruncationReport", "default_fock", "fock_for_moments", "moments_of", "thermal_levels",
    "truncation_check", "evolve_density", "steady_density",
]
