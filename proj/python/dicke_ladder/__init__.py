"""Dicke-ladder model of 2N three-level trapped ions.

Angular frequencies are in rad/ms and times in ms.
"""

from ._core import (
    DomainError,
    NumericalError,
    OptimizationResult,
    PowerLawFit,
    PulseSchedule,
    SimulationTrace,
    SpectrumResult,
    __version__,
    fit_power_law,
    ladder_hamiltonian,
    min_gap,
    optimize_detuning,
    p_coeff,
    p_coefficients,
    propagate,
    run_validation,
    scaling_study,
    spectrum_scan,
    v_element,
    wigner_d_half_pi,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "OptimizationResult",
    "PowerLawFit",
    "PulseSchedule",
    "SimulationTrace",
    "SpectrumResult",
    "__version__",
    "fit_power_law",
    "ladder_hamiltonian",
    "min_gap",
    "optimize_detuning",
    "p_coeff",
    "p_coefficients",
    "propagate",
    "run_validation",
    "scaling_study",
    "spectrum_scan",
    "v_element",
    "wigner_d_half_pi",
]
