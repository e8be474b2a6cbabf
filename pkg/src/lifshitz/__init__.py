"""Casimir-Lifshitz plates with constant reflection coefficients.

Pressures, free energies, entropy, real-frequency spectra and back-reaction in
natural units (hbar = c = k_B = 1), each closed form paired with an
independent quadrature check in :mod:`lifshitz.oracle`.
"""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .backreaction import (FlowState, ScalingFit, free_energy_correction_scaling, generalized_force,
                           one_loop_correction, pressure_correction, pressure_correction_scaling,
                           reflectivity_flow)
from .errors import (ConvergenceError, DegenerateFitError, DomainError, NumericalWarning,
                     RegimeWarning, SingularityError)
from .planar import (AsymptoticSeries, CavityState, ReflectivityPair, ThermalSeries, asymptotic_series,
                     entropy, free_energy, free_energy_geometric, free_energy_high_t, free_energy_low_t,
                     free_energy_matsubara, free_energy_zero_t, ideal_conductor_expansion,
                     ideal_free_energy, ideal_pressure, pressure, pressure_geometric, pressure_thermal,
                     pressure_zero_t)
from .polylog import (PolylogResult, bernoulli, li_real, li_reduced, li_unit_circle,
                      li_unit_circle_array, robinson_expansion, zeta_int)
from .spectrum import (SpectrumIntegral, SpectrumSample, ideal_jump, integrate_spectrum,
                       regulated_integral, spectral_density, spectral_density_array)

__all__ = [
    "__version__",
    "BACKEND",
    "FlowState",
    "ScalingFit",
    "free_energy_correction_scaling",
    "generalized_force",
    "one_loop_correction",
    "pressure_correction",
    "pressure_correction_scaling",
    "reflectivity_flow",
    "ConvergenceError",
    "DegenerateFitError",
    "DomainError",
    "NumericalWarning",
    "RegimeWarning",
    "SingularityError",
    "AsymptoticSeries",
    "CavityState",
    "ReflectivityPair",
    "ThermalSeries",
    "asymptotic_series",
    "entropy",
    "free_energy",
    "free_energy_geometric",
    "free_energy_high_t",
    "free_energy_low_t",
    "free_energy_matsubara",
    "free_energy_zero_t",
    "ideal_conductor_expansion",
    "ideal_free_energy",
    "ideal_pressure",
    "pressure",
    "pressure_geometric",
    "pressure_thermal",
    "pressure_zero_t",
    "PolylogResult",
    "bernoulli",
    "li_real",
    "li_reduced",
    "li_unit_circle",
    "li_unit_circle_array",
    "robinson_expansion",
    "zeta_int",
    "SpectrumIntegral",
    "SpectrumSample",
    "ideal_jump",
    "integrate_spectrum",
    "regulated_integral",
    "spectral_density",
    "spectral_density_array",
]
