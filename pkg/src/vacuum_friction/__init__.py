"""Vacuum friction and thermal emission of spinning nanoparticles."""

__version__ = "0.1.0"

from .constants import (
    CONSTANTS,
    conductivity_si_to_gaussian,
    temperature_from_thermal_frequency,
    thermal_angular_frequency,
)
from .dynamics import (
    SpinDownTrajectory,
    friction_coefficient_beta,
    moment_of_inertia,
    spin_down_trajectory,
    stopping_time_drude,
    stopping_time_numeric,
)
from .equilibrium import equilibrium_curve, equilibrium_temperature
from .errors import ConfigError, NumericalError, VacuumFrictionError
from .material import DrudeModel, PermittivityTable, TabulatedMaterial, load_permittivity_table
from .observables import (
    ObservableSet,
    QuadratureConfig,
    compute_observables,
    peak_emission_frequency,
)
from .polarizability import ParticleGeometry, PolarizabilitySpec, drude_linear_spec, material_spec
from .spectra import SpinSystem, emission_spectrum, gamma_spectral

__all__ = [
    "CONSTANTS",
    "ConfigError",
    "DrudeModel",
    "NumericalError",
    "ObservableSet",
    "ParticleGeometry",
    "PermittivityTable",
    "PolarizabilitySpec",
    "QuadratureConfig",
    "SpinDownTrajectory",
    "SpinSystem",
    "TabulatedMaterial",
    "VacuumFrictionError",
    "compute_observables",
    "conductivity_si_to_gaussian",
    "drude_linear_spec",
    "emission_spectrum",
    "equilibrium_curve",
    "equilibrium_temperature",
    "friction_coefficient_beta",
    "gamma_spectral",
    "load_permittivity_table",
    "material_spec",
    "moment_of_inertia",
    "peak_emission_frequency",
    "spin_down_trajectory",
    "stopping_time_drude",
    "stopping_time_numeric",
    "temperature_from_thermal_frequency",
    "thermal_angular_frequency",
]
