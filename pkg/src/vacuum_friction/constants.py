"""Physical constants and unit conversions.

Everything inside the package is Gaussian-CGS. SI, eV and kelvin only appear
at the I/O boundary, and the conversions between the two live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in Gaussian-CGS units."""

    hbar: float = 1.054571817e-27  # erg s
    c: float = 2.99792458e10  # cm/s
    kB: float = 1.380649e-16  # erg/K
    coulomb_factor: float = 8.9875517923e9  # (4 pi eps0)^-1, SI
    ev_to_erg: float = 1.602176634e-12
    year_to_s: float = 3.15576e7  # Julian year


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
C_LIGHT = CONSTANTS.c
K_B = CONSTANTS.kB
EV_TO_ERG = CONSTANTS.ev_to_erg
YEAR_TO_S = CONSTANTS.year_to_s
NM_TO_CM = 1e-7


def _check_nonnegative(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} must be non-negative, got {value!r}")


def thermal_angular_frequency(T):
    """Return 2*pi*kB*T/hbar in rad/s (array-friendly)."""
    _check_nonnegative("temperature", T)
    return 2.0 * math.pi * K_B * np.asarray(T, dtype=float)[()] / HBAR


def temperature_from_thermal_frequency(theta):
    """Inverse of :func:`thermal_angular_frequency`."""
    _check_nonnegative("thermal frequency", theta)
    return HBAR * np.asarray(theta, dtype=float)[()] / (2.0 * math.pi * K_B)


def conductivity_si_to_gaussian(sigma_si):
    """S/m -> s^-1."""
    _check_nonnegative("conductivity", sigma_si)
    return np.asarray(sigma_si, dtype=float)[()] * CONSTANTS.coulomb_factor


def conductivity_gaussian_to_si(sigma):
    """s^-1 -> S/m."""
    _check_nonnegative("conductivity", sigma)
    return np.asarray(sigma, dtype=float)[()] / CONSTANTS.coulomb_factor


def photon_energy_to_angular_frequency(E_ev):
    """Photon energy in eV -> angular frequency in rad/s."""
    _check_nonnegative("photon energy", E_ev)
    return np.asarray(E_ev, dtype=float)[()] * EV_TO_ERG / HBAR


def angular_frequency_to_photon_energy(omega):
    _check_nonnegative("angular frequency", omega)
    return np.asarray(omega, dtype=float)[()] * HBAR / EV_TO_ERG
