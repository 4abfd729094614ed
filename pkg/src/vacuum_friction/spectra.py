"""Fluctuation kernels: Bose occupation, emission-rate spectrum Gamma(w),
radiated power spectrum, vacuum Green tensor and FDT correlators.

Bose factors enter Gamma split into the zero-point step and an
exponentially decaying thermal part, each multiplied by a factor of w or
w - Omega, so Gamma is finite and continuous at w = 0 and w = Omega and
free of cancellation in the negative-frequency tail.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import C_LIGHT, HBAR, K_B, thermal_angular_frequency
from .errors import DomainError, SingularityError
from .polarizability import PAR, PERP, ParticleGeometry, PolarizabilitySpec

# value returned by bose_einstein at omega == 0
POLE = math.inf


class DipolarValidityWarning(UserWarning):
    """The particle is not small compared with the relevant wavelengths."""


def bose_einstein(omega, T):
    """Occupation 1/(exp(hbar w / kB T) - 1).

    At T = 0 this is the two-sided limit: 0 for w > 0 and -1 for w < 0.
    At w = 0 the pole marker ``POLE`` is returned.
    """
    if T < 0:
        raise DomainError(f"temperature must be non-negative, got {T!r}")
    w = np.asarray(omega, dtype=float)
    if T == 0:
        n = np.where(w > 0, 0.0, -1.0)
    else:
        x = HBAR * w / (K_B * T)
        with np.errstate(over="ignore", divide="ignore"):
            n = 1.0 / np.expm1(x)
    return np.where(w == 0, POLE, n)[()]


def omega_bose(omega, T):
    """w * n(w, T), which is smooth through w = 0 (limit kB T / hbar)."""
    if T < 0:
        raise DomainError(f"temperature must be non-negative, got {T!r}")
    w = np.asarray(omega, dtype=float)
    if T == 0:
        return np.where(w > 0, 0.0, -w)[()]
    x = HBAR * w / (K_B * T)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        val = w / np.expm1(x)
    return np.where(x == 0, K_B * T / HBAR, val)[()]


def local_density_of_states(omega):
    """Free-space photonic LDOS w^2 / (pi^2 c^3).

    Every emission rate goes through this function, so a modified photonic
    environment only needs to replace it.
    """
    w = np.asarray(omega, dtype=float)
    return (w * w / (math.pi**2 * C_LIGHT**3))[()]


@dataclass(frozen=True)
class SpinSystem:
    """A particle at temperature T1 spinning at Omega (about z) in vacuum at T0."""

    geometry: ParticleGeometry
    spec: PolarizabilitySpec
    T0: float
    T1: float
    Omega: float

    def __post_init__(self):
        for name in ("T0", "T1", "Omega"):
            value = getattr(self, name)
            if not value >= 0:
                raise DomainError(f"{name} must be non-negative, got {value!r}")
        a = self.geometry.radius
        if self.Omega * a / C_LIGHT >= 0.1:
            warnings.warn(
                f"Omega a / c = {self.Omega * a / C_LIGHT:.3g} is not small; dipole model unreliable",
                DipolarValidityWarning,
                stacklevel=3,
            )
        size = K_B * max(self.T0, self.T1) * a / (C_LIGHT * HBAR)
        if size >= 0.1:
            warnings.warn(
                f"kB T a / (c hbar) = {size:.3g} is not small; dipole model unreliable",
                DipolarValidityWarning,
                stacklevel=3,
            )

    @property
    def theta0(self) -> float:
        return float(thermal_angular_frequency(self.T0))

    @property
    def theta1(self) -> float:
        return float(thermal_angular_frequency(self.T1))

    def replace(self, **changes) -> "SpinSystem":
        return replace(self, **changes)


@dataclass(frozen=True)
class SpectralGrid:
    omegas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        if np.any(np.diff(om) <= 0):
            raise DomainError("spectral grid frequencies must be strictly increasing")
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


def thermal_occupation_weighted(omega, T):
    """|w| n(|w|, T): the thermal part of ``w n(w)`` with the zero-point step removed.

    Uses n(w) = -step(-w) + sign(w) n(|w|). Unlike ``w n(w)`` this decays
    on both sides, so differences of occupations at large negative
    frequency carry no cancellation error.
    """
    return omega_bose(np.abs(np.asarray(omega, dtype=float)), T)


def gamma_spectral(system: SpinSystem, omega):
    """Spectral emission rate Gamma(w) in s^-1 per rad/s (lab-frame photon
    frequency w; positive w*Gamma means emission)."""
    spec, Om = system.spec, system.Omega
    w = np.asarray(omega, dtype=float)
    nu = w - Om
    rho = local_density_of_states(w)
    # g(nu) = nu h(nu); factoring h out makes detailed balance exact in floating point
    h_perp = spec.g_over_omega(PERP, nu)
    s0 = thermal_occupation_weighted(w, system.T0)

    # n1(nu) - n0(w) = [step(-w) - step(-nu)] + thermal parts
    step = (w < 0).astype(float) - (nu < 0).astype(float)
    perp = 2.0 * rho * h_perp * (
        w * nu * step + w * thermal_occupation_weighted(nu, system.T1) - nu * s0
    )
    par = w * rho * spec.g_over_omega(PAR, w) * (
        thermal_occupation_weighted(w, system.T1) - s0
    )
    return (2.0 * math.pi / 3.0 * (perp + par))[()]


def gamma_spectral_scale(system: SpinSystem, omega):
    """Sum of the magnitudes of the terms that make up Gamma(w).

    Gamma can vanish by cancellation (T1 = T0 at Omega = 0); this is the
    size of what cancels, i.e. the reference for rounding error.
    """
    spec, Om = system.spec, system.Omega
    w = np.asarray(omega, dtype=float)
    nu = w - Om
    rho = local_density_of_states(w)
    h_perp = np.abs(spec.g_over_omega(PERP, nu))
    s0 = thermal_occupation_weighted(w, system.T0)
    step = np.abs((w < 0).astype(float) - (nu < 0).astype(float))
    perp = 2.0 * rho * h_perp * (
        np.abs(w * nu) * step + np.abs(w) * thermal_occupation_weighted(nu, system.T1) + np.abs(nu) * s0
    )
    par = np.abs(w * rho * spec.g_over_omega(PAR, w)) * (
        thermal_occupation_weighted(w, system.T1) + s0
    )
    return (2.0 * math.pi / 3.0 * (perp + par))[()]


def emission_spectrum(system: SpinSystem, omega):
    """Radiated power per unit frequency, hbar w [Gamma(w) - Gamma(-w)]."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise DomainError("emission spectrum is defined for omega > 0")
    both = gamma_spectral(system, np.concatenate([np.atleast_1d(w), -np.atleast_1d(w)]))
    n = np.atleast_1d(w).size
    val = HBAR * np.atleast_1d(w) * (both[:n] - both[n:])
    return val[0] if w.ndim == 0 else val


def emission_spectrum_grid(system: SpinSystem, omegas) -> SpectralGrid:
    omegas = np.asarray(omegas, dtype=float)
    return SpectralGrid(omegas, emission_spectrum(system, omegas))


def vacuum_green_tensor(r, r_prime, omega) -> np.ndarray:
    """Free-space dipole Green tensor G(r, r', w) in cm^-3."""
    R = np.asarray(r, dtype=float) - np.asarray(r_prime, dtype=float)
    dist = float(np.linalg.norm(R))
    if dist == 0:
        raise SingularityError(
            "Green tensor diverges at r = r'; use coincident_green_imag / "
            "local_density_of_states for the coincidence limit"
        )
    k = omega / C_LIGHT
    kR = k * dist
    rr = np.outer(R, R) / dist**2
    pref = np.exp(1j * kR) / dist**3
    return pref * ((kR**2 + 1j * kR - 1) * np.eye(3) - (kR**2 + 3j * kR - 3) * rr)


def coincident_green_imag(omega) -> np.ndarray:
    """Im G_ij(r, r, w) = (2 pi^2 w / 3) rho0(w) delta_ij."""
    return 2.0 * math.pi**2 * omega / 3.0 * local_density_of_states(omega) * np.eye(3)


def fdt_correlator(omega, T, im_chi):
    """S(w) = 2 hbar [n(w) + 1] Im chi(w)."""
    w = np.asarray(omega, dtype=float)
    return (2.0 * HBAR * (_n_plus_one(w, T)) * np.asarray(im_chi))[()]


def fdt_correlator_reversed(omega, T, im_chi):
    """Reverse-ordered correlator 2 hbar n(w) Im chi(w)."""
    w = np.asarray(omega, dtype=float)
    return (2.0 * HBAR * bose_einstein(w, T) * np.asarray(im_chi))[()]


def fdt_correlator_symmetrized(omega, T, im_chi):
    """Symmetrized correlator 2 hbar [n(w) + 1/2] Im chi(w)."""
    w = np.asarray(omega, dtype=float)
    return (2.0 * HBAR * (bose_einstein(w, T) + 0.5) * np.asarray(im_chi))[()]


def _n_plus_one(w, T):
    if T == 0:
        return np.where(w > 0, 1.0, 0.0)
    x = HBAR * w / (K_B * T)
    with np.errstate(over="ignore", divide="ignore"):
        # n + 1 = -n(-w), written to stay accurate for large negative x
        return np.where(w == 0, POLE, -1.0 / np.expm1(-x))
