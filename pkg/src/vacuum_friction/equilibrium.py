"""Thermal balance: the particle temperature at which P_abs vanishes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import HBAR, K_B, temperature_from_thermal_frequency, thermal_angular_frequency
from .errors import BracketError, DomainError, MonotonicityError, NoEquilibriumError, NumericalError
from .observables import DEFAULT_CONFIG, QuadratureConfig, integrate_absorbed_power
from .polarizability import PERP, ParticleGeometry, PolarizabilitySpec, material_spec
from .spectra import SpinSystem

T_REL_TOL = 1e-12
MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class EquilibriumResult:
    T1_star: float  # K
    residual: float  # erg/s
    iterations: int
    bracket: tuple[float, float]


def as_spec(material, geometry: ParticleGeometry, radiative_correction=True) -> PolarizabilitySpec:
    """Accept a ready PolarizabilitySpec or build one from a material model."""
    if isinstance(material, PolarizabilitySpec):
        return material
    return material_spec(material, geometry, radiative_correction)


def _is_lossless(spec: PolarizabilitySpec, omega_scale: float) -> bool:
    hi = omega_scale if not math.isfinite(spec.omega_max) else min(omega_scale, spec.omega_max)
    probe = np.geomspace(1e-6 * hi, hi, 64)
    return not np.any(spec.g(PERP, probe) > 0)


def absorbed_power_at(spec, geometry, T0, T1, Omega, config=DEFAULT_CONFIG) -> float:
    system = SpinSystem(geometry, spec, T0, T1, Omega)
    return integrate_absorbed_power(system, config).value


def equilibrium_temperature(
    material,
    geometry: ParticleGeometry,
    T0: float,
    Omega: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
    check_monotonic: bool | None = None,
) -> EquilibriumResult:
    """Solve P_abs(T1) = 0 for the particle temperature.

    ``material`` is a material model or a PolarizabilitySpec. The root is
    bracketed from [0, 2 max(T0, hbar Omega / kB)] with geometric expansion
    and refined with Brent's method. For tabulated response the sign of
    dP_abs/dT1 is sampled first, because uniqueness of the root rests on it.
    """
    if T0 < 0 or Omega < 0:
        raise DomainError("T0 and Omega must be non-negative")
    spec = as_spec(material, geometry)
    scale = max(thermal_angular_frequency(T0), Omega, 1.0)
    if _is_lossless(spec, 40.0 * scale):
        raise NoEquilibriumError("material does not absorb; no thermal balance exists")

    def f(T1):
        return absorbed_power_at(spec, geometry, T0, T1, Omega, config)

    if Omega == 0:
        return EquilibriumResult(float(T0), f(T0), 0, (float(T0), float(T0)))

    lo = 0.0
    hi = float(2.0 * max(T0, HBAR * Omega / K_B))
    f_lo, f_hi = f(lo), f(hi)
    expansions = 0
    while f_hi > 0:
        expansions += 1
        if expansions > MAX_EXPANSIONS:
            raise BracketError(f"no sign change of P_abs up to T1 = {hi:.6g} K")
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = f(hi)
    if f_lo < 0:
        raise BracketError("P_abs is negative at T1 = 0; particle cannot be at balance")
    if f_hi == 0:
        return EquilibriumResult(hi, 0.0, expansions, (lo, hi))

    if check_monotonic is None:
        check_monotonic = bool(spec.kinks) or math.isfinite(spec.omega_max)
    if check_monotonic:
        samples = np.linspace(lo, hi, 9)
        vals = np.array([f(t) for t in samples])
        if np.any(np.diff(vals) > 1e-9 * np.max(np.abs(vals))):
            raise MonotonicityError(
                f"sampled P_abs is not decreasing in T1 on [{lo:.6g}, {hi:.6g}] K; "
                "equilibrium may not be unique"
            )

    T_star, info = brentq(f, lo, hi, xtol=1e-300, rtol=T_REL_TOL, maxiter=200, full_output=True)
    if not info.converged:
        raise NumericalError(f"equilibrium solve did not converge: {info.flag}")
    return EquilibriumResult(float(T_star), f(T_star), info.iterations + expansions, (lo, hi))


@dataclass(frozen=True)
class EquilibriumPoint:
    omega_over_theta0: float
    T1_over_T0: float
    valid: bool
    message: str = ""


def equilibrium_curve(material, geometry: ParticleGeometry, T0: float, omega_grid, config=DEFAULT_CONFIG):
    """Normalized equilibrium temperature T1*/T0 versus Omega/theta0.

    A failing point is kept and marked invalid instead of aborting the sweep.
    """
    if not T0 > 0:
        raise DomainError("equilibrium curve needs T0 > 0")
    spec = as_spec(material, geometry)
    theta0 = float(thermal_angular_frequency(T0))
    points = []
    for Om in np.asarray(omega_grid, dtype=float):
        try:
            res = equilibrium_temperature(spec, geometry, T0, float(Om), config)
            points.append(EquilibriumPoint(Om / theta0, res.T1_star / T0, True))
        except NumericalError as exc:
            points.append(EquilibriumPoint(Om / theta0, math.nan, False, str(exc)))
    return points


def drude_equilibrium_closed(T0: float, Omega: float) -> float:
    """T1* from the closed-form Drude P_abs (independent of a and sigma0)."""
    t0 = float(thermal_angular_frequency(T0))

    def p(t1):
        return 2 * Omega**6 + Omega**2 * (t0**4 - 3 * t1**4) + 5 / 7 * (t0**6 - t1**6)

    if Omega == 0:
        return float(T0)
    hi = 2.0 * max(t0, Omega)
    while p(hi) > 0:
        hi *= 2
    t1 = brentq(p, 0.0, hi, xtol=1e-300, rtol=T_REL_TOL)
    return float(temperature_from_thermal_frequency(t1))

