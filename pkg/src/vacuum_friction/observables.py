"""Torque, radiated power and absorbed power of a spinning particle.

Quadrature of the emission-rate spectrum is the general route; the Drude
closed forms below are exact for the low-frequency Drude polarizability
without radiative correction and serve as its oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, HBAR, K_B, thermal_angular_frequency
from .errors import DomainError, NumericalError
from .quadrature import EPS, integrate
from .spectra import SpinSystem, emission_spectrum, gamma_spectral, gamma_spectral_scale

# absolute error floor, relative to the integral of the cancelling terms
CANCELLATION_FLOOR = 1e3 * EPS


class TruncationWarning(UserWarning):
    """Tabulated data ends before the Bose tails have decayed."""


class UndefinedPeakError(NumericalError):
    """The emission spectrum vanishes identically."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_floor: float = 0.0
    cutoff_factor: float = 40.0
    max_subdivisions: int = 20000

    def __post_init__(self):
        if not 1e-14 < self.rel_tol < 1e-2:
            raise DomainError(f"rel_tol must lie in (1e-14, 1e-2), got {self.rel_tol!r}")
        if not self.cutoff_factor >= 10:
            raise DomainError(f"cutoff_factor must be >= 10, got {self.cutoff_factor!r}")
        if self.abs_floor < 0:
            raise DomainError("abs_floor must be non-negative")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    error: float
    evaluations: int


@dataclass(frozen=True)
class ObservableSet:
    """Torque (erg, z component), radiated and absorbed power (erg/s).

    ``p_abs`` is integrated directly rather than taken from the energy
    balance, so ``-torque*Omega - p_rad - p_abs`` is a genuine check.
    """

    Omega: float
    T0: float
    T1: float
    torque: float
    p_rad: float
    p_abs: float
    quad_error: float
    evaluations: int
    errors: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0), repr=False)

    @property
    def stopping_power(self) -> float:
        return -self.torque * self.Omega

    @property
    def balance_residual(self) -> float:
        return self.stopping_power - self.p_rad - self.p_abs


def cutoff_frequency(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    C = config.cutoff_factor
    return system.Omega + C * max(system.theta0, system.theta1, system.Omega / C)


def integration_window(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG):
    """Breakpoints for integrating Gamma over lab frequency.

    Spans [-w_cut, w_cut], shrunk to where the polarizability is defined,
    with interior breakpoints at 0, +-Omega and at every tabulated node
    (shifted by Omega for the perpendicular channel).
    """
    Om = system.Omega
    w_cut = cutoff_frequency(system, config)
    hi, lo = w_cut, -w_cut
    w_max = system.spec.omega_max
    if math.isfinite(w_max):
        hi = min(hi, w_max)
        lo = max(lo, Om - w_max)
        margin = 30.0 * K_B * max(system.T0, system.T1) / HBAR
        if hi < w_cut and hi - Om < margin:
            warnings.warn(
                f"material data ends at {w_max:.4g} rad/s, before the thermal tails have "
                f"decayed (need ~{Om + margin:.4g} rad/s); results are truncated",
                TruncationWarning,
                stacklevel=3,
            )
    if hi <= 0 or lo >= hi:
        return np.array([0.0])
    pts = [lo, hi, 0.0, Om, -Om]
    if system.spec.kinks:
        k = np.asarray(system.spec.kinks)
        pts.extend(np.concatenate([k, -k, Om + k, Om - k]).tolist())
    pts = np.unique(np.asarray(pts))
    return pts[(pts >= lo) & (pts <= hi)]


def _integrate_gamma(system: SpinSystem, config: QuadratureConfig, weights):
    Om = system.Omega
    window = integration_window(system, config)

    def magnitude(w):
        scale = gamma_spectral_scale(system, w)
        return np.vstack([np.abs(wfun(w, Om)) * scale for wfun in weights])

    # a coarse pass sizes the terms that may cancel; Gamma itself can vanish
    size = integrate(magnitude, window, rel_tol=1e-3, n_components=len(weights)).value
    abs_tol = np.maximum(config.abs_floor, CANCELLATION_FLOOR * size)

    def integrand(w):
        gam = gamma_spectral(system, w)
        return np.vstack([wfun(w, Om) * gam for wfun in weights])

    res = integrate(
        integrand,
        window,
        rel_tol=config.rel_tol,
        abs_tol=abs_tol,
        max_panels=config.max_subdivisions,
        n_components=len(weights),
    )
    if Om == 0:
        # Gamma is odd in w without rotation, so the torque vanishes by parity
        for i, wfun in enumerate(weights):
            if wfun is _w_torque:
                res.value[i] = 0.0
                res.error[i] = 0.0
    return res


def _w_torque(w, Om):
    return -HBAR * np.ones_like(w)


def _w_rad(w, Om):
    return HBAR * w


def _w_abs(w, Om):
    return HBAR * (Om - w)


def integrate_radiated_power(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG):
    """P_rad = int hbar w Gamma(w) dw."""
    res = _integrate_gamma(system, config, [_w_rad])
    return QuadratureEstimate(float(res.value[0]), float(res.error[0]), res.evaluations)


def integrate_torque(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG):
    """M = -int hbar Gamma(w) dw."""
    res = _integrate_gamma(system, config, [_w_torque])
    return QuadratureEstimate(float(res.value[0]), float(res.error[0]), res.evaluations)


def integrate_absorbed_power(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG):
    """P_abs = int hbar (Omega - w) Gamma(w) dw, i.e. -M Omega - P_rad in one integral."""
    res = _integrate_gamma(system, config, [_w_abs])
    return QuadratureEstimate(float(res.value[0]), float(res.error[0]), res.evaluations)


def compute_observables(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG) -> ObservableSet:
    res = _integrate_gamma(system, config, [_w_torque, _w_rad, _w_abs])
    M, P_rad, P_abs = (float(v) for v in res.value)
    eM, eR, eA = (float(e) for e in res.error)
    Om = system.Omega
    scale = max(abs(M * Om), abs(P_rad), abs(P_abs))
    quad_error = max(eM * Om, eR, eA) / scale if scale > 0 else 0.0
    return ObservableSet(
        Om, system.T0, system.T1, M, P_rad, P_abs, quad_error, res.evaluations, (eM, eR, eA)
    )


def absorbed_power(observables: ObservableSet) -> float:
    """Energy balance: P_abs = -M Omega - P_rad."""
    return -observables.torque * observables.Omega - observables.p_rad


def drude_prefactor(a, sigma0) -> float:
    """hbar a^3 / (pi^2 c^3 sigma0), the common scale of the Drude forms."""
    if not sigma0 > 0:
        raise DomainError(f"sigma0 must be positive, got {sigma0!r}")
    return HBAR * a**3 / (math.pi**2 * C_LIGHT**3 * sigma0)


def _thetas(T0, T1):
    return float(thermal_angular_frequency(T0)), float(thermal_angular_frequency(T1))


def drude_radiated_power_closed(a, sigma0, Omega, T0, T1) -> float:
    t0, t1 = _thetas(T0, T1)
    W = Omega
    bracket = 2 * W**6 + 5 * W**4 * t1**2 + 3 * W**2 * t1**4 + 5.0 / 14.0 * (t1**6 - t0**6)
    return drude_prefactor(a, sigma0) / 60.0 * bracket


def drude_torque_closed(a, sigma0, Omega, T0, T1) -> float:
    t0, t1 = _thetas(T0, T1)
    W = Omega
    bracket = 6 * W**4 + 10 * W**2 * t1**2 + t0**4 + 3 * t1**4
    return -drude_prefactor(a, sigma0) * W / 120.0 * bracket


def drude_absorbed_closed(a, sigma0, Omega, T0, T1) -> float:
    t0, t1 = _thetas(T0, T1)
    W = Omega
    bracket = 2 * W**6 + W**2 * (t0**4 - 3 * t1**4) + 5.0 / 7.0 * (t0**6 - t1**6)
    return drude_prefactor(a, sigma0) / 120.0 * bracket


def _golden_max(f, lo, hi, rel_tol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > rel_tol * 0.5 * (hi + lo):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def peak_emission_frequency(system: SpinSystem, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Frequency (rad/s) maximizing the radiated power spectrum."""
    w_cut = cutoff_frequency(system, config)
    if math.isfinite(system.spec.omega_max):
        w_cut = min(w_cut, system.spec.omega_max - system.Omega)
    if w_cut <= 0:
        raise UndefinedPeakError("no frequency range to search for an emission peak")
    grid = np.geomspace(1e-3 * w_cut, w_cut, 256)
    vals = emission_spectrum(system, grid)
    if not np.any(vals > 0):
        raise UndefinedPeakError("emission spectrum has no positive values; peak is undefined")
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    return _golden_max(lambda w: float(emission_spectrum(system, w)), lo, hi, 1e-6)
