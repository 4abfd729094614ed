"""Rotational spin-down: inertia, linear friction coefficient, stopping time
and integrated trajectories Omega(t)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .constants import C_LIGHT, HBAR, K_B, thermal_angular_frequency
from .equilibrium import as_spec, equilibrium_temperature
from .errors import DomainError, IntegrationError, NumericalError, RegimeError
from .observables import DEFAULT_CONFIG, QuadratureConfig, compute_observables, integrate_torque
from .polarizability import ParticleGeometry
from .spectra import SpinSystem

PROBE_FACTOR = 1e-3
PROBE_WARN = 0.005
PROBE_FAIL = 0.02


def moment_of_inertia(geometry: ParticleGeometry) -> float:
    """(8/15) pi rho a^5 eta: a uniform oblate spheroid about its symmetry axis."""
    return 8.0 / 15.0 * math.pi * geometry.density * geometry.radius**5 * geometry.eta


def friction_coefficient_beta(a: float, sigma0: float, T0: float) -> float:
    """Linear friction coefficient of a Drude sphere, M = -beta Omega (erg s)."""
    if not sigma0 > 0 or T0 < 0:
        raise DomainError("need sigma0 > 0 and T0 >= 0")
    theta0 = float(thermal_angular_frequency(T0))
    return HBAR * a**3 * theta0**4 / (30.0 * math.pi**2 * C_LIGHT**3 * sigma0)


def stopping_time_drude(geometry: ParticleGeometry, sigma0: float, T0: float) -> float:
    """Analytic Drude stopping time in seconds; ``inf`` at T0 = 0.

    For a spheroid the sphere value is multiplied by 9 L^2: inertia scales
    as eta and the low-frequency absorption as eta / 9 L^2.
    """
    if not sigma0 > 0 or T0 < 0:
        raise DomainError("need sigma0 > 0 and T0 >= 0")
    if T0 == 0:
        return math.inf
    a, rho = geometry.radius, geometry.density
    L = geometry.depolarization_perp
    shape = 9.0 * L * L
    tau = (HBAR * C_LIGHT) ** 3 / math.pi * rho * a**2 * sigma0 / (K_B * T0) ** 4 * shape
    beta = friction_coefficient_beta(a, sigma0, T0) * geometry.eta / shape
    via_beta = moment_of_inertia(geometry) / beta
    if abs(via_beta / tau - 1.0) > 1e-10:
        raise NumericalError(f"stopping time mismatch: formula {tau!r} vs I/beta {via_beta!r}")
    return tau


@dataclass(frozen=True)
class StoppingTimeResult:
    tau: float  # s
    tau_half_probe: float  # s, from Omega_probe / 2
    omega_probe: float  # rad/s
    T1_star: float  # K

    @property
    def omega_dependence(self) -> float:
        return abs(self.tau / self.tau_half_probe - 1.0)

    @property
    def linear(self) -> bool:
        return self.omega_dependence <= PROBE_WARN


def _tau_at(spec, geometry, T0, Omega, config):
    T1 = equilibrium_temperature(spec, geometry, T0, Omega, config).T1_star
    M = integrate_torque(SpinSystem(geometry, spec, T0, T1, Omega), config).value
    if not M < 0:
        raise NumericalError(f"non-stopping torque {M!r} erg at Omega = {Omega:.6g} rad/s")
    return -moment_of_inertia(geometry) * Omega / M, T1


def stopping_time_numeric(
    material,
    geometry: ParticleGeometry,
    T0: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
    radiative_correction: bool = True,
) -> StoppingTimeResult:
    """Stopping time from the integrated torque in the low-Omega regime.

    Probes Omega = 1e-3 kB T0 / hbar with the particle at its equilibrium
    temperature, and again at half that rate to confirm the torque is linear.
    """
    if not T0 > 0:
        raise DomainError("numeric stopping time needs T0 > 0")
    spec = as_spec(material, geometry, radiative_correction)
    probe = PROBE_FACTOR * K_B * T0 / HBAR
    tau, T1 = _tau_at(spec, geometry, T0, probe, config)
    tau_half, _ = _tau_at(spec, geometry, T0, 0.5 * probe, config)
    result = StoppingTimeResult(tau, tau_half, probe, T1)
    if result.omega_dependence > PROBE_FAIL:
        raise RegimeError(
            f"stopping time changes by {100 * result.omega_dependence:.2f}% when the probe rate "
            "is halved; torque is not linear in Omega"
        )
    return result


@dataclass(frozen=True)
class SpinDownTrajectory:
    times: np.ndarray  # s
    omegas: np.ndarray  # rad/s
    T1_path: np.ndarray  # K
    energy_ledger: np.ndarray  # rows: (-M Omega, P_rad, P_abs), erg/s
    torques: np.ndarray  # erg

    def ledger_residuals(self) -> np.ndarray:
        """|-M Omega - P_rad - P_abs| / |M Omega| per output step."""
        stop, rad, ab = self.energy_ledger.T
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.abs(stop - rad - ab) / np.abs(stop)
        return np.where(stop == 0, np.abs(rad + ab), rel)


FIXED_T1 = "fixed_T1"
QUASISTATIC = "quasistatic_equilibrium"


def spin_down_trajectory(
    system: SpinSystem,
    mode: str = FIXED_T1,
    t_span: tuple[float, float] = (0.0, 1.0),
    config: QuadratureConfig = DEFAULT_CONFIG,
    n_points: int = 65,
    rtol: float = 1e-7,
) -> SpinDownTrajectory:
    """Integrate I dOmega/dt = M(Omega, T1) from ``system.Omega``.

    The state is ln(Omega), which decays at a nearly constant rate, with an
    adaptive RK4(5) integrator. ``fixed_T1`` keeps the particle at
    ``system.T1``; ``quasistatic_equilibrium`` re-solves the thermal balance
    at every evaluation, i.e. assumes the particle thermalizes much faster
    than it spins down. Ledger rows are evaluated at the ``n_points`` output
    times.
    """
    if mode not in (FIXED_T1, QUASISTATIC):
        raise DomainError(f"unknown spin-down mode {mode!r}")
    if not system.Omega > 0:
        raise DomainError("spin-down needs Omega(0) > 0")
    geometry, spec = system.geometry, system.spec
    inertia = moment_of_inertia(geometry)

    def T1_of(Om):
        if mode == FIXED_T1:
            return system.T1
        return equilibrium_temperature(spec, geometry, system.T0, Om, config).T1_star

    def rhs(t, y):
        Om = math.exp(y[0])
        M = integrate_torque(system.replace(Omega=Om, T1=T1_of(Om)), config).value
        return [M / (inertia * Om)]

    t_eval = np.linspace(t_span[0], t_span[1], n_points)
    try:
        sol = solve_ivp(
            rhs, t_span, [math.log(system.Omega)], method="RK45",
            t_eval=t_eval, rtol=rtol, atol=1e-12,
        )
    except NumericalError as exc:
        raise IntegrationError(f"torque evaluation failed during spin-down: {exc}") from exc

    def assemble(times, logs):
        omegas = np.exp(logs)
        T1s, ledger, torques = [], [], []
        for Om in omegas:
            T1 = T1_of(Om)
            obs = compute_observables(system.replace(Omega=float(Om), T1=T1), config)
            T1s.append(T1)
            torques.append(obs.torque)
            ledger.append((obs.stopping_power, obs.p_rad, obs.p_abs))
        return SpinDownTrajectory(
            np.asarray(times), omegas, np.array(T1s), np.array(ledger).reshape(-1, 3), np.array(torques)
        )

    if sol.status != 0:
        partial = assemble(sol.t, sol.y[0]) if sol.t.size else None
        raise IntegrationError(f"spin-down integration failed: {sol.message}", partial=partial)
    return assemble(sol.t, sol.y[0])
