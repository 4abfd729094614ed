"""Particle polarizabilities, absorption functions and rotating-frame response.

Polarizability evaluators are plain callables ``alpha(omega) -> complex``
that accept numpy arrays, including negative and zero frequencies, and
satisfy alpha(-w) = conj(alpha(w)). Units: cm^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import C_LIGHT
from .errors import DomainError, SingularityError, ValidationError
from .material import DrudeModel, TabulatedMaterial

PERP = "perp"
PAR = "par"

AlphaFunc = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ParticleGeometry:
    """Sphere (``eta == 1``) or oblate spheroid rotating about its short axis.

    ``radius`` is the equatorial radius in cm, ``density`` in g/cm^3.
    """

    radius: float
    eta: float = 1.0
    density: float = 2.26

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        if not 0 < self.eta <= 1:
            raise DomainError(f"aspect ratio must lie in (0, 1], got {self.eta!r}")
        if not self.density > 0:
            raise DomainError(f"density must be positive, got {self.density!r}")

    @classmethod
    def sphere(cls, radius, density=2.26):
        return cls(radius, 1.0, density)

    @classmethod
    def oblate(cls, radius, eta, density=2.26):
        return cls(radius, eta, density)

    @property
    def is_sphere(self) -> bool:
        return self.eta == 1.0

    @property
    def volume(self) -> float:
        return 4.0 / 3.0 * math.pi * self.radius**3 * self.eta

    @property
    def depolarization_perp(self) -> float:
        return oblate_depolarization_equatorial(self.eta)

    @property
    def depolarization_par(self) -> float:
        return 1.0 - 2.0 * self.depolarization_perp


def oblate_depolarization_equatorial(eta: float) -> float:
    """Depolarization factor along an equatorial axis of an oblate spheroid.

    ``eta`` is the ratio of the symmetry semi-axis to the equatorial one.
    Near the sphere the closed form cancels badly, so a series in
    ``1 - eta`` takes over there.
    """
    if not 0 < eta <= 1:
        raise DomainError(f"aspect ratio must lie in (0, 1], got {eta!r}")
    if eta == 1.0:
        return 1.0 / 3.0
    d = 1.0 - eta
    if d < 2e-3:
        return 1 / 3 - 2 * d / 15 - 3 * d**2 / 35 - 16 * d**3 / 315 - 20 * d**4 / 693
    e2 = 1.0 - eta * eta
    g = eta / math.sqrt(e2)
    return g / (2.0 * e2) * (0.5 * math.pi - math.atan(g)) - 0.5 * g * g


def quasistatic_sphere_alpha(eps, a):
    """Clausius-Mossotti polarizability ``a^3 (eps-1)/(eps+2)``."""
    eps = np.asarray(eps, dtype=complex)
    if np.any(eps == -2):
        raise SingularityError("eps = -2: lossless dipolar plasmon pole")
    return (a**3 * (eps - 1.0) / (eps + 2.0))[()]


def quasistatic_spheroid_alpha(eps, a, eta, depolarization=None):
    """Polarizability of a spheroid of volume (4pi/3) a^3 eta along an axis
    with the given depolarization factor (equatorial by default)."""
    L = oblate_depolarization_equatorial(eta) if depolarization is None else depolarization
    eps = np.asarray(eps, dtype=complex)
    den = 1.0 + L * (eps - 1.0)
    if np.any(den == 0):
        raise SingularityError("1 + L(eps-1) = 0: lossless shape resonance")
    return (a**3 * eta / 3.0 * (eps - 1.0) / den)[()]


def quasistatic_spheroid_alpha_equatorial(eps, a, eta):
    return quasistatic_spheroid_alpha(eps, a, eta)


def radiative_coefficient(omega):
    """2 omega^3 / 3 c^3 in cm^-3."""
    w = np.asarray(omega, dtype=float)
    return 2.0 * w**3 / (3.0 * C_LIGHT**3)


def radiation_reaction_correct(alpha_qs, omega):
    """Dress a quasistatic polarizability with radiation reaction.

    The denominator form makes ``Im(alpha) - (2w^3/3c^3)|alpha|^2`` equal to
    ``Im(alpha_qs) |alpha/alpha_qs|^2``: zero for real ``alpha_qs`` and never
    negative for passive ones.
    """
    alpha_qs = np.asarray(alpha_qs, dtype=complex)
    return (alpha_qs / (1.0 - 1j * radiative_coefficient(omega) * alpha_qs))[()]


def _static_limited(func: Callable, static_value: complex) -> AlphaFunc:
    """Wrap an eps-based evaluator so omega == 0 returns its static limit."""

    def alpha(omega):
        w = np.asarray(omega, dtype=float)
        scalar = w.ndim == 0
        w = np.atleast_1d(w)
        out = np.empty(w.shape, dtype=complex)
        zero = w == 0
        out[zero] = static_value
        if np.any(~zero):
            out[~zero] = func(w[~zero])
        return out[0] if scalar else out

    return alpha


def orientation_average(components: Sequence[tuple[float, AlphaFunc]]) -> AlphaFunc:
    """Weighted sum of polarizability evaluators; weights must sum to 1."""
    if not components:
        raise ValidationError("orientation average needs at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValidationError(f"orientation weights must be >= 0 and sum to 1, got {weights.tolist()}")
    funcs = [f for _, f in components]
    if len(funcs) == 1:
        return funcs[0]

    def alpha(omega):
        total = 0.0
        for w, f in zip(weights, funcs):
            total = total + w * f(omega)
        return total

    return alpha


ROTATION_PLANE_WEIGHTS = (0.5, 0.5)


@dataclass(frozen=True)
class PolarizabilitySpec:
    """Quasistatic polarizabilities perpendicular and parallel to the spin
    axis, plus the switch for the radiation-reaction dressing.

    ``omega_max`` bounds the frequencies at which the evaluators are defined
    (tabulated data); ``kinks`` lists frequencies where they are not smooth.
    """

    alpha_perp_qs: AlphaFunc
    alpha_par_qs: AlphaFunc
    radiative_correction: bool = True
    omega_max: float = math.inf
    kinks: tuple[float, ...] = field(default=(), repr=False)
    label: str = ""

    def alpha(self, l: str, omega):
        qs = self.alpha_perp_qs if l == PERP else self.alpha_par_qs
        value = qs(omega)
        if self.radiative_correction:
            value = radiation_reaction_correct(value, omega)
        return value

    def alpha_perp(self, omega):
        return self.alpha(PERP, omega)

    def alpha_par(self, omega):
        return self.alpha(PAR, omega)

    def g(self, l: str, omega):
        return absorption_function_g(self, l, omega)

    def g_over_omega(self, l: str, omega, omega_floor: float = 1e-3):
        """g_l(w)/w, extended to w = 0 by its limit (g is odd)."""
        w = np.asarray(omega, dtype=float)
        w_safe = np.where(w == 0, omega_floor, w)
        return (self.g(l, w_safe) / w_safe)[()]

    def with_radiative_correction(self, on: bool) -> "PolarizabilitySpec":
        return PolarizabilitySpec(
            self.alpha_perp_qs, self.alpha_par_qs, on, self.omega_max, self.kinks, self.label
        )


def absorption_function_g(spec: PolarizabilitySpec, l: str, omega):
    """g_l = Im(alpha_l) - (2w^3/3c^3)|alpha_l|^2, or Im(alpha_l) when the
    radiative correction is off.

    With the correction on, the equivalent form Im(alpha_qs)/|1 - i k alpha_qs|^2
    is evaluated, which avoids the cancellation and is exactly zero for a
    lossless particle.
    """
    qs = spec.alpha_perp_qs if l == PERP else spec.alpha_par_qs
    alpha_qs = np.asarray(qs(omega), dtype=complex)
    if not spec.radiative_correction:
        return alpha_qs.imag[()]
    dressing = np.abs(1.0 - 1j * radiative_coefficient(omega) * alpha_qs) ** 2
    return (alpha_qs.imag / dressing)[()]


@dataclass(frozen=True)
class EffectivePolarizability:
    """Lab-frame polarizability of a particle spinning about z."""

    axx: complex
    axy: complex
    azz: complex

    @property
    def ayy(self):
        return self.axx

    @property
    def ayx(self):
        return -self.axy

    def tensor(self) -> np.ndarray:
        return np.array(
            [[self.axx, self.axy, 0], [self.ayx, self.ayy, 0], [0, 0, self.azz]], dtype=complex
        )


def effective_polarizability(spec: PolarizabilitySpec, omega, Omega) -> EffectivePolarizability:
    ap = spec.alpha_perp(np.asarray(omega) + Omega)
    am = spec.alpha_perp(np.asarray(omega) - Omega)
    return EffectivePolarizability(
        axx=0.5 * (ap + am),
        axy=0.5j * (ap - am),
        azz=spec.alpha_par(omega),
    )


def drude_linear_spec(geometry: ParticleGeometry, sigma0: float, radiative_correction=False):
    """Low-frequency Drude polarizability, exactly linear in Im part.

    For a spheroid axis with depolarization L this is
    ``(a^3 eta / 3L) (1 + i w / (4 pi sigma0 L))``; for a sphere
    Im(alpha) = 3 w a^3 / (4 pi sigma0). This is the response behind the
    closed-form Drude observables.
    """
    DrudeModel(sigma0)
    a, eta = geometry.radius, geometry.eta

    def make(L):
        static = a**3 * eta / (3.0 * L)
        slope = 1.0 / (4.0 * math.pi * sigma0 * L)

        def alpha(omega):
            w = np.asarray(omega, dtype=float)
            return (static * (1.0 + 1j * slope * w))[()]

        return alpha

    return PolarizabilitySpec(
        make(geometry.depolarization_perp),
        make(geometry.depolarization_par),
        radiative_correction,
        label=f"drude-linear(sigma0={sigma0:.6g} s^-1)",
    )


def _eps_alpha(eps_func, geometry: ParticleGeometry, L: float, static_limit: complex) -> AlphaFunc:
    a, eta = geometry.radius, geometry.eta
    return _static_limited(
        lambda w: quasistatic_spheroid_alpha(eps_func(w), a, eta, depolarization=L), static_limit
    )


def material_spec(material, geometry: ParticleGeometry, radiative_correction=True):
    """Polarizability spec from a permittivity model via the quasistatic
    spheroid formula, orientation-averaged at the polarizability level."""
    a, eta = geometry.radius, geometry.eta
    Lp, Lz = geometry.depolarization_perp, geometry.depolarization_par

    def conductor(L):
        return a**3 * eta / (3.0 * L)

    if isinstance(material, DrudeModel):
        perp = _eps_alpha(material.permittivity, geometry, Lp, conductor(Lp))
        par = _eps_alpha(material.permittivity, geometry, Lz, conductor(Lz))
        return PolarizabilitySpec(
            perp, par, radiative_correction,
            label=f"drude(sigma0={material.sigma0:.6g} s^-1)",
        )
    if isinstance(material, TabulatedMaterial):
        perps, pars = [], []
        for w, table in zip(material.weights, material.tables):
            if table.eps_im[0] > 0:
                sp, sz = conductor(Lp), conductor(Lz)
            else:
                e0 = complex(table.eps_re[0])
                sp = quasistatic_spheroid_alpha(e0, a, eta, Lp)
                sz = quasistatic_spheroid_alpha(e0, a, eta, Lz)
            perps.append((w, _eps_alpha(table.permittivity, geometry, Lp, sp)))
            pars.append((w, _eps_alpha(table.permittivity, geometry, Lz, sz)))
        return PolarizabilitySpec(
            orientation_average(perps),
            orientation_average(pars),
            radiative_correction,
            omega_max=material.omega_max,
            kinks=tuple(material.nodes.tolist()),
            label="+".join(t.label for t in material.tables),
        )
    raise TypeError(f"unsupported material model {type(material).__name__}")
