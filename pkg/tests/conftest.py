import numpy as np
import pytest

from vacuum_friction.constants import conductivity_si_to_gaussian, photon_energy_to_angular_frequency
from vacuum_friction.material import (
    DrudeModel,
    Orientation,
    TabulatedMaterial,
    drude_permittivity,
    table_from_function,
)
from vacuum_friction.polarizability import ParticleGeometry, drude_linear_spec

SIGMA_10NM = conductivity_si_to_gaussian(2.3e4)  # s^-1
SIGMA_100NM = conductivity_si_to_gaussian(2.0e5)

# interband threshold of the graphite-style fixture
IB_THRESHOLD_EV = 0.01
IB_STRENGTH = 0.004


def drude_table(sigma0, e_lo=1e-5, e_hi=10.0, n=61, orientation=Orientation.ISOTROPIC, label="drude"):
    omegas = photon_energy_to_angular_frequency(np.geomspace(e_lo, e_hi, n))
    model = DrudeModel(sigma0)
    return table_from_function(lambda w: drude_permittivity(w, model), omegas, label, orientation)


def interband_eps(omega):
    """Non-conducting background with absorption rising above 0.01 eV."""
    x = np.maximum(omega / photon_energy_to_angular_frequency(IB_THRESHOLD_EV) - 1.0, 0.0)
    return 5.0 + 1j * IB_STRENGTH * x**2 / (1.0 + x / 100.0)


def graphite_like(sigma_perp):
    """E perp c: Drude metal; E par c: dielectric with an interband rise.

    With the (2/3, 1/3) polarizability average, the low-frequency response
    is that of a Drude sphere with conductivity 1.5 * sigma_perp.
    """
    omegas = photon_energy_to_angular_frequency(np.geomspace(1e-5, 5.0, 61))
    perp = drude_table(sigma_perp, 1e-5, 5.0, 61, Orientation.E_PERP_C, "graphite-like Eperp")
    par = table_from_function(interband_eps, omegas, "graphite-like Epar", Orientation.E_PAR_C)
    return TabulatedMaterial.graphite(perp, par)


@pytest.fixture
def sphere_10nm():
    return ParticleGeometry(1e-6)


@pytest.fixture
def sphere_100nm():
    return ParticleGeometry(1e-5)


@pytest.fixture
def drude_spec_10nm(sphere_10nm):
    return drude_linear_spec(sphere_10nm, SIGMA_10NM)


@pytest.fixture
def graphite_material():
    return graphite_like(SIGMA_100NM)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
