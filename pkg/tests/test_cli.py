import csv
import io
import json
import numpy as np
import pytest

from vacuum_friction.cli import main, parse_grid, parse_material, parse_omega, run
from vacuum_friction.constants import (
    conductivity_si_to_gaussian,
    photon_energy_to_angular_frequency,
    thermal_angular_frequency,
)
from vacuum_friction.errors import ConfigError
from vacuum_friction.material import table_from_function, write_permittivity_table
from vacuum_friction.observables import drude_radiated_power_closed

from conftest import SIGMA_100NM, drude_table


def save(table, path):
    with open(path, "w") as fh:
        write_permittivity_table(table, fh)
    return path


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def ok(argv):
    code, text, _ = run(argv)
    assert code == 0
    return text


def test_parse_helpers():
    assert parse_omega("x2theta0", 3.0) == 6.0
    assert parse_omega("1e12", 3.0) == 1e12
    assert np.allclose(parse_grid("1:100:3,log"), [1, 10, 100])
    assert parse_material("drude:2e5").sigma_si == 2e5
    for bad in ("x-1theta0", "fast"):
        with pytest.raises(ConfigError):
            parse_omega(bad, 1.0)
    with pytest.raises(ConfigError):
        parse_grid("1:2")
    with pytest.raises(ConfigError):
        parse_material("copper")


def test_unknown_flag_writes_nothing(tmp_path, capsys):
    out = tmp_path / "o.csv"
    assert main(["observables", "--bogus", "--out", str(out)]) == 2
    assert not out.exists()
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["exit_code"] == 2


def test_bad_value_exit_code(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["observables", "--t0", "-1", "--out", str(out)]) == 2
    assert main(["observables", "--material", "table:/nonexistent.csv", "--out", str(out)]) == 2
    assert not out.exists()


def test_numerical_failure_exit_code(tmp_path, capsys):
    # a lossless table has no thermal balance
    omegas = photon_energy_to_angular_frequency(np.geomspace(1e-5, 10, 20))
    path = save(table_from_function(lambda w: np.full(np.shape(w), 4.0 + 0j), omegas, "lossless"), tmp_path / "l.csv")
    out = tmp_path / "o.csv"
    assert main(["observables", "--material", f"table:{path}", "--out", str(out)]) == 3
    assert not out.exists()
    assert json.loads(capsys.readouterr().err.strip())["exit_code"] == 3


def test_byte_determinism(tmp_path):
    args = ["observables", "--t0", "3", "--omega", "x2theta0", "--out", str(tmp_path / "a.csv")]
    assert main(args) == 0
    first = (tmp_path / "a.csv").read_bytes()
    assert main(args) == 0
    assert (tmp_path / "a.csv").read_bytes() == first
    assert b"# t0 = 3" in first
    assert run(["spectrum", "--peak"])[1] == run(["spectrum", "--peak"])[1]


def test_static_row():
    (row,) = rows(ok(["observables", "--omega", "0", "--t0", "2.7", "--t1", "5"]))
    assert float(row["M"]) == 0
    sigma = conductivity_si_to_gaussian(2e5)
    expected = drude_radiated_power_closed(1e-6, sigma, 0.0, 2.7, 5.0)
    assert float(row["P_rad"]) == pytest.approx(expected, rel=1e-7)
    assert row["Omega"] == "0.00000000e+00"


def test_stopping_power_curves():
    out = rows(ok(["observables", "--omega-grid", "0.5:8:5,log"]))
    x = np.array([float(r["Omega_over_theta0"]) for r in out])
    eq = np.array([float(r["stop_equilibrium_T"]) for r in out])
    same = np.array([float(r["stop_equal_T"]) for r in out])
    i = int(np.argmin(np.abs(x - 1)))
    assert x[i] == pytest.approx(1.0)
    assert eq[i] == pytest.approx(same[i], rel=1e-7)
    assert abs(eq[-1] / same[-1] - 1) > 0.1
    # at Omega << theta0 the normalized stopping power tends to 2 (Omega/theta0)^2
    low = rows(ok(["observables", "--omega-grid", "0.001:0.001:1"]))[0]
    assert float(low["stop_equal_T"]) == pytest.approx(2e-6, rel=1e-3)


def test_spectrum_zero_at_balance():
    out = rows(ok(["spectrum", "--omega", "0", "--t1", "2.7"]))
    assert len(out) == 512
    assert all(float(r["dP_domega"]) == 0 for r in out)


def test_spectrum_peak_row():
    text = ok(["spectrum", "--omega", "x5theta0", "--peak"])
    last = text.strip().splitlines()[-1].split(",")
    assert last[0] == "peak"
    assert float(last[1]) > thermal_angular_frequency(2.7)
    w = [float(r["omega"]) for r in rows(text) if r["omega"] != "peak"]
    assert len(w) == 512 and np.all(np.diff(w) > 0)


def test_equilibrium_command():
    out = rows(ok(["equilibrium", "--omega-grid", "0:2:5"]))
    x = [float(r["Omega_over_theta0"]) for r in out]
    t = [float(r["T1_over_T0"]) for r in out]
    assert t[0] == 1.0
    assert t[x.index(1.0)] == pytest.approx(1.0, rel=1e-8)
    assert t[1] < 1 < t[-1]


def test_stopping_time_command():
    out = rows(ok(["stopping-time", "--radius-nm", "100", "--t0-grid", "1:300:5,log"]))
    T = np.array([float(r["T0"]) for r in out])
    tau = np.array([float(r["tau_seconds"]) for r in out])
    assert all(r["method"] == "drude" for r in out)
    assert np.polyfit(np.log(T), np.log(tau), 1)[0] == pytest.approx(-4.0, abs=1e-9)
    (single,) = rows(ok(["stopping-time", "--radius-nm", "100"]))
    assert float(single["tau_seconds"]) == pytest.approx(2.12e17, rel=5e-3)


def test_stopping_time_spheroid():
    sphere = float(rows(ok(["stopping-time"]))[0]["tau_seconds"])
    disk = float(rows(ok(["stopping-time", "--eta", "0.2"]))[0]["tau_seconds"])
    assert disk / sphere == pytest.approx(0.1401, abs=1e-3)


def test_stopping_time_numeric_rows(tmp_path):
    path = save(drude_table(SIGMA_100NM), tmp_path / "drude.csv")
    out = rows(ok(["stopping-time", "--radius-nm", "100", "--material", f"table:{path}", "--t0", "3"]))
    methods = {r["method"]: float(r["tau_seconds"]) for r in out}
    assert set(methods) == {"drude", "numeric"}
    assert methods["numeric"] == pytest.approx(methods["drude"], rel=1e-2)


def test_spindown_command():
    out = rows(ok(["spindown", "--radius-nm", "100", "--t1", "2.7", "--omega", "x1e-4theta0", "--n-points", "9"]))
    t = np.array([float(r["t"]) for r in out])
    om = np.array([float(r["Omega"]) for r in out])
    assert np.all(np.diff(om) < 0)
    fit = np.polyfit(t, np.log(om), 1, full=True)
    resid = fit[1][0]
    r2 = 1 - resid / np.sum((np.log(om) - np.log(om).mean()) ** 2)
    assert r2 > 0.9999


def test_fit_drude(tmp_path):
    path = save(drude_table(SIGMA_100NM), tmp_path / "drude.csv")
    out = rows(ok(["material", "fit-drude", "--table", str(path), "--window", "1e-5:1e-3"]))
    assert float(out[0]["sigma0_S_per_m"]) == pytest.approx(2e5, rel=1e-3)
