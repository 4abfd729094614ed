"""Command-line front end. All output is CSV with a '#' provenance header.

Units at this boundary: conductivity in S/m, radius in nm, density in
g/cm^3, temperature in K, frequency in rad/s (or a multiple of theta0,
written ``x<factor>theta0``), photon energy in eV.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .constants import (
    C_LIGHT,
    HBAR,
    NM_TO_CM,
    YEAR_TO_S,
    conductivity_gaussian_to_si,
    conductivity_si_to_gaussian,
    photon_energy_to_angular_frequency,
    thermal_angular_frequency,
)
from .dynamics import (
    FIXED_T1,
    QUASISTATIC,
    spin_down_trajectory,
    stopping_time_drude,
    stopping_time_numeric,
)
from .equilibrium import equilibrium_curve, equilibrium_temperature
from .errors import ConfigError, VacuumFrictionError
from .material import DrudeModel, TabulatedMaterial, fit_drude_sigma, read_permittivity_table
from .observables import (
    QuadratureConfig,
    compute_observables,
    peak_emission_frequency,
)
from .polarizability import ParticleGeometry, drude_linear_spec, material_spec
from .spectra import SpinSystem, emission_spectrum

FLOAT_FMT = "%.8e"
SPECTRUM_POINTS = 512
FIT_NODES = 5


class CliError(ConfigError):
    """Bad command-line value."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return FLOAT_FMT % x


@dataclass
class MaterialSource:
    kind: str  # "drude" or "table"
    sigma_si: float | None = None
    paths: tuple[str, ...] = ()


def parse_material(text: str) -> MaterialSource:
    kind, _, rest = text.partition(":")
    if kind == "drude":
        try:
            sigma = float(rest)
        except ValueError:
            raise CliError(f"--material drude:<S/m> needs a number, got {rest!r}") from None
        if not sigma > 0:
            raise CliError(f"--material: conductivity must be positive, got {sigma!r}")
        return MaterialSource("drude", sigma_si=sigma)
    if kind == "table":
        paths = tuple(p for p in rest.split(",") if p)
        if len(paths) not in (1, 2):
            raise CliError("--material table:<path>[,<path>] takes one or two files")
        return MaterialSource("table", paths=paths)
    raise CliError(f"--material must be drude:<S/m> or table:<path>[,<path>], got {text!r}")


def parse_omega(text: str, theta0: float) -> float:
    """Rotation rate in rad/s, or ``x<f>theta0`` for a multiple of theta0."""
    if text.startswith("x") and text.endswith("theta0"):
        try:
            factor = float(text[1:-6])
        except ValueError:
            raise CliError(f"--omega: cannot parse multiplier in {text!r}") from None
        value = factor * theta0
    else:
        try:
            value = float(text)
        except ValueError:
            raise CliError(f"--omega must be rad/s or x<f>theta0, got {text!r}") from None
    if not value >= 0 or not math.isfinite(value):
        raise CliError(f"--omega must be finite and non-negative, got {text!r}")
    return value


def parse_grid(text: str, flag: str = "--omega-grid") -> np.ndarray:
    """``lo:hi:n`` (linear) or ``lo:hi:n,log``."""
    body, _, scale = text.partition(",")
    parts = body.split(":")
    if len(parts) != 3 or scale not in ("", "log", "lin"):
        raise CliError(f"{flag} must be lo:hi:n[,log], got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError(f"{flag}: cannot parse {text!r}") from None
    if n < 1 or hi < lo or lo < 0:
        raise CliError(f"{flag}: need 0 <= lo <= hi and n >= 1, got {text!r}")
    if scale == "log":
        if lo <= 0:
            raise CliError(f"{flag}: log grid needs lo > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def parse_t1(text: str) -> float | str:
    if text == "equilibrium":
        return text
    try:
        value = float(text)
    except ValueError:
        raise CliError(f"--t1 must be kelvin or 'equilibrium', got {text!r}") from None
    if not value >= 0:
        raise CliError(f"--t1 must be non-negative, got {text!r}")
    return value


def _positive(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not value > 0 or not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text!r}")
        return value

    return conv


def _nonnegative(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not value >= 0 or not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"{name} must be non-negative, got {text!r}")
        return value

    return conv


class Context:
    """Resolved run configuration shared by the physics commands."""

    def __init__(self, args):
        self.args = args
        self.source = parse_material(args.material)
        self.geometry = ParticleGeometry(args.radius_nm * NM_TO_CM, args.eta, args.density)
        self.config = QuadratureConfig(rel_tol=args.rel_tol)
        self.T0 = args.t0
        self.theta0 = float(thermal_angular_frequency(self.T0))
        self.t1 = parse_t1(args.t1)
        if self.source.kind == "drude":
            self.material = DrudeModel(conductivity_si_to_gaussian(self.source.sigma_si))
            if args.full_drude:
                self.spec = material_spec(self.material, self.geometry, radiative_correction=True)
            else:
                self.spec = drude_linear_spec(self.geometry, self.material.sigma0)
        else:
            tables = [read_permittivity_table(p) for p in self.source.paths]
            if len(tables) == 1:
                self.material = TabulatedMaterial.single(tables[0])
            else:
                self.material = TabulatedMaterial.graphite(*tables)
            self.spec = material_spec(
                self.material, self.geometry, radiative_correction=not args.no_radiative_correction
            )

    @property
    def sigma0(self) -> float | None:
        """Drude conductivity (s^-1) of a drude: source, else None."""
        return self.material.sigma0 if isinstance(self.material, DrudeModel) else None

    def omega(self) -> float:
        return parse_omega(self.args.omega, self.theta0)

    def T1_at(self, Omega: float) -> float:
        if self.t1 == "equilibrium":
            return equilibrium_temperature(self.spec, self.geometry, self.T0, Omega, self.config).T1_star
        return float(self.t1)

    def system(self, Omega: float, T1: float | None = None) -> SpinSystem:
        T1 = self.T1_at(Omega) if T1 is None else T1
        return SpinSystem(self.geometry, self.spec, self.T0, T1, Omega)

    def header(self, command: str, extra: dict | None = None) -> list[str]:
        items = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("handler", "seedless")}
        lines = [f"# vacuum_friction {__version__} {command}"]
        lines += [f"# {k} = {v}" for k, v in items.items()]
        lines.append(f"# polarizability = {self.spec.label}")
        for k, v in (extra or {}).items():
            lines.append(f"# {k} = {v}")
        return lines

    def require_theta0(self, what: str):
        if not self.T0 > 0:
            raise CliError(f"{what} is normalized by theta0 and needs --t0 > 0")


def _csv(header_lines, columns, rows) -> str:
    out = io.StringIO()
    for line in header_lines:
        out.write(line + "\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(x) for x in row) + "\n")
    return out.getvalue()


def cmd_observables(ctx: Context) -> str:
    args = ctx.args
    if args.omega_grid is None:
        Om = ctx.omega()
        obs = compute_observables(ctx.system(Om), ctx.config)
        row = (obs.Omega, obs.T0, obs.T1, obs.torque, obs.p_rad, obs.p_abs, obs.quad_error)
        return _csv(
            ctx.header("observables"),
            ["Omega", "T0", "T1", "M", "P_rad", "P_abs", "quad_error"],
            [row],
        )

    # normalized stopping power at equal and at equilibrium temperature
    ctx.require_theta0("--omega-grid")
    a = ctx.geometry.radius
    sigma = ctx.sigma0
    if sigma is None:
        sigma = _table_sigma(ctx).sigma0
    unit = HBAR * a**3 * ctx.theta0**6 / (60.0 * math.pi**2 * C_LIGHT**3 * sigma)
    rows = []
    for x in parse_grid(args.omega_grid):
        Om = x * ctx.theta0
        equal = compute_observables(ctx.system(Om, ctx.T0), ctx.config)
        T1s = equilibrium_temperature(ctx.spec, ctx.geometry, ctx.T0, Om, ctx.config).T1_star
        eq = compute_observables(ctx.system(Om, T1s), ctx.config)
        rows.append((x, T1s / ctx.T0, equal.stopping_power / unit, eq.stopping_power / unit))
    extra = {
        "stopping_unit_erg_per_s": _fmt(unit),
        "stopping_unit": "hbar a^3 theta0^6 / (60 pi^2 c^3 sigma0)",
    }
    return _csv(
        ctx.header("observables", extra),
        ["Omega_over_theta0", "T1_eq_over_T0", "stop_equal_T", "stop_equilibrium_T"],
        rows,
    )


def cmd_spectrum(ctx: Context) -> str:
    Om = ctx.omega()
    scale = max(ctx.theta0, Om)
    if not scale > 0:
        raise CliError("spectrum grid is empty: need --t0 > 0 or --omega > 0")
    system = ctx.system(Om)
    hi = ctx.config.cutoff_factor * scale
    if math.isfinite(ctx.spec.omega_max):
        hi = min(hi, ctx.spec.omega_max - Om)
        if hi <= 1e-3 * scale:
            raise CliError("material table does not reach the spectrum frequency range")
    grid = np.geomspace(1e-3 * scale, hi, SPECTRUM_POINTS)
    values = emission_spectrum(system, grid)
    rows = list(zip(grid, values))
    if ctx.args.peak:
        rows.append(("peak", peak_emission_frequency(system, ctx.config)))
    return _csv(ctx.header("spectrum", {"T1_resolved": _fmt(system.T1)}), ["omega", "dP_domega"], rows)


def cmd_equilibrium(ctx: Context) -> str:
    ctx.require_theta0("equilibrium curve")
    grid = parse_grid(ctx.args.omega_grid or "0:5:51")
    points = equilibrium_curve(ctx.spec, ctx.geometry, ctx.T0, grid * ctx.theta0, ctx.config)
    rows = [(x, p.T1_over_T0) for x, p in zip(grid, points)]
    failures = {f"invalid_point_{i}": p.message for i, p in enumerate(points) if not p.valid}
    return _csv(ctx.header("equilibrium", failures), ["Omega_over_theta0", "T1_over_T0"], rows)


def _table_sigma(ctx: Context):
    """Drude conductivity from the low-frequency nodes of the first table."""
    table = ctx.material.tables[0]
    window = (table.grid[0], table.grid[min(FIT_NODES, len(table.grid)) - 1])
    return fit_drude_sigma(table, window)


def cmd_stopping_time(ctx: Context) -> str:
    args = ctx.args
    T0s = parse_grid(args.t0_grid, "--t0-grid") if args.t0_grid else np.array([ctx.T0])
    extra = {}
    if ctx.sigma0 is not None:
        sigma = ctx.sigma0
    elif args.drude_sigma is not None:
        sigma = conductivity_si_to_gaussian(args.drude_sigma)
    else:
        fit = _table_sigma(ctx)
        sigma = fit.sigma0
        extra["drude_fit_sigma0_S_per_m"] = _fmt(float(conductivity_gaussian_to_si(fit.sigma0)))
        extra["drude_fit_residual_rms"] = _fmt(fit.residual_rms)
    numeric = ctx.source.kind == "table" or args.numeric
    rows = []
    for T0 in T0s:
        tau = stopping_time_drude(ctx.geometry, sigma, float(T0))
        rows.append((T0, tau, tau / YEAR_TO_S, "drude"))
        if numeric:
            res = stopping_time_numeric(ctx.spec, ctx.geometry, float(T0), ctx.config)
            rows.append((T0, res.tau, res.tau / YEAR_TO_S, "numeric"))
    return _csv(ctx.header("stopping-time", extra), ["T0", "tau_seconds", "tau_years", "method"], rows)


def cmd_spindown(ctx: Context) -> str:
    args = ctx.args
    if not ctx.T0 > 0 and args.t_end.endswith("tau"):
        raise CliError("--t-end in units of tau needs --t0 > 0")
    Om0 = ctx.omega()
    if not Om0 > 0:
        raise CliError("spindown needs --omega > 0")
    mode = QUASISTATIC if ctx.t1 == "equilibrium" else FIXED_T1
    extra = {"mode": mode}
    text = args.t_end
    if text.startswith("x") and text.endswith("tau"):
        try:
            factor = float(text[1:-3])
        except ValueError:
            raise CliError(f"--t-end: cannot parse {text!r}") from None
        if ctx.sigma0 is not None:
            tau = stopping_time_drude(ctx.geometry, ctx.sigma0, ctx.T0)
        else:
            tau = stopping_time_numeric(ctx.spec, ctx.geometry, ctx.T0, ctx.config).tau
        extra["tau_seconds"] = _fmt(tau)
        t_end = factor * tau
    else:
        try:
            t_end = float(text)
        except ValueError:
            raise CliError(f"--t-end must be seconds or x<f>tau, got {text!r}") from None
    if not t_end > 0:
        raise CliError("--t-end must be positive")
    start_T1 = ctx.T1_at(Om0)
    traj = spin_down_trajectory(
        ctx.system(Om0, start_T1), mode, (0.0, t_end), ctx.config, n_points=args.n_points
    )
    _, p_rad, p_abs = traj.energy_ledger.T
    rows = zip(traj.times, traj.omegas, traj.T1_path, p_rad, p_abs)
    return _csv(ctx.header("spindown", extra), ["t", "Omega", "T1", "P_rad", "P_abs"], rows)


def cmd_fit_drude(args) -> str:
    table = read_permittivity_table(args.table)
    lo, hi = parse_window(args.window)
    fit = fit_drude_sigma(
        table, (float(photon_energy_to_angular_frequency(lo)), float(photon_energy_to_angular_frequency(hi)))
    )
    header = [f"# vacuum_friction {__version__} material fit-drude"]
    header += [f"# {k} = {v}" for k, v in (("table", args.table), ("window_eV", args.window))]
    header.append(f"# label = {table.label}")
    row = (float(conductivity_gaussian_to_si(fit.sigma0)), fit.residual_rms, float(fit.n_nodes),
           "flagged" if fit.flagged else "ok")
    return _csv(header, ["sigma0_S_per_m", "residual_rms", "n_nodes", "status"], [row])


def parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise CliError(f"--window must be lo:hi in eV, got {text!r}") from None
    if not 0 < lo < hi:
        raise CliError(f"--window needs 0 < lo < hi, got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--material", default="drude:2e5",
                        help="drude:<S/m> or table:<path>[,<path>] (E perp c, E par c)")
    common.add_argument("--radius-nm", type=_positive("--radius-nm"), default=10.0)
    common.add_argument("--eta", type=_positive("--eta"), default=1.0, help="aspect ratio c/a, 0 < eta <= 1")
    common.add_argument("--density", type=_positive("--density"), default=2.26, help="g/cm^3")
    common.add_argument("--t0", type=_nonnegative("--t0"), default=2.7, help="vacuum temperature, K")
    common.add_argument("--t1", default="equilibrium", help="particle temperature in K, or 'equilibrium'")
    common.add_argument("--omega", default="x1theta0", help="rad/s, or x<f>theta0")
    common.add_argument("--omega-grid", default=None, help="lo:hi:n[,log] in units of theta0")
    common.add_argument("--rel-tol", type=float, default=1e-8)
    common.add_argument("--full-drude", action="store_true",
                        help="drude: use the full Drude permittivity with radiative correction")
    common.add_argument("--no-radiative-correction", action="store_true")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seedless", action="store_true",
                        help="accepted for compatibility; output is always deterministic")

    parser = _Parser(prog="vacuum-friction", description="Vacuum friction on spinning nanoparticles.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("observables", parents=[common], help="torque and powers")
    p.set_defaults(handler=cmd_observables)
    p = sub.add_parser("spectrum", parents=[common], help="radiated power spectrum")
    p.add_argument("--peak", action="store_true", help="append the peak frequency")
    p.set_defaults(handler=cmd_spectrum)
    p = sub.add_parser("equilibrium", parents=[common], help="equilibrium temperature curve")
    p.set_defaults(handler=cmd_equilibrium)
    p = sub.add_parser("stopping-time", parents=[common], help="characteristic stopping time")
    p.add_argument("--t0-grid", default=None, help="lo:hi:n[,log] in K")
    p.add_argument("--drude-sigma", type=_positive("--drude-sigma"), default=None,
                   help="S/m for the analytic row with a table material (default: fit)")
    p.add_argument("--numeric", action="store_true", help="also integrate the torque for drude:")
    p.set_defaults(handler=cmd_stopping_time)
    p = sub.add_parser("spindown", parents=[common], help="spin-down trajectory")
    p.add_argument("--t-end", default="x3tau", help="seconds, or x<f>tau")
    p.add_argument("--n-points", type=int, default=65)
    p.set_defaults(handler=cmd_spindown)

    mat = sub.add_parser("material", help="material utilities")
    msub = mat.add_subparsers(dest="material_command", required=True, parser_class=_Parser)
    p = msub.add_parser("fit-drude", help="fit sigma0 to the low-frequency tail of a table")
    p.add_argument("--table", required=True)
    p.add_argument("--window", required=True, help="lo:hi photon energy in eV")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=None, fit=True)
    return parser


def _report(exc: Exception, code: int) -> None:
    line = {"error": type(exc).__name__, "exit_code": code, "message": str(exc)}
    sys.stderr.write(json.dumps(line, sort_keys=True) + "\n")


def run(argv=None) -> tuple[int, str | None, str | None]:
    """Parse and execute; returns (exit code, CSV text or None, output path)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "fit", False):
            text = cmd_fit_drude(args)
        else:
            text = args.handler(Context(args))
    except (ConfigError, OSError) as exc:
        _report(exc, 2)
        return 2, None, None
    except VacuumFrictionError as exc:
        _report(exc, 3)
        return 3, None, None
    return 0, text, args.out


def main(argv=None) -> int:
    code, text, out = run(argv)
    if text is None:
        return code
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
