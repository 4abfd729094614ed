"""Complex permittivity models: Drude metals and tabulated optical data.

All frequencies are angular frequencies in rad/s and conductivities are in
Gaussian units (s^-1). Every evaluation path honours the retarded-response
symmetry eps(-w) = conj(eps(w)) by conjugating at negative frequency.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, TextIO

import numpy as np

from .constants import (
    angular_frequency_to_photon_energy,
    photon_energy_to_angular_frequency,
)
from .errors import DomainError, FormatError, RangeError, SingularityError, ValidationError


class Orientation(str, Enum):
    E_PERP_C = "Eperp"
    E_PAR_C = "Epar"
    ISOTROPIC = "iso"


# crystal average for uniaxial grains, applied to the polarizability
GRAPHITE_WEIGHTS = {Orientation.E_PERP_C: 2.0 / 3.0, Orientation.E_PAR_C: 1.0 / 3.0}


@dataclass(frozen=True)
class DrudeModel:
    sigma0: float  # s^-1

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise DomainError(f"Drude conductivity must be positive, got {self.sigma0!r}")

    def permittivity(self, omega):
        return drude_permittivity(omega, self)


def drude_permittivity(omega, model: DrudeModel):
    """Return ``1 + 4*pi*i*sigma0/omega``.

    Raises SingularityError at omega == 0; callers that need the static limit
    must go through the polarizability, which is finite there.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0):
        raise SingularityError("Drude permittivity is singular at omega = 0")
    # 1/w is odd, so the conjugate symmetry holds without special casing
    return (1.0 + 4j * math.pi * model.sigma0 / w)[()]


@dataclass(frozen=True, eq=False)
class PermittivityTable:
    label: str
    orientation: Orientation
    grid: np.ndarray  # rad/s, strictly increasing
    eps_re: np.ndarray
    eps_im: np.ndarray
    radius_nm: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        re = np.asarray(self.eps_re, dtype=float)
        im = np.asarray(self.eps_im, dtype=float)
        if not (grid.ndim == re.ndim == im.ndim == 1) or not (len(grid) == len(re) == len(im)):
            raise FormatError("grid, eps_re and eps_im must be 1-D and of equal length")
        if len(grid) < 4:
            raise FormatError(f"a permittivity table needs at least 4 rows, got {len(grid)}")
        if not np.all(np.isfinite(grid)) or grid[0] <= 0:
            raise FormatError("table frequencies must be finite and strictly positive")
        if np.any(np.diff(grid) <= 0):
            raise FormatError("table frequencies must be strictly increasing (duplicate rows?)")
        if np.any(im < 0):
            bad = int(np.argmax(im < 0))
            raise ValidationError(
                f"negative Im eps = {im[bad]!r} at row {bad}: medium must be passive"
            )
        for name, arr in (("grid", grid), ("eps_re", re), ("eps_im", im)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @property
    def omega_min(self) -> float:
        return float(self.grid[0])

    @property
    def omega_max(self) -> float:
        return float(self.grid[-1])

    def permittivity(self, omega):
        return interpolate_permittivity(self, omega)


def interpolate_permittivity(table: PermittivityTable, omega):
    """Evaluate a tabulated permittivity.

    Inside the grid Re eps is linear in log(omega) and Im eps is linear in
    log(omega)-log(Im eps) where both bracketing values are positive (plain
    linear otherwise). Below the grid Im eps follows a Drude 1/omega tail and
    Re eps is held. Above the grid a RangeError is raised.
    """
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    if np.any(w == 0):
        raise SingularityError("tabulated permittivity is not defined at omega = 0")
    aw = np.abs(w)
    if np.any(aw > table.omega_max * (1.0 + 1e-12)):
        raise RangeError(
            f"omega = {aw.max():.6g} rad/s lies above the table maximum "
            f"{table.omega_max:.6g} rad/s"
        )
    aw = np.minimum(aw, table.omega_max)
    grid, re, im = table.grid, table.eps_re, table.eps_im
    lg = np.log(grid)

    out_re = np.empty_like(aw)
    out_im = np.empty_like(aw)

    below = aw < grid[0]
    out_re[below] = re[0]
    out_im[below] = im[0] * grid[0] / aw[below]

    inside = ~below
    x = np.log(aw[inside])
    j = np.clip(np.searchsorted(grid, aw[inside], side="right") - 1, 0, len(grid) - 2)
    t = (x - lg[j]) / (lg[j + 1] - lg[j])
    out_re[inside] = np.where(t == 1, re[j + 1], re[j] + t * (re[j + 1] - re[j]))

    lo, hi = im[j], im[j + 1]
    both_pos = (lo > 0) & (hi > 0)
    lin = lo + t * (hi - lo)
    with np.errstate(divide="ignore", invalid="ignore"):
        logi = np.exp(np.log(lo) + t * (np.log(hi) - np.log(lo)))
    vals = np.where(both_pos, logi, lin)
    # land exactly on the tabulated value at nodes
    vals = np.where(t == 0, lo, np.where(t == 1, hi, vals))
    out_im[inside] = np.maximum(vals, 0.0)

    eps = out_re + 1j * out_im
    eps = np.where(w < 0, np.conj(eps), eps)
    return eps[0] if scalar else eps


def load_permittivity_table(stream: TextIO, label: str | None = None) -> PermittivityTable:
    """Parse a permittivity CSV.

    ``#`` lines are comments; ``# material:``, ``# orientation:`` and
    ``# radius_nm:`` are read as metadata. Data rows are
    ``photon_energy_eV, eps_re, eps_im``.
    """
    meta = {}
    rows = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                key = key.strip().lower()
                if key in ("material", "orientation", "radius_nm"):
                    meta[key] = value.strip()
            continue
        fields = next(csv.reader([line]))
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected 3 columns, got {len(fields)}")
        try:
            energy, re, im = (float(f) for f in fields)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if not energy > 0:
            raise FormatError(f"line {lineno}: photon energy must be positive, got {energy!r}")
        rows.append((energy, re, im))

    if len(rows) < 4:
        raise FormatError(f"a permittivity table needs at least 4 rows, got {len(rows)}")
    rows.sort(key=lambda r: r[0])
    data = np.array(rows)

    orientation = meta.get("orientation", "iso")
    try:
        orientation = Orientation(orientation)
    except ValueError:
        raise FormatError(f"unknown orientation {orientation!r}; use Eperp, Epar or iso") from None
    radius = meta.get("radius_nm")
    try:
        radius = float(radius) if radius is not None else None
    except ValueError:
        raise FormatError(f"bad radius_nm header value {radius!r}") from None

    return PermittivityTable(
        label=meta.get("material", label or "unnamed"),
        orientation=orientation,
        grid=photon_energy_to_angular_frequency(data[:, 0]),
        eps_re=data[:, 1],
        eps_im=data[:, 2],
        radius_nm=radius,
    )


def read_permittivity_table(path) -> PermittivityTable:
    with open(path, encoding="utf-8") as fh:
        return load_permittivity_table(fh, label=str(path))


def write_permittivity_table(table: PermittivityTable, stream: TextIO) -> None:
    stream.write(f"# material: {table.label}\n")
    stream.write(f"# orientation: {table.orientation.value}\n")
    if table.radius_nm is not None:
        stream.write(f"# radius_nm: {table.radius_nm!r}\n")
    stream.write("# photon_energy_eV, eps_re, eps_im\n")
    energies = angular_frequency_to_photon_energy(table.grid)
    for e, re, im in zip(energies, table.eps_re, table.eps_im):
        stream.write(f"{float(e)!r}, {float(re)!r}, {float(im)!r}\n")


def dumps_permittivity_table(table: PermittivityTable) -> str:
    buf = io.StringIO()
    write_permittivity_table(table, buf)
    return buf.getvalue()


def table_from_function(eps_func, omegas, label="synthetic", orientation=Orientation.ISOTROPIC):
    """Sample ``eps_func`` on ``omegas`` (rad/s) into a table."""
    omegas = np.asarray(omegas, dtype=float)
    eps = np.asarray(eps_func(omegas), dtype=complex)
    return PermittivityTable(label, orientation, omegas, eps.real.copy(), eps.imag.copy())


@dataclass(frozen=True)
class DrudeFit:
    sigma0: float  # s^-1
    residual_rms: float  # relative scatter of omega*Im(eps)/4pi about sigma0
    n_nodes: int
    tolerance: float = 1e-3

    @property
    def flagged(self) -> bool:
        """True when the window is not well described by a Drude tail."""
        return self.residual_rms > self.tolerance


def fit_drude_sigma(table: PermittivityTable, window: Sequence[float]) -> DrudeFit:
    lo, hi = window
    if not (lo < hi) or lo < table.omega_min * (1 - 1e-12) or hi > table.omega_max * (1 + 1e-12):
        raise RangeError(
            f"fit window [{lo:.6g}, {hi:.6g}] rad/s must lie inside the table grid "
            f"[{table.omega_min:.6g}, {table.omega_max:.6g}]"
        )
    sel = (table.grid >= lo * (1 - 1e-12)) & (table.grid <= hi * (1 + 1e-12))
    if sel.sum() < 3:
        raise RangeError(f"fit window contains {int(sel.sum())} nodes, need at least 3")
    samples = table.grid[sel] * table.eps_im[sel] / (4.0 * math.pi)
    sigma = float(samples.mean())
    if sigma <= 0:
        raise ValidationError("Im eps vanishes across the fit window; no Drude conductivity")
    resid = float(np.sqrt(np.mean((samples / sigma - 1.0) ** 2)))
    return DrudeFit(sigma, resid, int(sel.sum()))


@dataclass(frozen=True)
class ExtrapolationPolicy:
    """How tabulated data is continued outside its grid (fixed by design)."""

    below: str = "drude_tail"
    above: str = "error"


@dataclass(frozen=True, eq=False)
class TabulatedMaterial:
    tables: tuple[PermittivityTable, ...]
    weights: tuple[float, ...]
    extrapolation: ExtrapolationPolicy = field(default_factory=ExtrapolationPolicy)

    def __post_init__(self):
        if len(self.tables) == 0 or len(self.tables) != len(self.weights):
            raise ValidationError("need one weight per table and at least one table")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValidationError(f"orientation weights must be >= 0 and sum to 1, got {self.weights}")
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "weights", tuple(float(x) for x in self.weights))

    @property
    def omega_max(self) -> float:
        return min(t.omega_max for t in self.tables)

    @property
    def nodes(self) -> np.ndarray:
        return np.unique(np.concatenate([t.grid for t in self.tables]))

    @classmethod
    def single(cls, table: PermittivityTable) -> "TabulatedMaterial":
        return cls((table,), (1.0,))

    @classmethod
    def graphite(cls, perp: PermittivityTable, par: PermittivityTable) -> "TabulatedMaterial":
        return cls(
            (perp, par),
            (GRAPHITE_WEIGHTS[Orientation.E_PERP_C], GRAPHITE_WEIGHTS[Orientation.E_PAR_C]),
        )


MaterialModel = DrudeModel | TabulatedMaterial
