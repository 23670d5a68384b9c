"""Run configuration, parameter sweeps and dataset output.

All frequencies are in units of the cavity frequency. Datasets are CSV files
with ``#``-prefixed metadata lines plus a JSON sidecar; both are byte-stable
for a given configuration.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .baths import BathSet
from .hilbert import build_space
from .liouvillian import SteadyStateError
from .model import ModelParams, dressed_levels
from .observables import default_omega_grid, find_peaks
from .system import OpenSystem, build_system

log = logging.getLogger(__name__)

CHANNELS = ("cav", "fe")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # model
    omega_cav: float = 1.0
    omega_L: float = 10.0
    Omega_cav: float = 0.1
    n_max: int = 8
    rwa: bool = False
    omega_cav_zero: bool = False
    two_level: bool = False
    # baths
    gamma_eg: float = 0.01
    gamma_fe: float = 1e-3
    gamma_cav: float = 1e-3
    omega_edge: float = 0.1
    omega_max: float = 21.0
    delta_omega: float = 0.025
    lamb_shift: bool = False
    # sweep
    sweep_start: float = 0.0
    sweep_stop: float = 2.5
    sweep_count: int = 101
    p_tol: float = 1e-6
    max_n_max: int = 16
    convergence_check: bool = False
    workers: int = 1
    # spectra / levels
    spectra: tuple[tuple[float, str], ...] = ((0.7, "cav"), (0.7, "fe"), (2.0, "cav"), (2.0, "fe"))
    omega_grid: tuple[float, float, float] = (0.0, 4.0, 2e-3)
    level_ceiling: float = 3.0
    # output
    out_dir: str = "out"

    def __post_init__(self):
        if self.sweep_count < 2:
            raise ConfigError("sweep count must be at least 2")
        if not self.sweep_start < self.sweep_stop:
            raise ConfigError("sweep start must be below sweep stop")
        if self.sweep_start < 0:
            raise ConfigError("drive Rabi frequencies must be non-negative")
        if self.n_max < 0:
            raise ConfigError("n_max must be non-negative")
        if self.max_n_max < self.n_max:
            raise ConfigError("max_n_max must be at least n_max")
        start, stop, step = self.omega_grid
        if step <= 0 or stop <= start:
            raise ConfigError("omega grid needs start < stop and step > 0")
        for omega, channel in self.spectra:
            if channel not in CHANNELS:
                raise ConfigError(f"unknown spectrum channel {channel!r}")
        if any(g < 0 for g in (self.gamma_eg, self.gamma_fe, self.gamma_cav)):
            raise ConfigError("decay rates must be non-negative")
        if not 0 < self.omega_edge < self.omega_max or self.delta_omega <= 0:
            raise ConfigError("bath shape needs 0 < omega_edge < omega_max and delta_omega > 0")

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    @property
    def sweep_values(self) -> np.ndarray:
        return np.linspace(self.sweep_start, self.sweep_stop, self.sweep_count)

    def params(self, Omega_eg: float) -> ModelParams:
        return ModelParams.resonant(
            Omega_eg,
            0.0 if self.omega_cav_zero else self.Omega_cav,
            omega_cav=self.omega_cav,
            omega_L=self.omega_L,
            rwa_coupling=self.rwa,
        )

    def baths(self) -> BathSet:
        return BathSet.default(
            self.gamma_eg,
            self.gamma_fe,
            self.gamma_cav,
            omega_edge=self.omega_edge,
            omega_max=self.omega_max,
            delta_omega=self.delta_omega,
        )

    def space(self, n_max: int | None = None):
        levels = ("g", "e") if self.two_level else ("g", "e", "f")
        return build_space(self.n_max if n_max is None else n_max, levels)

    def system(self, Omega_eg: float, n_max: int | None = None) -> OpenSystem:
        return build_system(
            self.params(Omega_eg), self.space(n_max), self.baths(), lamb_shift=self.lamb_shift
        )


_SECTIONS = {
    "model": ("omega_cav", "omega_L", "Omega_cav", "n_max", "rwa", "omega_cav_zero", "two_level"),
    "baths": ("gamma_eg", "gamma_fe", "gamma_cav", "omega_edge", "omega_max", "delta_omega", "lamb_shift"),
    "sweep": (
        "sweep_start", "sweep_stop", "sweep_count", "p_tol", "max_n_max",
        "convergence_check", "workers", "spectra", "omega_grid", "level_ceiling",
    ),
    "output": ("out_dir",),
}


def _parse_spectra(text: str) -> tuple[tuple[float, str], ...]:
    out = []
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        omega, _, channel = item.partition(":")
        out.append((float(omega), channel.strip()))
    return tuple(out)


def parse_grid(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"omega grid must be start:stop:step, got {text!r}") from exc
    return start, stop, step


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if kind == "bool":
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if name == "spectra":
        return _parse_spectra(raw)
    if name == "omega_grid":
        return parse_grid(raw)
    return raw.strip()


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Read an INI file (sections model/baths/sweep/output); ``overrides`` win over file values."""
    values = {}
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        if not parser.read(path):
            raise ConfigError(f"cannot read config file {path}")
        for section in parser.sections():
            if section not in _SECTIONS:
                raise ConfigError(f"unknown config section [{section}]")
            for key, raw in parser.items(section):
                if key not in _SECTIONS[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")
                try:
                    values[key] = _coerce(key, raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class Dataset:
    name: str
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([row[k] for row in self.rows], dtype=float)

    @property
    def failed(self) -> int:
        if "status" not in self.columns:
            return 0
        k = self.columns.index("status")
        return sum(1 for row in self.rows if row[k] != "ok")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "nan" if math.isnan(x) else f"{float(x):.12e}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return None if math.isnan(obj) else float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dataset_text(ds: Dataset) -> str:
    meta = json.dumps(_jsonable(ds.metadata), sort_keys=True)
    buf = io.StringIO()
    buf.write(f"# dataset: {ds.name}\n")
    buf.write(f"# metadata: {meta}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ds.columns)
    for row in ds.rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def write_dataset(ds: Dataset, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{ds.name}.csv"
    path.write_text(dataset_text(ds))
    sidecar = {"dataset": ds.name, "columns": ds.columns, "rows": len(ds.rows), **ds.metadata}
    (out / f"{ds.name}.json").write_text(json.dumps(_jsonable(sidecar), sort_keys=True, indent=2) + "\n")
    return path


def read_dataset(path: str | Path) -> Dataset:
    name, meta, lines = Path(path).stem, {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# dataset:"):
            name = line.split(":", 1)[1].strip()
        elif line.startswith("# metadata:"):
            meta = json.loads(line.split(":", 1)[1])
        elif not line.startswith("#"):
            lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader)

    def cell(x):
        try:
            return float(x)
        except ValueError:
            return x

    return Dataset(name, columns, [tuple(cell(x) for x in row) for row in reader], meta)


def _metadata(config: RunConfig, **extra) -> dict:
    return {"config": asdict(config), "version": __version__, **extra}


SWEEP_COLUMNS = [
    "Omega_eg", "I_cav", "I_fe", "R_eg", "residual", "p_nmax", "n_max_used",
    "min_eig", "convergence_change", "status",
]


def solve_point(config: RunConfig, Omega_eg: float) -> tuple:
    """One sweep row. n_max is raised in steps of 4 while p(n_max) > p_tol."""
    n_max = config.n_max
    try:
        while True:
            system = config.system(Omega_eg, n_max)
            p = system.photon_distribution()
            if p[-1] <= config.p_tol or n_max + 4 > config.max_n_max:
                break
            log.info("Omega_eg=%.4f: p(n_max=%d)=%.2e, raising truncation", Omega_eg, n_max, p[-1])
            n_max += 4
        intensities = system.intensities()
        I_cav, I_fe = intensities["cav"], intensities.get("fe", math.nan)
        change = math.nan
        status = "ok"
        if config.convergence_check:
            bigger = config.system(Omega_eg, n_max + 4).intensities()
            change = max(
                abs(bigger[k] - intensities[k]) / max(abs(bigger[k]), 1e-300) for k in intensities
            )
            if change >= 0.01:
                status = "unconverged"
        if p[-1] > config.p_tol:
            status = "truncation"
        return (
            float(Omega_eg), I_cav, I_fe, system.absorption_rate(), system.residual,
            float(p[-1]), n_max, float(np.linalg.eigvalsh(system.rho_ss)[0]), change, status,
        )
    except (SteadyStateError, np.linalg.LinAlgError) as exc:
        log.warning("Omega_eg=%.4f failed: %s", Omega_eg, exc)
        nan = math.nan
        return (float(Omega_eg), nan, nan, nan, nan, nan, n_max, nan, nan, f"error: {exc}")


def run_intensity_sweep(config: RunConfig, values=None) -> Dataset:
    """I_cav, I_fe and R_eg versus drive Rabi frequency, one row per point, in sweep order."""
    values = config.sweep_values if values is None else np.asarray(values, dtype=float)
    worker = partial(solve_point, config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(worker, values))
    else:
        rows = [worker(v) for v in values]
    return Dataset("sweep", list(SWEEP_COLUMNS), rows, _metadata(config))


def run_spectrum(config: RunConfig, Omega_eg: float, channel: str, *, refine: bool = True) -> Dataset:
    """Emission spectrum G(w) of one channel with annotated peaks."""
    if channel not in CHANNELS:
        raise ConfigError(f"unknown channel {channel!r}")
    system = config.system(Omega_eg)
    grid = default_omega_grid(*config.omega_grid)
    spec = system.spectrum(channel, grid, refine=refine)
    peaks = find_peaks(spec.omega_grid, spec.g_values)
    rows = list(zip(spec.omega_grid.tolist(), spec.g_values.tolist()))
    meta = _metadata(
        config,
        Omega_eg=Omega_eg,
        channel=channel,
        coherent_weight=spec.coherent_weight,
        intensity=spec.intensity,
        peaks=peaks.tolist(),
    )
    return Dataset(f"spectrum_{channel}_{Omega_eg:g}", ["omega", "G"], rows, meta)


def run_levels(config: RunConfig, Omega_eg: float) -> Dataset:
    """Dressed levels below ``level_ceiling`` with their dominant bare labels."""
    system = config.system(Omega_eg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        levels = dressed_levels(system.H, system.space)
    rows = [
        (lvl.energy, lvl.label, lvl.overlap, lvl.runner_up, int(lvl.mixed))
        for lvl in levels
        if lvl.energy <= config.level_ceiling
    ]
    meta = _metadata(config, Omega_eg=Omega_eg, warnings=[str(w.message) for w in caught])
    return Dataset(f"levels_{Omega_eg:g}", ["energy", "label", "overlap", "runner_up", "mixed"], rows, meta)


def run_steady(config: RunConfig, Omega_eg: float) -> tuple[Dataset, Dataset]:
    """Photon-number distribution and the full steady-state density matrix."""
    system = config.system(Omega_eg)
    rho = system.rho_ss
    p = system.photon_distribution()
    meta = _metadata(
        config,
        Omega_eg=Omega_eg,
        residual=system.residual,
        R_eg=system.absorption_rate(),
        min_eig=float(np.linalg.eigvalsh(rho)[0]),
    )
    dist = Dataset(f"photons_{Omega_eg:g}", ["n", "p"], [(n, float(x)) for n, x in enumerate(p)], meta)
    entries = [
        (i, j, float(rho[i, j].real), float(rho[i, j].imag))
        for i in range(rho.shape[0])
        for j in range(rho.shape[1])
    ]
    dm = Dataset(f"rho_{Omega_eg:g}", ["row", "col", "re", "im"], entries, meta)
    return dist, dm
