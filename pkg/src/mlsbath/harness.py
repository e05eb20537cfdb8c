"""Configuration files, scenario runs, parameter sweeps and persistence.

Configuration format
--------------------
Plain INI (``configparser``): typed ``key = value`` pairs in sections.
Unknown keys are rejected.  All sections except ``[system]`` and
``[spectrum]`` are optional.

``[system]``
    kind = three-level | two-level | multilevel | custom
    levels = <int>            (multilevel)
    delta = <float>           (multilevel; coupling range)
    flat = true|false         (multilevel; constant couplings)
    energies = e1 e2 ...      (custom)
    coupling = r1c1 r1c2 ...; r2c1 ...   (custom; rows split by ';')

``[state]``
    a = <complex>   b = <complex>     (default: sqrt(0.1), 1j*sqrt(0.9))

``[spectrum]``
    kind = rectangular | lorentzian | power-gaussian
    area = <float>
    center = <float>  width = <float>         (rectangular/lorentzian)
    ohmicity = <float>  cutoff = <float>      (power-gaussian)

``[evolution]``   t_max, dt, corrector_iterations
``[fit]``         t_lo, t_hi
``[rpa]``         pole_shift, ladder, omega_max, scan_points
``[table]``       t_max, dt (correlator table); omega_min, omega_max,
                  points (spectrum table)
``[sweep]``
    kind = spectral-center | spectral-area | levels | correlator |
           rpa-width | rpa-area
    grid = v1 v2 v3 ...       (strictly monotone)
    grid_log = start stop count   (log-spaced alternative)

Outputs
-------
CSV files carry a header row, comma separators, LF line endings and
full double precision (17 significant digits), so repeated runs are
byte-identical.  Sweeps write a ``*.meta.ini`` sidecar echoing the
resolved base configuration and its hash; every row carries the
per-point config hash.  Failed sweep points are recorded in-row in the
``status`` column and do not stop the sweep.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .evolve import EvolutionConfig, Trajectory, integrate
from .model import (
    QubitInitialState,
    SystemSpec,
    build_multilevel,
    build_three_level,
    build_two_level,
    default_initial_state,
    initial_density,
)
from .rates import FitWindow, RateSet, extract_rates
from .rpa import RpaConfig, delta_n_total
from .spectra import (
    Correlator,
    Lorentzian,
    PowerGaussian,
    Rectangular,
    SpectralModel,
    correlator,
    evaluate,
    support,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SweepSpec",
    "load_config",
    "run_scenario",
    "run_sweep",
    "write_trajectory_csv",
    "write_rates_json",
    "write_sweep_csv",
]

SWEEP_KINDS = (
    "spectral-center",
    "spectral-area",
    "levels",
    "correlator",
    "rpa-width",
    "rpa-area",
)

_KNOWN_KEYS = {
    "system": {"kind", "levels", "delta", "flat", "energies", "coupling"},
    "state": {"a", "b"},
    "spectrum": {"kind", "area", "center", "width", "ohmicity", "cutoff"},
    "evolution": {"t_max", "dt", "corrector_iterations"},
    "fit": {"t_lo", "t_hi"},
    "rpa": {"pole_shift", "ladder", "omega_max", "scan_points"},
    "table": {"t_max", "dt", "omega_min", "omega_max", "points"},
    "sweep": {"kind", "grid", "grid_log"},
}


class ConfigError(ValueError):
    """Configuration file violates the schema or a model invariant."""


@dataclass(frozen=True)
class SystemChoice:
    """System selector kept symbolic so sweeps can rebuild at other sizes."""

    kind: str
    levels: int = 3
    delta: float | None = None
    flat: bool = False
    energies: tuple[float, ...] | None = None
    coupling: tuple[tuple[float, ...], ...] | None = None

    def build(self, levels: int | None = None) -> SystemSpec:
        n = self.levels if levels is None else levels
        if self.kind == "three-level":
            return build_three_level()
        if self.kind == "two-level":
            return build_two_level()
        if self.kind == "multilevel":
            return build_multilevel(n, delta=self.delta, flat=self.flat)
        if self.kind == "custom":
            return SystemSpec(np.array(self.energies), np.array(self.coupling))
        raise ConfigError(f"unknown system kind {self.kind!r}")

    def normalized(self) -> "SystemChoice":
        """Map NaN placeholders to None and validate by building once."""
        delta = None if (self.delta is None or math.isnan(self.delta)) else self.delta
        choice = replace(self, delta=delta)
        try:
            choice.build()
        except ValueError as exc:
            raise ConfigError(f"[system] invariant violation: {exc}") from exc
        return choice


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to integrate one trajectory and fit its rates."""

    system: SystemChoice
    state: QubitInitialState
    model: SpectralModel
    evolution: EvolutionConfig
    window: FitWindow
    rpa: RpaConfig

    def canonical_text(self) -> str:
        """Deterministic key=value rendering used for hashing and sidecars."""
        lines = ["[system]", f"kind = {self.system.kind}"]
        if self.system.kind == "multilevel":
            lines.append(f"levels = {self.system.levels}")
            lines.append(f"flat = {str(self.system.flat).lower()}")
            if self.system.delta is not None:
                lines.append(f"delta = {_fmt(self.system.delta)}")
        if self.system.kind == "custom":
            lines.append("energies = " + " ".join(_fmt(e) for e in self.system.energies))
            lines.append(
                "coupling = "
                + "; ".join(" ".join(_fmt(v) for v in row) for row in self.system.coupling)
            )
        lines += ["[state]", f"a = {self.state.a!r}", f"b = {self.state.b!r}", "[spectrum]"]
        m = self.model
        if isinstance(m, Rectangular):
            lines += [
                "kind = rectangular",
                f"area = {_fmt(m.area)}",
                f"center = {_fmt(m.center)}",
                f"width = {_fmt(m.half_width)}",
            ]
        elif isinstance(m, Lorentzian):
            lines += [
                "kind = lorentzian",
                f"area = {_fmt(m.area)}",
                f"center = {_fmt(m.center)}",
                f"width = {_fmt(m.width)}",
            ]
        else:
            lines += [
                "kind = power-gaussian",
                f"area = {_fmt(m.area)}",
                f"ohmicity = {_fmt(m.ohmicity)}",
                f"cutoff = {_fmt(m.cutoff)}",
            ]
        lines += [
            "[evolution]",
            f"t_max = {_fmt(self.evolution.t_max)}",
            f"dt = {_fmt(self.evolution.dt)}",
            f"corrector_iterations = {self.evolution.corrector_iterations}",
            "[fit]",
            f"t_lo = {_fmt(self.window.t_lo)}",
            f"t_hi = {_fmt(self.window.t_hi)}",
            "[rpa]",
            f"pole_shift = {_fmt(self.rpa.pole_shift)}",
            f"ladder = {self.rpa.ladder}",
            f"omega_max = {_fmt(self.rpa.omega_max)}",
            f"scan_points = {self.rpa.scan_points}",
        ]
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SweepSpec:
    """A parameter grid swept over a base scenario."""

    kind: str
    grid: tuple[float, ...]
    base: ScenarioConfig

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ConfigError(f"unknown sweep kind {self.kind!r}, expected one of {SWEEP_KINDS}")
        if len(self.grid) == 0:
            raise ConfigError("sweep grid must be non-empty")
        diffs = np.diff(self.grid)
        if len(self.grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError("sweep grid must be strictly monotone")
        if self.kind == "levels" and self.base.system.kind != "multilevel":
            raise ConfigError("levels sweep requires a multilevel base system")
        if self.kind == "spectral-center" and isinstance(self.base.model, PowerGaussian):
            raise ConfigError("spectral-center sweep needs a rectangular or Lorentzian model")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# --- parsing -----------------------------------------------------------------


def _typed(section, key, cast, default=None, *, path="<config>"):
    if key not in section:
        if default is None:
            raise ConfigError(f"{path}: [{section.name}] missing required key {key!r}")
        return default
    raw = section[key]
    try:
        if cast is bool:
            if raw.lower() not in ("true", "false"):
                raise ValueError(raw)
            return raw.lower() == "true"
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(
            f"{path}: [{section.name}] {key} = {raw!r} is not a valid {cast.__name__}"
        ) from exc


def _check_known_keys(parser: configparser.ConfigParser, path: str) -> None:
    for name in parser.sections():
        if name not in _KNOWN_KEYS:
            raise ConfigError(f"{path}: unknown section [{name}]")
        extra = set(parser[name]) - _KNOWN_KEYS[name]
        if extra:
            raise ConfigError(f"{path}: unknown key(s) {sorted(extra)} in [{name}]")


def _parse_system(parser, path) -> SystemChoice:
    if "system" not in parser:
        raise ConfigError(f"{path}: missing [system] section")
    sec = parser["system"]
    kind = _typed(sec, "kind", str, path=path)
    if kind in ("three-level", "two-level"):
        return SystemChoice(kind=kind)
    if kind == "multilevel":
        return SystemChoice(
            kind=kind,
            levels=_typed(sec, "levels", int, path=path),
            delta=_typed(sec, "delta", float, default=math.nan, path=path),
            flat=_typed(sec, "flat", bool, default=False, path=path),
        ).normalized()
    if kind == "custom":
        energies = tuple(float(v) for v in sec.get("energies", "").split())
        rows = [r.strip() for r in sec.get("coupling", "").split(";") if r.strip()]
        coupling = tuple(tuple(float(v) for v in row.split()) for row in rows)
        try:
            SystemSpec(np.array(energies), np.array(coupling))
        except ValueError as exc:
            raise ConfigError(f"{path}: [system] invariant violation: {exc}") from exc
        return SystemChoice(kind=kind, levels=len(energies), energies=energies, coupling=coupling)
    raise ConfigError(f"{path}: [system] unknown kind {kind!r}")


def _parse_spectrum(parser, path) -> SpectralModel:
    if "spectrum" not in parser:
        raise ConfigError(f"{path}: missing [spectrum] section")
    sec = parser["spectrum"]
    kind = _typed(sec, "kind", str, path=path)
    area = _typed(sec, "area", float, path=path)
    try:
        if kind == "rectangular":
            return Rectangular(area, _typed(sec, "center", float, path=path),
                               _typed(sec, "width", float, path=path))
        if kind == "lorentzian":
            return Lorentzian(area, _typed(sec, "center", float, path=path),
                              _typed(sec, "width", float, path=path))
        if kind == "power-gaussian":
            return PowerGaussian(area, _typed(sec, "ohmicity", float, path=path),
                                 _typed(sec, "cutoff", float, path=path))
    except ValueError as exc:
        raise ConfigError(f"{path}: [spectrum] {exc}") from exc
    raise ConfigError(f"{path}: [spectrum] unknown kind {kind!r}")


def load_config(path: str | Path) -> tuple[ScenarioConfig, SweepSpec | None, dict]:
    """Parse a configuration file into a scenario, optional sweep and
    table options.  Schema violations raise ConfigError naming the file,
    section and key."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    _check_known_keys(parser, str(path))

    system = _parse_system(parser, str(path))
    model = _parse_spectrum(parser, str(path))

    if "state" in parser:
        sec = parser["state"]
        try:
            state = QubitInitialState(complex(sec.get("a")), complex(sec.get("b")))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: [state] {exc}") from exc
    else:
        state = default_initial_state()

    try:
        if "evolution" in parser:
            sec = parser["evolution"]
            evolution = EvolutionConfig(
                t_max=_typed(sec, "t_max", float, default=2.5, path=str(path)),
                dt=_typed(sec, "dt", float, default=0.001, path=str(path)),
                corrector_iterations=_typed(sec, "corrector_iterations", int, default=2,
                                            path=str(path)),
            )
        else:
            evolution = EvolutionConfig()
        if "fit" in parser:
            sec = parser["fit"]
            window = FitWindow(
                t_lo=_typed(sec, "t_lo", float, default=1.0, path=str(path)),
                t_hi=_typed(sec, "t_hi", float, default=2.5, path=str(path)),
            )
        else:
            window = FitWindow()
        if "rpa" in parser:
            sec = parser["rpa"]
            rpa = RpaConfig(
                pole_shift=_typed(sec, "pole_shift", float, default=1e-2, path=str(path)),
                ladder=_typed(sec, "ladder", int, default=4, path=str(path)),
                omega_max=_typed(sec, "omega_max", float, default=1000.0, path=str(path)),
                scan_points=_typed(sec, "scan_points", int, default=10_000, path=str(path)),
            )
        else:
            rpa = RpaConfig()
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    scenario = ScenarioConfig(
        system=system, state=state, model=model, evolution=evolution, window=window, rpa=rpa
    )

    sweep = None
    if "sweep" in parser:
        sec = parser["sweep"]
        kind = _typed(sec, "kind", str, path=str(path))
        if "grid_log" in sec:
            parts = sec["grid_log"].split()
            if len(parts) != 3:
                raise ConfigError(f"{path}: [sweep] grid_log needs 'start stop count'")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            grid = tuple(np.logspace(np.log10(start), np.log10(stop), count))
        elif "grid" in sec:
            grid = tuple(float(v) for v in sec["grid"].replace(",", " ").split())
        else:
            raise ConfigError(f"{path}: [sweep] needs grid or grid_log")
        sweep = SweepSpec(kind=kind, grid=grid, base=scenario)

    table = {}
    if "table" in parser:
        sec = parser["table"]
        for key in ("t_max", "dt", "omega_min", "omega_max"):
            if key in sec:
                table[key] = _typed(sec, key, float, path=str(path))
        if "points" in sec:
            table["points"] = _typed(sec, "points", int, path=str(path))
    return scenario, sweep, table


# --- scenario run ------------------------------------------------------------


def run_trajectory(scenario: ScenarioConfig) -> Trajectory:
    spec = scenario.system.build()
    rho0 = initial_density(scenario.state, spec.n_levels)
    return integrate(spec, scenario.model, rho0, scenario.evolution)


def run_scenario(
    scenario: ScenarioConfig | str | Path, out_dir: str | Path
) -> tuple[Trajectory, RateSet]:
    """Integrate, fit, and persist trajectory CSV plus rates JSON.

    Accepts either a parsed ScenarioConfig or a configuration file path.
    """
    if not isinstance(scenario, ScenarioConfig):
        scenario, _, _ = load_config(scenario)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj = run_trajectory(scenario)
    rates = extract_rates(traj, scenario.window)
    write_trajectory_csv(out / "trajectory.csv", traj)
    write_rates_json(out / "rates.json", rates, traj, scenario)
    return traj, rates


def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    """Columns: t, Re/Im of each upper-triangle entry, then the three
    derived observables."""
    m = traj.states.shape[1]
    pairs = [(n, r) for n in range(m) for r in range(n, m)]
    header = ["t"]
    for n, r in pairs:
        header += [f"re_rho_{n + 1}_{r + 1}", f"im_rho_{n + 1}_{r + 1}"]
    header += ["population_2", "coherence_12", "leakage"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        pop = traj.population_2
        coh = traj.coherence_12
        leak = traj.leakage
        for k, t in enumerate(traj.times):
            row = [_fmt(t)]
            for n, r in pairs:
                z = traj.states[k, n, r]
                row += [_fmt(z.real), _fmt(z.imag)]
            row += [_fmt(pop[k]), _fmt(coh[k]), _fmt(leak[k])]
            writer.writerow(row)


def write_rates_json(
    path: str | Path, rates: RateSet, traj: Trajectory, scenario: ScenarioConfig
) -> None:
    payload = {
        "relaxation_rate": rates.relaxation_rate,
        "dephasing_rate": rates.dephasing_rate,
        "leakage_rate": rates.leakage_rate,
        "r_squared": list(rates.r_squared),
        "warnings": list(rates.warnings),
        "max_trace_drift": traj.max_trace_drift,
        "max_hermiticity_defect": traj.max_hermiticity_defect,
        "config_hash": scenario.config_hash(),
    }
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- sweeps ------------------------------------------------------------------


def _point_scenario(sweep: SweepSpec, value: float) -> ScenarioConfig:
    base = sweep.base
    kind = sweep.kind
    if kind == "spectral-center":
        return replace(base, model=replace(base.model, center=value))
    if kind in ("spectral-area", "rpa-area"):
        return replace(base, model=replace(base.model, area=value))
    if kind == "rpa-width":
        if isinstance(base.model, Rectangular):
            return replace(base, model=replace(base.model, half_width=value))
        if isinstance(base.model, Lorentzian):
            return replace(base, model=replace(base.model, width=value))
        return replace(base, model=replace(base.model, cutoff=value))
    if kind == "levels":
        levels = int(round(value))
        system = replace(base.system, kind="multilevel", levels=levels)
        return replace(base, system=system)
    if kind == "correlator":
        return base
    raise ConfigError(f"unknown sweep kind {kind!r}")


def _rate_columns(rates: RateSet, traj: Trajectory) -> dict:
    return {
        "relaxation_rate": rates.relaxation_rate,
        "dephasing_rate": rates.dephasing_rate,
        "leakage_rate": rates.leakage_rate,
        "r2_relaxation": rates.r_squared[0],
        "r2_dephasing": rates.r_squared[1],
        "r2_leakage": rates.r_squared[2],
        "max_trace_drift": traj.max_trace_drift,
        "max_hermiticity_defect": traj.max_hermiticity_defect,
        "warnings": "; ".join(rates.warnings),
    }


def evaluate_sweep_point(sweep: SweepSpec, value: float) -> dict:
    """One sweep row; module-level so process pools can pickle it."""
    row = {"parameter": value, "config_hash": "", "status": "ok"}
    try:
        point = _point_scenario(sweep, value)
        row["config_hash"] = point.config_hash()
        if sweep.kind == "correlator":
            f_val = correlator(Correlator(point.model), float(value))
            row.update({"re_f": f_val.real, "im_f": f_val.imag})
        elif sweep.kind in ("rpa-width", "rpa-area"):
            spec = point.system.build()
            result = delta_n_total(spec, point.model, point.state, point.rpa)
            row.update(
                {
                    "n_total": result.n_total,
                    "delta_n": result.delta_n,
                    "ratio": result.ratio,
                    "warnings": "; ".join(result.warnings),
                }
            )
        else:
            traj = run_trajectory(point)
            rates = extract_rates(traj, point.window)
            row.update(_rate_columns(rates, traj))
    except Exception as exc:  # failures stay in-row, sweep continues
        row["status"] = f"error: {exc}"
    return row


def run_sweep(sweep: SweepSpec, threads: int = 1) -> list[dict]:
    """Evaluate every grid point (optionally in a process pool) and
    return rows sorted by the swept parameter."""
    values = list(sweep.grid)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate_sweep_point, [sweep] * len(values), values))
    else:
        rows = [evaluate_sweep_point(sweep, v) for v in values]
    rows.sort(key=lambda r: r["parameter"])
    return rows


def write_sweep_csv(path: str | Path, sweep: SweepSpec, rows: list[dict]) -> None:
    """Write the sweep table plus a metadata sidecar with the base config."""
    path = Path(path)
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            out = []
            for key in columns:
                v = row.get(key, "")
                out.append(_fmt(v) if isinstance(v, float) else str(v))
            writer.writerow(out)
    sidecar = path.with_suffix(path.suffix + ".meta.ini")
    base_text = sweep.base.canonical_text()
    with open(sidecar, "w", newline="") as fh:
        fh.write("; sweep metadata\n")
        fh.write(f"; kind = {sweep.kind}\n")
        fh.write(f"; grid = {' '.join(_fmt(v) for v in sweep.grid)}\n")
        fh.write(f"; base_config_hash = {sweep.base.config_hash()}\n")
        fh.write(base_text)


def spectrum_table(model: SpectralModel, omega_min: float, omega_max: float, points: int):
    """(omega, I(omega)) pairs on a uniform grid."""
    omegas = np.linspace(omega_min, omega_max, points)
    return omegas, np.asarray(evaluate(model, omegas), dtype=float)


def default_spectrum_window(model: SpectralModel) -> tuple[float, float]:
    lo, hi = support(model)
    if isinstance(model, Rectangular):
        pad = 0.25 * model.half_width
        return lo - pad, hi + pad
    if isinstance(model, Lorentzian):
        return model.center - 10 * model.width, model.center + 10 * model.width
    return 0.0, 8.0 * model.cutoff
