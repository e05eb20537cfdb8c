"""Command-line front-end.

Subcommands::

    mlsbath evolve           --config CFG --out DIR [--dt DT] [--tmax T]
    mlsbath rates            --config CFG --out DIR [--dt DT] [--tmax T]
    mlsbath sweep            --config CFG --out DIR [--threads N]
    mlsbath correlator-table --config CFG --out DIR [--dt DT] [--tmax T]
    mlsbath spectrum-table   --config CFG --out DIR
    mlsbath rpa              --config CFG --out DIR

All subcommands read the INI configuration documented in
:mod:`mlsbath.harness`, write their tables/JSON into ``--out``, and exit
nonzero with a message on stderr when the configuration is invalid or a
computation fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from .harness import (
    ConfigError,
    default_spectrum_window,
    load_config,
    run_scenario,
    run_sweep,
    run_trajectory,
    spectrum_table,
    write_sweep_csv,
    write_trajectory_csv,
    _fmt,
)
from .rpa import delta_n_total
from .spectra import Correlator, correlator_table


def _add_common(sub: argparse.ArgumentParser, dt_tmax: bool = False) -> None:
    sub.add_argument("--config", required=True, help="configuration file (INI)")
    sub.add_argument("--out", required=True, help="output directory")
    if dt_tmax:
        sub.add_argument("--dt", type=float, default=None, help="override grid step")
        sub.add_argument("--tmax", type=float, default=None, help="override end time")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlsbath",
        description="Zero-temperature multilevel decoherence toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser("evolve", help="integrate one trajectory"), dt_tmax=True)
    _add_common(subs.add_parser("rates", help="integrate and fit decoherence rates"),
                dt_tmax=True)
    sweep = subs.add_parser("sweep", help="run a parameter sweep")
    _add_common(sweep)
    sweep.add_argument("--threads", type=int, default=1, help="worker process cap")
    _add_common(subs.add_parser("correlator-table", help="tabulate the noise correlator"),
                dt_tmax=True)
    _add_common(subs.add_parser("spectrum-table", help="tabulate the spectral density"))
    _add_common(subs.add_parser("rpa", help="total mode-number correction and fluctuation"))
    return parser


def _apply_overrides(scenario, args):
    evolution = scenario.evolution
    if getattr(args, "dt", None) is not None:
        evolution = replace(evolution, dt=args.dt)
    if getattr(args, "tmax", None) is not None:
        evolution = replace(evolution, t_max=args.tmax)
    return replace(scenario, evolution=evolution)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario, sweep, table = load_config(args.config)
        scenario = _apply_overrides(scenario, args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)

        if args.command == "evolve":
            traj = run_trajectory(scenario)
            write_trajectory_csv(out / "trajectory.csv", traj)
        elif args.command == "rates":
            run_scenario(scenario, out)
        elif args.command == "sweep":
            if sweep is None:
                raise ConfigError(f"{args.config}: sweep subcommand needs a [sweep] section")
            sweep = replace(sweep, base=scenario)
            rows = run_sweep(sweep, threads=args.threads)
            write_sweep_csv(out / "sweep.csv", sweep, rows)
        elif args.command == "correlator-table":
            t_max = table.get("t_max", scenario.evolution.t_max)
            dt = table.get("dt", scenario.evolution.dt)
            values = correlator_table(Correlator(scenario.model), t_max, dt)
            with open(out / "correlator.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["tau", "re_f", "im_f"])
                for k, z in enumerate(values):
                    writer.writerow([_fmt(k * dt), _fmt(z.real), _fmt(z.imag)])
        elif args.command == "spectrum-table":
            lo, hi = default_spectrum_window(scenario.model)
            lo = table.get("omega_min", lo)
            hi = table.get("omega_max", hi)
            points = table.get("points", 501)
            omegas, values = spectrum_table(scenario.model, lo, hi, points)
            with open(out / "spectrum.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["omega", "intensity"])
                for w, v in zip(omegas, values):
                    writer.writerow([_fmt(w), _fmt(v)])
        elif args.command == "rpa":
            spec = scenario.system.build()
            result = delta_n_total(spec, scenario.model, scenario.state, scenario.rpa)
            payload = {
                "n_total": result.n_total,
                "delta_n": result.delta_n,
                "ratio": result.ratio,
                "warnings": list(result.warnings),
                "config_hash": scenario.config_hash(),
            }
            with open(out / "rpa.json", "w", newline="") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
