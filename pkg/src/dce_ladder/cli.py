"""Command line entry point: ``dce-ladder {sweep,spectrum,levels,steady}``.

Precedence: command-line flags > ``--config`` file > built-in defaults.
Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import runs
from .liouvillian import SteadyStateError

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file with [model], [baths], [sweep], [output] sections")
    p.add_argument("--n-max", type=int, help="Fock-space truncation")
    p.add_argument("--rwa", action="store_true", default=None, help="rotating-wave coupling and dissipators")
    p.add_argument("--no-cavity-coupling", action="store_true", default=None, help="set Omega_cav = 0")
    p.add_argument("--two-level", action="store_true", default=None, help="drop the f level")
    p.add_argument("--lamb-shift", action="store_true", default=None, help="include principal-value shifts")
    p.add_argument("--out", help="output directory")
    p.add_argument("--omega-grid", help="spectrum grid start:stop:step (units of omega_cav)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dce-ladder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="intensities and absorption versus drive Rabi frequency")
    _common(sweep)
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--count", type=int)
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--check-convergence", action="store_true", default=None)

    for name, help_ in (
        ("spectrum", "emission spectrum of one channel"),
        ("levels", "dressed-level table"),
        ("steady", "steady-state density matrix and photon distribution"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.add_argument("--omega-eg", type=float, required=True, help="drive Rabi frequency")
        if name == "spectrum":
            p.add_argument("--channel", choices=runs.CHANNELS, default="cav")
        if name == "levels":
            p.add_argument("--ceiling", type=float, help="highest energy to list")
    return parser


def _config(args) -> runs.RunConfig:
    overrides = dict(
        n_max=args.n_max,
        rwa=args.rwa,
        omega_cav_zero=args.no_cavity_coupling,
        two_level=args.two_level,
        lamb_shift=args.lamb_shift,
        out_dir=args.out,
        omega_grid=runs.parse_grid(args.omega_grid) if args.omega_grid else None,
    )
    if args.command == "sweep":
        overrides.update(
            sweep_start=args.start,
            sweep_stop=args.stop,
            sweep_count=args.count,
            workers=args.workers,
            convergence_check=args.check_convergence,
        )
    if args.command == "levels":
        overrides["level_ceiling"] = args.ceiling
    return runs.load_config(args.config, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = _config(args)
    except runs.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "sweep":
            datasets = [runs.run_intensity_sweep(config)]
        elif args.command == "spectrum":
            datasets = [runs.run_spectrum(config, args.omega_eg, args.channel)]
        elif args.command == "levels":
            datasets = [runs.run_levels(config, args.omega_eg)]
        else:
            datasets = list(runs.run_steady(config, args.omega_eg))
    except SteadyStateError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    for ds in datasets:
        path = runs.write_dataset(ds, config.out_dir)
        print(path)
    failed = sum(ds.failed for ds in datasets)
    if failed:
        print(f"{failed} sweep point(s) failed", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
