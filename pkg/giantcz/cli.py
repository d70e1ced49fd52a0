"""Command-line interface for giantcz."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .config import RunConfig, config_from_preset, default_output_dir, load_config
from .constants import (
    BAND_KIND,
    DF_SCAN_KIND,
    DYNAMICS_KIND,
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    FIDELITY_KIND,
    HAMILTONIAN_KIND,
    PRESET_IDS,
    SWEEP_KIND,
)
from .errors import ConfigurationError, GiantCZError
from .hilbert import CouplingPoint
from .interference import (
    df_general,
    df_three_point,
    df_two_point,
    df_zeta_scan,
    dispersion_table,
    solutions_frame,
)
from .operators import build_effective_hamiltonian, build_hamiltonian
from .protocol import (
    RevivalTracker,
    calibrate_omega2,
    calibrate_placement,
    run_cz,
    run_dynamics,
    sweep_g,
)
from .reporting import (
    dumps_document,
    fidelity_summary,
    format_table,
    frame_records,
    save_gnuplot,
    save_hamiltonian_dump,
    save_json,
    save_table,
)
from .templates import (
    build_band_script,
    build_df_scan_script,
    build_dynamics_script,
    build_fidelity_script,
    build_sweep_script,
)

logger = logging.getLogger("giantcz")


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    )


def _parse_points(text: str) -> List[CouplingPoint]:
    """Parse ``site:strength`` pairs separated by commas (1-based sites)."""
    points = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        site, _, strength = item.partition(":")
        try:
            index = int(site)
            points.append(CouplingPoint(index - 1, float(strength) if strength else 1.0))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid coupling point '{item}'") from None
        if index < 1:
            raise argparse.ArgumentTypeError(f"coupling site {index} in '{item}' is below 1")
    return points


def _parse_float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list '{text}'") from None


# Commands ------------------------------------------------------------------


def cmd_df(args: argparse.Namespace) -> int:
    """Decoherence-free points of a coupling geometry."""
    if args.two_point:
        solutions = df_two_point(args.dx, include_band_edges=args.include_band_edges)
        geometry = {"geometry": "two_point", "dx": args.dx}
    elif args.three_point:
        solutions = df_three_point(args.dx, args.zeta, include_band_edges=args.include_band_edges)
        geometry = {"geometry": "three_point", "dx": args.dx, "zeta": args.zeta}
    else:
        solutions = df_general(args.points, include_band_edges=args.include_band_edges)
        geometry = {
            "geometry": "custom",
            "points": [[p.site + 1, p.strength] for p in args.points],
        }

    table = solutions_frame(solutions)
    if args.band_csv:
        directory = args.output_dir or default_output_dir()
        prefix = args.prefix or "df"
        band_path = save_table(dispersion_table(), directory, prefix, BAND_KIND)
        df_path = save_table(table[["k_DF", "omega_DF_over_J"]], directory, prefix, "df")
        save_gnuplot(
            build_band_script(band_path.name, df_path.name, "cosine band and DF points"),
            directory,
            prefix,
            BAND_KIND,
        )

    if args.json:
        print(dumps_document("df", {**geometry, "solutions": [s.to_dict() for s in solutions]}))
    else:
        print(format_table(table))
    return EXIT_OK


def cmd_df_scan(args: argparse.Namespace) -> int:
    zetas = np.round(np.arange(args.zeta_min, args.zeta_max + 0.5 * args.zeta_step, args.zeta_step), 10)
    table = df_zeta_scan(args.dx, zetas)
    directory = args.output_dir or default_output_dir()
    prefix = args.prefix or f"dx{args.dx}"
    path = save_table(table, directory, prefix, DF_SCAN_KIND)
    save_gnuplot(build_df_scan_script(path.name, f"three-point DF frequencies, dx={args.dx}"),
                 directory, prefix, DF_SCAN_KIND)
    if args.json:
        print(dumps_document(DF_SCAN_KIND, {"dx": args.dx, "rows": frame_records(table)}))
    else:
        print(format_table(table))
    return EXIT_OK


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    if args.config is not None and args.preset is not None:
        raise ConfigurationError("give either a configuration file or --preset, not both")
    if args.preset is not None:
        config = config_from_preset(args.preset)
    elif args.config is not None:
        config = load_config(args.config)
    else:
        raise ConfigurationError("a configuration file or --preset is required")

    if args.output_dir is not None:
        config.output.directory = Path(args.output_dir)
    if args.prefix is not None:
        config.output.prefix = args.prefix
    if args.json:
        config.output.json = True
    if args.no_gnuplot:
        config.output.gnuplot = False
    return config


def cmd_dynamics(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    frame = run_dynamics(config.gate, config.solver)
    out = config.output
    path = save_table(frame, out.directory, config.prefix, DYNAMICS_KIND)
    if out.gnuplot:
        save_gnuplot(build_dynamics_script(path.name, config.label), out.directory, config.prefix, DYNAMICS_KIND)

    tracker = RevivalTracker()
    for t, value in zip(frame["t_J"], frame["n11"]):
        if tracker.update(float(t), float(value)):
            break
    tracker.finish()
    summary = {
        "n20_max": float(frame["n20"].max()),
        "n11_revival": tracker.revival()[1] if tracker.found else None,
        "t_revival": tracker.revival()[0] if tracker.found else None,
        "norm_final": float(frame["norm"].iloc[-1]),
        "csv": path,
    }
    if out.json:
        save_json(DYNAMICS_KIND, summary, out.directory, config.prefix)
        print(dumps_document(DYNAMICS_KIND, summary))
    else:
        revival = (
            f"n11 first revival={summary['n11_revival']:.4f} at tJ={summary['t_revival']:.1f}"
            if tracker.found
            else "no n11 revival"
        )
        print(f"{revival}; n20 max={summary['n20_max']:.4f}; wrote {path}")
    return EXIT_OK


def cmd_fidelity(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    frame, result = run_cz(config.gate, config.solver)
    out = config.output
    path = save_table(frame, out.directory, config.prefix, FIDELITY_KIND)
    if out.gnuplot:
        save_gnuplot(
            build_fidelity_script(path.name, config.label, result.gate_time),
            out.directory,
            config.prefix,
            FIDELITY_KIND,
        )
    if out.json:
        payload = {**result.to_dict(), "csv": path}
        save_json(FIDELITY_KIND, payload, out.directory, config.prefix)
        print(dumps_document(FIDELITY_KIND, payload))
    else:
        print(fidelity_summary(result, config.hopping_MHz))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    sweep = config.sweep
    g_values = args.g_list if args.g_list else list(sweep.g_values)
    table = sweep_g(
        config.gate,
        sorted(g_values),
        qubit_decay=sweep.qubit_decay,
        cavity_decay=sweep.cavity_decay,
        solver=config.solver,
        calibrate=sweep.calibrate and not args.no_calibrate,
        search_halfwidth=sweep.search_halfwidth,
    )
    out = config.output
    path = save_table(table, out.directory, config.prefix, SWEEP_KIND)
    if out.gnuplot:
        save_gnuplot(build_sweep_script(path.name, config.label), out.directory, config.prefix, SWEEP_KIND)
    if out.json:
        payload = {"rows": frame_records(table), "csv": path}
        save_json(SWEEP_KIND, payload, out.directory, config.prefix)
        print(dumps_document(SWEEP_KIND, payload))
    else:
        print(format_table(table))

    failures = int((table["error"].fillna("") != "").sum())
    if failures == len(table):
        logger.error("All %d sweep points failed", failures)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    if args.placement:
        name, offset, score = calibrate_placement(config.gate, solver=config.solver)
        payload: Dict[str, object] = {"placement": name, "atom2_offset": offset, "contrast": score}
        text = f"best placement={name} (atom 2 offset {offset:+d}), revival contrast={score:.4f}"
    else:
        omega2 = calibrate_omega2(config.gate, args.halfwidth, config.solver)
        payload = {
            "omega2_over_J": omega2,
            "resonance_over_J": config.gate.resonance,
            "lamb_shift_over_J": omega2 - config.gate.resonance,
        }
        text = (
            f"omega2/J={omega2:.4f} (omega1+alpha1={config.gate.resonance:.4f}, "
            f"shift {omega2 - config.gate.resonance:+.4f})"
        )
    print(dumps_document("calibration", payload) if config.output.json else text)
    return EXIT_OK


def cmd_hamiltonian(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    spec = config.gate.system_spec()
    builder = build_effective_hamiltonian if args.effective else build_hamiltonian
    operator = builder(spec, args.sector)
    kind = f"{HAMILTONIAN_KIND}_s{args.sector}"
    path = save_hamiltonian_dump(operator, config.output.directory, config.prefix, kind)
    print(f"sector {args.sector}: dimension={operator.dimension} nnz={operator.nnz}; wrote {path}")
    return EXIT_OK


# Parser ----------------------------------------------------------------------


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output-dir", type=Path, help="Output directory (default: $GIANTCZ_OUTPUT_DIR or results)")
    parser.add_argument("--prefix", help="File name prefix for generated files")
    parser.add_argument("--json", action="store_true", help="Emit a JSON document")


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", nargs="?", type=Path, help="YAML configuration file")
    parser.add_argument("--preset", choices=PRESET_IDS, help="Start from a published parameter set")
    _add_output_options(parser)
    parser.add_argument("--no-gnuplot", action="store_true", help="Do not write gnuplot scripts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="giantcz",
        description="CZ gates between giant atoms in a coupled-cavity array",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    df = sub.add_parser("df", help="Decoherence-free frequencies of a coupling geometry")
    kind = df.add_mutually_exclusive_group(required=True)
    kind.add_argument("--two-point", action="store_true", help="Two equal coupling points")
    kind.add_argument("--three-point", action="store_true", help="Points (g, zeta g, g)")
    kind.add_argument("--points", type=_parse_points, help="Custom points 'site:strength,...' (1-based)")
    df.add_argument("--dx", type=int, default=None, help="Point spacing in sites")
    df.add_argument("--zeta", type=float, default=None, help="Relative strength of the middle point")
    df.add_argument("--include-band-edges", action="store_true", help="Report roots at k=0 or pi")
    df.add_argument("--band-csv", action="store_true", help="Also write the band and DF points as CSV")
    _add_output_options(df)
    df.set_defaults(handler=cmd_df)

    scan = sub.add_parser("df-scan", help="Three-point DF frequencies as a function of zeta")
    scan.add_argument("--dx", type=int, default=2)
    scan.add_argument("--zeta-min", type=float, default=0.0)
    scan.add_argument("--zeta-max", type=float, default=2.0)
    scan.add_argument("--zeta-step", type=float, default=0.01)
    _add_output_options(scan)
    scan.set_defaults(handler=cmd_df_scan)

    dynamics = sub.add_parser("dynamics", help="Populations n11, n20 from |11>")
    _add_run_options(dynamics)
    dynamics.set_defaults(handler=cmd_dynamics)

    fidelity = sub.add_parser("fidelity", help="CZ process fidelity along the evolution")
    _add_run_options(fidelity)
    fidelity.set_defaults(handler=cmd_fidelity)

    sweep = sub.add_parser("sweep", help="Best fidelity and gate time versus g")
    _add_run_options(sweep)
    sweep.add_argument("--g-list", type=_parse_float_list, help="Comma-separated g/J values")
    sweep.add_argument("--no-calibrate", action="store_true", help="Keep omega2 fixed")
    sweep.set_defaults(handler=cmd_sweep)

    calibrate = sub.add_parser("calibrate", help="Lamb-shift calibration of omega2")
    _add_run_options(calibrate)
    calibrate.add_argument("--halfwidth", type=float, default=0.05, help="Search half-width in J")
    calibrate.add_argument("--placement", action="store_true", help="Calibrate the atom placement instead")
    calibrate.set_defaults(handler=cmd_calibrate)

    hamiltonian = sub.add_parser("hamiltonian", help="Dump the sector Hamiltonian as coordinate text")
    _add_run_options(hamiltonian)
    hamiltonian.add_argument("--sector", type=int, choices=(0, 1, 2), default=2)
    hamiltonian.add_argument("--effective", action="store_true", help="Include decay terms")
    hamiltonian.set_defaults(handler=cmd_hamiltonian)

    return parser


def _check_df_arguments(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.command != "df":
        return
    if (args.two_point or args.three_point) and (args.dx is None or args.dx < 1):
        parser.error("--dx must be a positive integer for --two-point/--three-point")
    if args.three_point and (args.zeta is None or args.zeta < 0):
        parser.error("--three-point requires a non-negative --zeta")
    if args.points is not None and len(args.points) < 2:
        parser.error("--points needs at least two coupling points")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code.

    Exit codes: 0 success, 2 usage error, 3 configuration error,
    4 numerical or convergence error.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_df_arguments(parser, args)
    _configure_logging(args.verbose)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except ConfigurationError as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    except GiantCZError as exc:
        logger.error("Numerical error: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
