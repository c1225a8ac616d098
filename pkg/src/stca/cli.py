"""Command line front end.

Subcommands mirror the library pipeline: simulate, detect, suppress,
pattern, sinr-sweep, validate-waveform. Exit codes: 0 success, 1
configuration problem, 2 numeric failure, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, ScenarioConfig, load_config
from .covariance import analytic_covariance, eig_descending, sample_covariance
from .experiment import (detection_success_rate, presumed_target_steering,
                         run_detection_trials, run_sinr_sweep, run_suppression,
                         write_detection_csv, write_pattern_csv, write_profile_csv,
                         write_sinr_csv)
from .metrics import capon_2d, mvdr_weight, pattern_2d
from .params import RadarParams
from .sampling import segment_echo
from .scene import SceneError, synthesize_cube
from .steering import receive_steering, virtual_steering
from .suppression import BeamWeight, DegenerateGeometryError
from .waveform import validate_matched_filter

PATTERN_GRID_STEP = 0.005
RESIDUAL_LIMIT_RAD = 1e-2


class _Parser(argparse.ArgumentParser):
    # Argument mistakes are configuration mistakes: exit 1, not
    # argparse's default 2, which is reserved for numeric failures.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stca", description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="PATH",
                        help="scenario TOML; omit for the built-in reference scenario")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument("--trials", type=int, default=None,
                        help="Monte Carlo trials (default: per subcommand)")
    parser.add_argument("--out-dir", metavar="DIR", default=".",
                        help="directory for CSV artifacts")
    parser.add_argument("--traditional-mimo", action="store_true",
                        help="zero the inter-element transmit delay")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", help="synthesize one echo and dump its range profile")
    sub.add_parser("detect", help="Monte Carlo target localization trials")
    p = sub.add_parser("suppress", help="run one suppression pipeline pass")
    p.add_argument("--method", choices=("nsjm", "rjns", "mvdr"), default="nsjm")
    p = sub.add_parser("pattern", help="export a transmit-receive pattern grid")
    p.add_argument("--weight", choices=("quiescent", "nsjm", "rjns", "mvdr",
                                        "mrbc", "capon"), default="nsjm")
    sub.add_parser("sinr-sweep", help="output SINR versus SNR for all methods")
    sub.add_parser("validate-waveform", help="check the pulse-level channel model")
    return parser


def _frequency_grid() -> np.ndarray:
    return np.arange(-0.5, 0.5, PATTERN_GRID_STEP)


def _cmd_simulate(args, config: ScenarioConfig, out: Path) -> int:
    cube = synthesize_cube(config.params, config.target, config.jammers,
                           config.errors, seed=args.seed, dtype=np.complex64)
    write_profile_csv(out / "profile_raw.csv", cube.power_profile_db())
    print(f"wrote {out / 'profile_raw.csv'}")
    for comp in cube.components:
        print(f"  {comp.label}: {comp.range_m / 1e3:.3f} km, {comp.angle_deg:.2f} deg, "
              f"bins [{comp.bin_span[0]}, {comp.bin_span[1]}), "
              f"f_T {comp.freqs.transmit:+.4f}")
    segments = segment_echo(cube, config.thresholds.sampling_db).segments
    spans = ", ".join(f"[{s.start_bin}, {s.stop_bin})" for s in segments)
    print(f"  segments above the sampling threshold: {spans or 'none'}")
    return 0


def _cmd_detect(args, config: ScenarioConfig, out: Path) -> int:
    trials = args.trials if args.trials is not None else 100
    rows = run_detection_trials(config, seed=args.seed, trials=trials)
    write_detection_csv(out / "detection.csv", rows)
    print(f"wrote {out / 'detection.csv'} ({trials} trials)")
    detected = [r.detected_bin for r in rows if r.detected_bin >= 0]
    if detected:
        bins, counts = np.unique(detected, return_counts=True)
        mode = int(bins[np.argmax(counts)])
        print(f"  declared a target in {len(detected)}/{trials} trials; "
              f"modal bin {mode}")
        if config.target is not None and config.target.range_bin is not None:
            rate = detection_success_rate(rows, config.target.range_bin)
            print(f"  expected bin {config.target.range_bin} found in "
                  f"{100.0 * rate:.1f}% of trials")
    else:
        print("  no trial declared a target")
    return 0


def _cmd_suppress(args, config: ScenarioConfig, out: Path) -> int:
    run = run_suppression(config, seed=args.seed, method=args.method)
    write_profile_csv(out / f"profile_{args.method}.csv", run.profile_db)
    print(f"wrote {out / f'profile_{args.method}.csv'}")
    if run.nhss is not None:
        if run.nhss.target_present:
            print(f"  target segment at bin {run.nhss.target_range_bin} "
                  f"(step {run.nhss.target_segment_index})")
        else:
            print("  no target segment declared; trained on all segments")
    print(f"  output SINR {run.sinr_db:.2f} dB")
    if run.control is not None and not run.control.converged:
        print("  transmit pattern solver did not converge", file=sys.stderr)
        return 3
    return 0


def _cmd_pattern(args, config: ScenarioConfig, out: Path) -> int:
    params = config.params
    grid = _frequency_grid()
    steering, freqs = presumed_target_steering(config)
    if args.weight == "capon":
        cube = synthesize_cube(params, config.target, config.jammers, config.errors,
                               seed=args.seed, dtype=np.complex64)
        cov = sample_covariance(cube.snapshots.reshape(-1, params.virtual_size))
        result = capon_2d(cov, grid, grid, params.num_tx, params.num_rx)
    else:
        if args.weight == "quiescent":
            weight = BeamWeight(values=steering.copy(), provenance="baseline")
        elif args.weight == "mvdr":
            vectors = [virtual_steering(params, j.range_m, np.deg2rad(j.angle_deg))
                       for j in config.jammers]
            powers = [10.0 ** (j.jnr_db / 10.0) for j in config.jammers]
            incm = (analytic_covariance(vectors, powers, 1.0) if vectors
                    else np.eye(params.virtual_size, dtype=np.complex128))
            weight = mvdr_weight(incm, steering)
        elif args.weight == "mrbc":
            from .experiment import control_regions
            from .pattern_control import shape_transmit_weight
            state = shape_transmit_weight(
                params.num_tx, freqs.transmit, control_regions(config, freqs.transmit),
                grid_step=config.solver.grid_step, max_iter=config.solver.max_iter)
            target = config.target
            receive = receive_steering(params, np.deg2rad(target.angle_deg))
            weight = BeamWeight(values=np.kron(receive, state.weight), provenance="mrbc")
            if not state.converged:
                write_pattern_csv(out / "pattern_mrbc.csv",
                                  pattern_2d(weight, grid, grid,
                                             params.num_tx, params.num_rx))
                print("transmit pattern solver did not converge", file=sys.stderr)
                return 3
        else:
            run = run_suppression(config, seed=args.seed, method=args.weight)
            weight = run.weight
            if run.control is not None and not run.control.converged:
                print("transmit pattern solver did not converge", file=sys.stderr)
                return 3
        result = pattern_2d(weight, grid, grid, params.num_tx, params.num_rx)
    path = out / f"pattern_{args.weight}.csv"
    write_pattern_csv(path, result)
    print(f"wrote {path}")
    return 0


def _cmd_sweep(args, config: ScenarioConfig, out: Path) -> int:
    points = run_sinr_sweep(config, seed=args.seed, trials=args.trials)
    write_sinr_csv(out / "sinr_sweep.csv", points)
    print(f"wrote {out / 'sinr_sweep.csv'}")
    methods = sorted({p.method for p in points})
    top = max(p.snr_db for p in points)
    for method in methods:
        at_top = next(p for p in points if p.method == method and p.snr_db == top)
        print(f"  {method}: {at_top.mean_sinr_db:.2f} dB mean SINR at "
              f"{top:.0f} dB SNR (std {at_top.std_sinr_db:.2f})")
    return 0


def _cmd_validate(args, config: ScenarioConfig, out: Path) -> int:
    target = config.target
    range_m = target.range_m if target is not None else 43.0e3
    angle = np.deg2rad(target.angle_deg) if target is not None else 0.0
    residual = validate_matched_filter(config.params, range_m, angle)
    print(f"worst matched-filter phase residual: {residual:.3e} rad "
          f"(limit {RESIDUAL_LIMIT_RAD:.0e})")
    if not residual < RESIDUAL_LIMIT_RAD:
        print("channel model validation failed", file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "detect": _cmd_detect,
    "suppress": _cmd_suppress,
    "pattern": _cmd_pattern,
    "sinr-sweep": _cmd_sweep,
    "validate-waveform": _cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.traditional_mimo:
            config = replace(config, params=config.params.with_element_delay(0.0))
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](args, config, out)
    except (ConfigError, SceneError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateGeometryError, np.linalg.LinAlgError, ValueError,
            FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
