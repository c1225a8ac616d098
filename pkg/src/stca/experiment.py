"""Monte Carlo experiment drivers and CSV artifact writers.

Every run is determined by (config, seed): trial t draws from
default_rng((seed, t)), and the writers format floats with fixed
precision, so identical inputs give byte-identical files.

Weights are always designed from presumed (nominal) knowledge and
judged against the simulated truth. With [errors] active the truth
shifts while the design does not, which is the stale-weight situation
the robust method exists for.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import ScenarioConfig, aligned_config
from .covariance import (CovarianceMatrix, analytic_covariance, dominant_count,
                         eig_descending, sample_covariance, split_subspaces)
from .metrics import mvdr_weight, sinr_db
from .params import RadarParams
from .pattern_control import (ControlState, mainlobe_region, null_region,
                              rjns_weight, robust_null_regions,
                              shape_transmit_weight)
from .sampling import NhssResult, locate_target
from .scene import ErrorInjection, SceneError, _resolve, synthesize_cube
from .steering import receive_steering, spatial_frequencies, virtual_steering
from .suppression import BeamWeight, apply_weight, nsjm_weight, output_profile_db

SWEEP_METHODS = ("mvdr", "nsjm", "nsjm_direct", "rjns")


@dataclass(frozen=True)
class DetectionTrial:
    trial: int
    detected_bin: int  # -1 when no target was declared
    jump_step: int     # cumulative step that jumped; 0 when none did
    peak_correlation: float


@dataclass(frozen=True)
class SinrPoint:
    snr_db: float
    method: str
    mean_sinr_db: float
    std_sinr_db: float
    trials: int


@dataclass(frozen=True)
class SuppressionRun:
    method: str
    weight: BeamWeight
    nhss: NhssResult | None
    filtered: np.ndarray
    profile_db: np.ndarray
    sinr_db: float
    control: ControlState | None


def _require_target(config: ScenarioConfig):
    if config.target is None:
        raise SceneError("scenario has no [target] section")
    return config.target


def presumed_target_steering(config: ScenarioConfig):
    """Steering vector and spatial frequencies at the nominal target."""
    target = _require_target(config)
    angle = np.deg2rad(target.angle_deg)
    return (virtual_steering(config.params, target.range_m, angle),
            spatial_frequencies(config.params, target.range_m, angle))


def true_interference_covariance(params: RadarParams, jammers,
                                 errors: ErrorInjection | None = None,
                                 noise_power: float = 1.0) -> CovarianceMatrix:
    """Analytic jammer-plus-noise covariance at the true positions."""
    errors = errors if errors is not None else ErrorInjection()
    vectors, powers = [], []
    for jam in jammers:
        range_m = jam.range_m + errors.range_bins * params.range_bin_m
        angle = np.deg2rad(jam.angle_deg + errors.doa_deg)
        vectors.append(virtual_steering(params, range_m, angle))
        powers.append(10.0 ** (jam.jnr_db / 10.0))
    if not vectors:
        eye = noise_power * np.eye(params.virtual_size, dtype=np.complex128)
        return CovarianceMatrix(values=eye, sample_count=0, kind="analytic")
    return analytic_covariance(vectors, powers, noise_power)


def estimate_clean_incm(cube, target_steering, thresholds):
    """Full pipeline from echo to a split training-set eigensystem.

    Returns (eigen_split, nhss). The rank split is one past the jammer
    count, taking each non-target segment as one jammer.
    """
    flat = cube.snapshots.reshape(-1, cube.snapshots.shape[2])
    eigen_full = eig_descending(sample_covariance(flat))
    nhss = locate_target(cube, eigen_full, target_steering, thresholds)
    if nhss.training_samples.shape[0] == 0:
        raise SceneError("no training samples: the echo produced no segments")
    incm = sample_covariance(nhss.training_samples, kind="training")
    jammer_count = len(nhss.segments) - (1 if nhss.target_present else 0)
    eigen = split_subspaces(eig_descending(incm), jammer_count + 1)
    return eigen, nhss


def run_detection_trials(config: ScenarioConfig, seed: int = 0, trials: int = 100,
                         dtype=np.complex64) -> list[DetectionTrial]:
    """Monte Carlo detection: synthesize, segment, locate, record."""
    params = config.params
    steering, _ = presumed_target_steering(config)
    rows = []
    for trial in range(trials):
        cube = synthesize_cube(params, config.target, config.jammers, config.errors,
                               seed=(seed, trial), dtype=dtype)
        flat = cube.snapshots.reshape(-1, params.virtual_size)
        eigen_full = eig_descending(sample_covariance(flat))
        result = locate_target(cube, eigen_full, steering, config.thresholds)
        rows.append(DetectionTrial(
            trial=trial,
            detected_bin=result.target_range_bin if result.target_present else -1,
            jump_step=result.target_segment_index or 0,
            peak_correlation=result.report.peak_correlation,
        ))
    return rows


def detection_success_rate(rows, expected_bin: int) -> float:
    if not rows:
        return 0.0
    hits = sum(1 for r in rows if r.detected_bin == expected_bin)
    return hits / len(rows)


def control_regions(config: ScenarioConfig, reference_f_t: float):
    """Mainlobe plus configured null regions for the transmit solver."""
    regions = [mainlobe_region(reference_f_t, config.mainlobe.halfwidth,
                               config.mainlobe.ripple_db)]
    for spec in config.null_regions:
        regions.append(null_region(spec.center, spec.halfwidth, spec.depth_db))
    return regions


def run_suppression(config: ScenarioConfig, seed: int = 0, method: str = "nsjm",
                    dtype=np.complex64) -> SuppressionRun:
    """One full pipeline pass: synthesize, select, weight, filter, score."""
    params = config.params
    target = _require_target(config)
    steering, freqs = presumed_target_steering(config)
    presumed = (target.range_m, target.angle_deg)
    cube = synthesize_cube(params, target, config.jammers, config.errors,
                           seed=seed, dtype=dtype)
    nhss = None
    control = None
    if method == "mvdr":
        vectors = [virtual_steering(params, j.range_m, np.deg2rad(j.angle_deg))
                   for j in config.jammers]
        powers = [10.0 ** (j.jnr_db / 10.0) for j in config.jammers]
        if vectors:
            incm = analytic_covariance(vectors, powers, 1.0)
        else:
            incm = np.eye(params.virtual_size, dtype=np.complex128)
        weight = mvdr_weight(incm, steering, presumed_target=presumed)
    elif method in ("nsjm", "rjns"):
        eigen_incm, nhss = estimate_clean_incm(cube, steering, config.thresholds)
        if method == "nsjm":
            weight = nsjm_weight(eigen_incm, steering, presumed_target=presumed)
        else:
            control = shape_transmit_weight(
                params.num_tx, freqs.transmit, control_regions(config, freqs.transmit),
                grid_step=config.solver.grid_step, max_iter=config.solver.max_iter)
            receive = receive_steering(params, np.deg2rad(target.angle_deg))
            weight = rjns_weight(control.weight, receive, eigen_incm, steering,
                                 presumed_target=presumed)
    else:
        raise ValueError(f"unknown suppression method '{method}'")
    filtered = apply_weight(weight, cube)
    profile = output_profile_db(filtered)
    r_true = true_interference_covariance(params, config.jammers, config.errors)
    score = sinr_db(weight, steering, r_true, 10.0 ** (target.snr_db / 10.0))
    return SuppressionRun(method=method, weight=weight, nhss=nhss, filtered=filtered,
                          profile_db=profile, sinr_db=score, control=control)


def _complex_noise(rng, shape, power: float) -> np.ndarray:
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def training_rows(params: RadarParams, jammers, rng,
                  target=None, noise_power: float = 1.0) -> np.ndarray:
    """Snapshot rows a sample selector would hand the INCM estimator.

    One row per (pulse, occupied bin) for each component, plus noise.
    Passing the target emulates contaminated selection; leaving it None
    gives the clean set. Positions are the nominal ones: this is what
    the estimation stage saw, not necessarily what is out there now.
    """
    comps = []
    for i, jam in enumerate(jammers):
        comps.append(_resolve(params, f"jammer {i + 1}", "false_target",
                              jam.angle_deg, jam.range_m, jam.jnr_db, jam.range_bin))
    if target is not None:
        comps.append(_resolve(params, "target", "target", target.angle_deg,
                              target.range_m, target.snr_db, target.range_bin))
    if not comps:
        raise SceneError("no components to train on")
    blocks = []
    for comp in comps:
        count = params.num_pulses * comp.num_bins
        rows = _complex_noise(rng, (count, params.virtual_size), noise_power)
        rows += comp.amplitude * comp.steering
        blocks.append(rows)
    return np.concatenate(blocks, axis=0)


def _clean_split(params: RadarParams, jammers, rng):
    rows = training_rows(params, jammers, rng)
    eigen = eig_descending(sample_covariance(rows, kind="training"))
    return split_subspaces(eigen, len(jammers) + 1)


def _contaminated_split(params: RadarParams, jammers, target, snr_db: float, rng):
    spec = replace(target, snr_db=snr_db)
    rows = training_rows(params, jammers, rng, target=spec)
    eigen = eig_descending(sample_covariance(rows, kind="full_echo"))
    return split_subspaces(eigen, dominant_count(eigen.eigenvalues) + 1)


def run_sinr_sweep(config: ScenarioConfig, seed: int = 0, trials: int | None = None,
                   methods=SWEEP_METHODS) -> list[SinrPoint]:
    """Mean/std output SINR per method over the configured SNR grid.

    mvdr: analytic INCM at the presumed jammer positions (the optimum;
    trial-independent, so its std is zero). nsjm: estimated clean INCM
    from target-free training rows. nsjm_direct: the same rows with the
    target left in and the subspace split guessed from the eigenvalue
    spread, which self-nulls once the target turns dominant. rjns:
    shaped transmit weight composed with the clean noise subspace.
    """
    params = config.params
    target = _require_target(config)
    steering, freqs = presumed_target_steering(config)
    trials = config.sweep.trials if trials is None else trials
    sweep = config.sweep
    snr_grid = np.arange(sweep.snr_start_db, sweep.snr_stop_db + sweep.snr_step_db / 2.0,
                         sweep.snr_step_db)
    r_true = true_interference_covariance(params, config.jammers, config.errors)

    unknown = set(methods) - set(SWEEP_METHODS)
    if unknown:
        raise ValueError(f"unknown sweep method(s): {', '.join(sorted(unknown))}")

    # SNR-independent weights: one per trial (or one overall for mvdr).
    fixed_weights: dict[str, list[BeamWeight]] = {}
    if "mvdr" in methods:
        vectors = [virtual_steering(params, j.range_m, np.deg2rad(j.angle_deg))
                   for j in config.jammers]
        powers = [10.0 ** (j.jnr_db / 10.0) for j in config.jammers]
        incm = (analytic_covariance(vectors, powers, 1.0) if vectors
                else np.eye(params.virtual_size, dtype=np.complex128))
        fixed_weights["mvdr"] = [mvdr_weight(incm, steering)]
    if "nsjm" in methods:
        fixed_weights["nsjm"] = [
            nsjm_weight(_clean_split(params, config.jammers,
                                     np.random.default_rng((seed, t))), steering)
            for t in range(trials)]
    if "rjns" in methods:
        state = shape_transmit_weight(
            params.num_tx, freqs.transmit, control_regions(config, freqs.transmit),
            grid_step=config.solver.grid_step, max_iter=config.solver.max_iter)
        receive = receive_steering(params, np.deg2rad(target.angle_deg))
        fixed_weights["rjns"] = [
            rjns_weight(state.weight, receive,
                        _clean_split(params, config.jammers,
                                     np.random.default_rng((seed, 1, t))), steering)
            for t in range(trials)]

    points = []
    for snr in snr_grid:
        signal_power = 10.0 ** (snr / 10.0)
        for method in methods:
            if method == "nsjm_direct":
                scores = []
                for t in range(trials):
                    rng = np.random.default_rng((seed, 2, t))
                    split = _contaminated_split(params, config.jammers, target, snr, rng)
                    w = nsjm_weight(split, steering)
                    scores.append(sinr_db(w, steering, r_true, signal_power))
            else:
                scores = [sinr_db(w, steering, r_true, signal_power)
                          for w in fixed_weights[method]]
            points.append(SinrPoint(
                snr_db=float(snr), method=method,
                mean_sinr_db=float(np.mean(scores)),
                std_sinr_db=float(np.std(scores)),
                trials=len(scores)))
    return points


def robustness_comparison(seed: int = 0, trials: int = 25) -> dict:
    """Stale-weight robustness study: fixed two-jammer scenario.

    Weights are trained on the nominal scene; the truth then shifts by
    one range bin and one degree of DOA. The plain noise-subspace weight
    carries razor-thin nulls that the shifted jammers walk out of, while
    the shaped weight's widened one-sided nulls still cover them.

    Two jammers, not three: each widened null spends several transmit
    degrees of freedom, and the third jammer's region folds across the
    frequency wrap, splitting into two and pushing the constraint count
    past what 16 transmit elements can satisfy.
    """
    config = aligned_config()
    config = replace(config, jammers=config.jammers[:2],
                     errors=ErrorInjection(range_bins=1, doa_deg=1.0))
    params = config.params
    target = _require_target(config)
    steering, freqs = presumed_target_steering(config)

    regions = [mainlobe_region(freqs.transmit, config.mainlobe.halfwidth,
                               config.mainlobe.ripple_db)]
    for jam in config.jammers:
        jam_f_t = spatial_frequencies(params, jam.range_m, np.deg2rad(jam.angle_deg))
        regions.extend(robust_null_regions(
            params, jam_f_t.transmit, late_bins=config.errors.range_bins,
            doa_deg=config.errors.doa_deg))
    control = shape_transmit_weight(params.num_tx, freqs.transmit, regions,
                                    grid_step=config.solver.grid_step,
                                    max_iter=config.solver.max_iter)
    receive = receive_steering(params, np.deg2rad(target.angle_deg))

    r_nominal = true_interference_covariance(params, config.jammers, None)
    r_errored = true_interference_covariance(params, config.jammers, config.errors)
    signal_power = 10.0 ** (target.snr_db / 10.0)

    scores = {"nsjm": {"nominal": [], "errored": []},
              "rjns": {"nominal": [], "errored": []}}
    for t in range(trials):
        split = _clean_split(params, config.jammers, np.random.default_rng((seed, t)))
        weights = {
            "nsjm": nsjm_weight(split, steering),
            "rjns": rjns_weight(control.weight, receive, split, steering),
        }
        for name, w in weights.items():
            scores[name]["nominal"].append(sinr_db(w, steering, r_nominal, signal_power))
            scores[name]["errored"].append(sinr_db(w, steering, r_errored, signal_power))

    out = {"control": control, "trials": trials}
    for name in ("nsjm", "rjns"):
        nominal = float(np.mean(scores[name]["nominal"]))
        errored = float(np.mean(scores[name]["errored"]))
        out[name] = {"nominal_sinr_db": nominal, "errored_sinr_db": errored,
                     "degradation_db": nominal - errored}
    return out


def _write_lines(path, header: str, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(header + "\n")
        for line in lines:
            handle.write(line + "\n")


def write_detection_csv(path, rows) -> None:
    _write_lines(path, "trial,detected_bin,jump_step,peak_correlation",
                 (f"{r.trial},{r.detected_bin},{r.jump_step},{r.peak_correlation:.6f}"
                  for r in rows))


def write_sinr_csv(path, points) -> None:
    _write_lines(path, "snr_db,method,mean_sinr_db,std",
                 (f"{p.snr_db:.4f},{p.method},{p.mean_sinr_db:.4f},{p.std_sinr_db:.4f}"
                  for p in points))


def write_pattern_csv(path, grid) -> None:
    lines = (f"{ft:.6f},{fr:.6f},{grid.values_db[i, j]:.4f}"
             for i, fr in enumerate(grid.f_receive)
             for j, ft in enumerate(grid.f_transmit))
    _write_lines(path, "f_T,f_R,db", lines)


def write_profile_csv(path, profile_db) -> None:
    _write_lines(path, "bin,mag_db",
                 (f"{i},{v:.4f}" for i, v in enumerate(profile_db)))
