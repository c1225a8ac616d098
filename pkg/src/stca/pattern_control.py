"""Iterative transmit beampattern shaping and the robust composite weight.

A razor-thin adaptive null dies the moment the jammer moves one range
quantum, so the robust path shapes the transmit weight deterministically:
keep a flat-top mainlobe on the presumed target's transmit frequency and
hold every anticipated jamming interval below a depth target.  The shaping
loop enforces one constraint per control region and iterates:

1. evaluate the normalized response L(f) = w^H a(f) / w^H a(f0) on a grid,
2. in each region pick the point deviating worst from its magnitude target
   (the mainlobe penalizes ||L| - target| both ways, nulls only excess),
3. constrain L at those points to target * exp(j*phase), where phase is
   the response's current phase there (the minimum-distortion choice:
   only the magnitude is corrected, so the rest of the pattern moves as
   little as possible),
4. solve the linear system coupling the correction coefficients of all
   points and add the combined correction to the weight.

Constraints hold exactly after every update; iteration is needed because
fixing the worst points lifts their neighbours inside wide regions.  Two
stabilizers matter in practice: coincident control points from adjacent
regions are deduplicated before the solve (they would make it singular),
and the weight is rescaled to |w^H a(f0)| = M each step, which leaves the
normalized response untouched but stops the raw scale from drifting.

Wide regions converge much faster when pre-split into subregions, because
each subregion then contributes its own constraint every iteration instead
of the whole region chasing a single worst point.  The right granularity
depends on the geometry, so shape_transmit_weight retries a fixed
subdivision schedule and returns the first converged state.  The budget is
hard either way: an M-element weight supports at most M-1 constraints.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .covariance import EigenSplit
from .params import SPEED_OF_LIGHT, RadarParams
from .steering import uniform_phase_vector, wrap_frequency
from .suppression import BeamWeight, DegenerateGeometryError, unit_gain


@dataclass(frozen=True)
class ControlRegion:
    """One controlled interval of transmit spatial frequency.

    target_magnitude is the desired |L| (1.0 for the mainlobe, small for
    nulls); deviation_threshold the convergence tolerance in the same
    linear units.  Intervals are closed and must stay inside [-0.5, 0.5).
    """

    kind: str
    lo: float
    hi: float
    target_magnitude: float
    deviation_threshold: float

    def __post_init__(self):
        if self.kind not in ("mainlobe", "null"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not -0.5 <= self.lo < self.hi < 0.5:
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")
        if self.target_magnitude < 0 or self.deviation_threshold <= 0:
            raise ValueError("magnitude must be >= 0 and threshold > 0")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def mainlobe_region(center: float, halfwidth: float = 0.015,
                    ripple_db: float = 1.0) -> ControlRegion:
    """Flat-top region; ripple_db bounds the peak-to-peak passband ripple.

    The tolerance band spans the full ripple allowance and its top sits
    just above the reference response (which is 1 by construction), so
    the passband may droop toward the band floor instead of being lifted
    flat to 1. Lifting costs aperture efficiency and with it output
    SINR; riding the lower half of the band is nearly free.
    """
    ratio = 10.0 ** (ripple_db / 20.0)
    top = 1.008
    bottom = top / ratio
    return ControlRegion(
        kind="mainlobe", lo=center - halfwidth, hi=center + halfwidth,
        target_magnitude=(top + bottom) / 2.0,
        deviation_threshold=(top - bottom) / 2.0)


def _null_targets(depth_db: float):
    # Aim 3 dB under the requested depth with the tolerance ceiling at
    # depth - 0.75 dB: a converged grid scan then sits below the
    # requirement with margin for off-grid peaks, while not digging much
    # deeper than asked, which would spend aperture for nothing.
    target = 10.0 ** ((depth_db - 3.0) / 20.0)
    ceiling = 10.0 ** ((depth_db - 0.75) / 20.0)
    return target, ceiling - target


def null_region(center: float, halfwidth: float = 0.02,
                depth_db: float = -50.0) -> ControlRegion:
    """Null region whose converged response stays at or below depth_db."""
    target, threshold = _null_targets(depth_db)
    return ControlRegion(kind="null", lo=center - halfwidth, hi=center + halfwidth,
                         target_magnitude=target, deviation_threshold=threshold)


def robust_null_regions(params: RadarParams, nominal_f_t: float,
                        late_bins: int = 1, doa_deg: float = 1.0,
                        guard: float = 0.02, depth_db: float = -50.0):
    """Null region(s) covering a jammer's anticipated displaced positions.

    The repeater's quantized read-out only ever delays (never advances),
    so the interval is one-sided: [nominal - guard, nominal + shift +
    guard] with shift the worst-case transmit-frequency displacement from
    late_bins of range quantization plus doa_deg of bearing error.  A
    region crossing the +/-0.5 wrap point is split in two, which is why
    this returns a list.
    """
    bin_shift = params.chirp_rate * params.element_delay_s \
        * 2.0 * late_bins * params.range_bin_m / SPEED_OF_LIGHT
    doa_shift = params.element_spacing_wavelengths * abs(np.sin(np.deg2rad(doa_deg)))
    lo = nominal_f_t - guard
    hi = nominal_f_t + bin_shift + doa_shift + guard
    if hi - lo >= 1.0:
        raise ValueError("error bounds cover the whole frequency axis")

    upper = 0.5 - 1e-9
    if lo < -0.5 or hi >= 0.5:
        pieces = [(float(wrap_frequency(lo)), upper), (-0.5, float(wrap_frequency(hi)))]
    else:
        pieces = [(lo, hi)]
    target, threshold = _null_targets(depth_db)
    return [ControlRegion("null", max(a, -0.5), min(b, upper), target, threshold)
            for a, b in pieces if min(b, upper) - max(a, -0.5) > 1e-6]


@dataclass(frozen=True)
class ControlState:
    """Shaping outcome: the weight, its deviations, the last solved system."""

    weight: np.ndarray
    iteration: int
    converged: bool
    deviations: tuple
    active_points: tuple
    steering_matrix: np.ndarray | None
    targets: np.ndarray | None
    corrections: np.ndarray | None


def normalized_response(w: np.ndarray, f_t, reference_f_t: float):
    """L(f) = w^H a(f) / w^H a(f0); scalar in, scalar out."""
    m = w.shape[0]
    ref = np.vdot(w, uniform_phase_vector(m, reference_f_t))
    if abs(ref) == 0.0:
        raise DegenerateGeometryError("zero mainlobe response, ratio undefined")
    f = np.atleast_1d(np.asarray(f_t, dtype=float))
    grid = np.exp(2j * np.pi * np.outer(np.arange(m), f))
    values = (w.conj() @ grid) / ref
    return complex(values[0]) if np.isscalar(f_t) else values


def single_point_correction(w_prev: np.ndarray, f_point: float,
                            reference_f_t: float, target_magnitude: float,
                            phase: float) -> complex:
    """Correction coefficient enforcing L(f_point) = target * e^{j phase}.

    Closed form of the one-constraint case; w_prev + coeff * a(f_point)
    meets the constraint exactly.
    """
    m = w_prev.shape[0]
    a_point = uniform_phase_vector(m, f_point)
    a_ref = uniform_phase_vector(m, reference_f_t)
    response_target = target_magnitude * np.exp(-1j * phase)
    numerator = response_target * np.vdot(a_ref, w_prev) - np.vdot(a_point, w_prev)
    denominator = m - response_target * np.vdot(a_ref, a_point)
    if abs(denominator) < 1e-12 * m:
        raise DegenerateGeometryError("singular control point, reposition it")
    return complex(numerator / denominator)


def _check_regions(regions):
    ordered = sorted(regions, key=lambda r: r.lo)
    for left, right in zip(ordered[:-1], ordered[1:]):
        if right.lo < left.hi - 1e-12:
            raise ValueError(
                f"control regions overlap: [{left.lo}, {left.hi}] and "
                f"[{right.lo}, {right.hi}]")


def _worst_point(w, region, reference_f_t, grid_step):
    """(deviation, frequency) of the worst grid point in the region.

    Mainlobe deviation is two-sided in magnitude, null deviation only
    penalizes excess above the target; ties go to the leftmost point.
    """
    grid = np.arange(region.lo, region.hi + grid_step / 2.0, grid_step)
    magnitude = np.abs(normalized_response(w, grid, reference_f_t))
    if region.kind == "mainlobe":
        dev = np.abs(magnitude - region.target_magnitude)
    else:
        dev = magnitude - region.target_magnitude
    best = int(np.argmax(dev))
    return float(dev[best]), float(grid[best])


def select_control_points(w: np.ndarray, regions, reference_f_t: float,
                          grid_step: float = 1e-3):
    """Worst-deviation frequency in every region, in region order."""
    return [_worst_point(w, r, reference_f_t, grid_step)[1] for r in regions]


def region_deviations(w: np.ndarray, regions, reference_f_t: float,
                      grid_step: float = 1e-3):
    return [_worst_point(w, r, reference_f_t, grid_step)[0] for r in regions]


def subdivide_regions(regions, null_splits: int = 1, mainlobe_splits: int = 1):
    """Split every region into equal subregions inheriting its targets."""
    out = []
    for region in regions:
        n = max(1, int(mainlobe_splits if region.kind == "mainlobe" else null_splits))
        edges = np.linspace(region.lo, region.hi, n + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            out.append(ControlRegion(region.kind, float(a), float(b),
                                     region.target_magnitude,
                                     region.deviation_threshold))
    return tuple(out)


def mrbc_iterate(initial_weight: np.ndarray, regions, reference_f_t: float,
                 grid_step: float = 1e-3, max_iter: int = 200) -> ControlState:
    """Run the shaping loop until every region meets its threshold.

    Regions are controlled exactly as given (pre-split wide ones with
    subdivide_regions, or use shape_transmit_weight which does that for
    you).  Mainlobe constraints come first in the solve order.  If
    max_iter runs out, the least-bad visited state is returned flagged
    converged=False.  iteration counts weight updates applied.
    """
    _check_regions(regions)
    regions = sorted(regions, key=lambda r: (r.kind != "mainlobe", r.lo))
    w = np.asarray(initial_weight, dtype=np.complex128).copy()
    m = w.shape[0]
    if len(regions) > m - 1:
        warnings.warn(f"{len(regions)} constraints exceed the {m - 1} degrees "
                      "of freedom of the weight", stacklevel=2)
    a_ref = uniform_phase_vector(m, reference_f_t)

    last = (None, None, None)
    last_points = ()
    best = None
    best_excess = np.inf
    for iteration in range(max_iter + 1):
        worst = [_worst_point(w, r, reference_f_t, grid_step) for r in regions]
        deviations = tuple(d for d, _ in worst)
        excess = max(d - r.deviation_threshold for (d, _), r in zip(worst, regions))
        if excess <= 0.0:
            return ControlState(w, iteration, True, deviations, last_points, *last)
        if excess < best_excess:
            best_excess = excess
            best = ControlState(w.copy(), iteration, False, deviations, last_points, *last)
        if iteration == max_iter:
            break

        points, targets = [], []
        for (deviation, point), region in zip(worst, regions):
            # Correct only regions that are actually out of tolerance:
            # pinning a satisfied region to its exact target spends
            # degrees of freedom and aperture efficiency on nothing.
            if deviation <= region.deviation_threshold:
                continue
            if any(abs(point - p) < grid_step / 2.0 for p in points):
                continue
            points.append(point)
            targets.append(region.target_magnitude)
        columns = np.exp(2j * np.pi * np.outer(np.arange(m), points))
        phases = np.angle((w.conj() @ columns) / np.vdot(w, a_ref))
        pinned = np.asarray(targets) * np.exp(-1j * phases)

        gram = columns.conj().T @ columns
        system = gram - np.outer(pinned, a_ref.conj() @ columns)
        rhs = np.vdot(a_ref, w) * pinned - columns.conj().T @ w
        if np.linalg.cond(system) < 1e10:
            coeffs = np.linalg.solve(system, rhs)
        else:
            warnings.warn("near-singular control system, using least-squares",
                          stacklevel=2)
            coeffs = np.linalg.lstsq(system, rhs, rcond=1e-8)[0]
        w = w + columns @ coeffs
        w *= m / abs(np.vdot(w, a_ref))
        last = (columns, pinned, coeffs)
        last_points = tuple(points)
    return best


SUBDIVISION_SCHEDULE = ((4, 1), (6, 2), (4, 2), (5, 1), (3, 1), (6, 1),
                        (2, 2), (2, 1), (1, 1), (8, 2))


def shape_transmit_weight(num_elements: int, reference_f_t: float, regions,
                          grid_step: float = 1e-3, max_iter: int = 200,
                          schedule=SUBDIVISION_SCHEDULE) -> ControlState:
    """MRBC from the quiescent weight, with automatic region subdivision.

    Tries each (null_splits, mainlobe_splits) variant of the schedule,
    skipping ones that would exceed the M-1 constraint budget, and
    checks every resulting weight against the original regions.  Among
    the variants that satisfy all thresholds it returns the one with the
    highest aperture efficiency |w^H a(f0)| / ‖w‖: the shaped weight
    multiplies the target response downstream, so wasted norm is wasted
    output SINR.  A variant pinning more points than needed can meet the
    mask while burning several dB this way.  If no variant converges,
    returns the least-bad state flagged unconverged.  The schedule is
    fixed, so results are deterministic.
    """
    initial = uniform_phase_vector(num_elements, reference_f_t)
    nulls = sum(1 for r in regions if r.kind == "null")
    lobes = len(regions) - nulls
    fallback = None
    fallback_excess = np.inf
    best = None
    best_efficiency = -np.inf
    for null_splits, lobe_splits in schedule:
        if nulls * null_splits + lobes * lobe_splits > num_elements - 1:
            continue
        state = mrbc_iterate(
            initial, subdivide_regions(regions, null_splits, lobe_splits),
            reference_f_t, grid_step, max_iter)
        devs = region_deviations(state.weight, regions, reference_f_t, grid_step)
        excess = max(d - r.deviation_threshold for d, r in zip(devs, regions))
        final = ControlState(state.weight, state.iteration, excess <= 0.0,
                             tuple(devs), state.active_points,
                             state.steering_matrix, state.targets, state.corrections)
        if final.converged:
            efficiency = (np.abs(np.vdot(final.weight, initial))
                          / np.linalg.norm(final.weight))
            if efficiency > best_efficiency:
                best_efficiency = efficiency
                best = final
        elif excess < fallback_excess:
            fallback_excess = excess
            fallback = final
    if best is not None:
        return best
    if fallback is None:
        raise ValueError("no subdivision variant fits the constraint budget")
    return fallback


def rjns_weight(transmit_weight: np.ndarray, receive_weight: np.ndarray,
                eigen_incm: EigenSplit, steering: np.ndarray,
                presumed_target: tuple | None = None) -> BeamWeight:
    """Robust composite weight: shaped transmit pattern through the noise subspace.

    kron(receive, transmit) replaces the presumed steering vector of the
    plain noise-subspace weight, so the result inherits both the adaptive
    nulls of the subspace projection and the widened deterministic nulls
    of the shaped transmit pattern.
    """
    composite = np.kron(receive_weight, transmit_weight)
    noise_basis = eigen_incm.noise_subspace
    w = noise_basis @ (noise_basis.conj().T @ composite)
    if np.linalg.norm(w) <= 1e-6 * np.linalg.norm(composite):
        raise DegenerateGeometryError("composite weight lies in the jamming subspace")
    return BeamWeight(values=unit_gain(w, steering), provenance="rjns",
                      presumed_target=presumed_target)
