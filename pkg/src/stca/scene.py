"""Echo synthesis: true target, deceptive false targets, receiver noise.

The simulator works at the virtual-array snapshot level.  Matched filtering
and the per-element demixing are assumed ideal (waveform.py validates that
assumption numerically), so a scatterer contributes

    amplitude * kron(b(theta), a(R, theta))

to every range bin its pulse envelope occupies, with amplitude carrying the
round-trip carrier phase and the square root of its power.  Noise is
unit-variance complex white Gaussian per virtual channel, so SNR/JNR values
are absolute dB figures against a 0 dB floor.

Positions use a dual convention: range_bin places the pulse on the fast
time axis, range_m sets the transmit spatial frequency and echo phase.
The two are redundant in principle but keeping both lets a scenario pin bins
and frequencies independently (range-ambiguous geometries fold the delay
axis and the frequency axis by different fractions, so a single number
cannot reproduce a measured scene).  When range_bin is omitted it is
derived from range_m modulo the unambiguous window.

A deceptive repeater stores the intercepted pulse and replays it late, so
a false target inherits the jammer's angle but appears at a longer range;
the element delay maps that range offset into a transmit-frequency offset,
which is the handle every suppression stage here relies on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .params import SPEED_OF_LIGHT, RadarParams
from .steering import SpatialFrequencies, spatial_frequencies, virtual_steering


class SceneError(ValueError):
    """Raised when a scenario does not fit the radar timing grid."""


@dataclass(frozen=True)
class TargetSpec:
    """True target; snr_db is relative to the unit noise floor."""

    angle_deg: float
    range_m: float
    snr_db: float
    range_bin: int | None = None


@dataclass(frozen=True)
class FalseTargetSpec:
    """Deceptive false target forwarded by a mainlobe repeater."""

    angle_deg: float
    range_m: float
    jnr_db: float
    range_bin: int | None = None

    @classmethod
    def from_repeater_delay(cls, jammer_range_m: float, forward_delay_s: float,
                            angle_deg: float, jnr_db: float) -> "FalseTargetSpec":
        """Build from the repeater's own range plus its replay delay.

        The stored pulse travels the jammer range twice plus the hold
        time, so the apparent range is jammer_range_m + c * delay / 2.
        """
        return cls(
            angle_deg=angle_deg,
            range_m=jammer_range_m + SPEED_OF_LIGHT * forward_delay_s / 2.0,
            jnr_db=jnr_db,
        )


@dataclass(frozen=True)
class ErrorInjection:
    """Offsets between the presumed false-target positions and the truth.

    range_bins models the repeater's quantized read-out delay (an integer
    number of samples, late only); doa_deg a bearing mismatch.  Both are
    applied to the simulated truth; algorithm-side presumed parameters
    stay nominal, which is exactly the mismatch a robust design must
    survive.
    """

    range_bins: int = 0
    doa_deg: float = 0.0


@dataclass(frozen=True)
class SceneComponent:
    """One resolved scatterer: the truth as placed into the cube."""

    label: str
    kind: str
    range_m: float
    angle_deg: float
    power: float
    range_bin: int
    num_bins: int
    freqs: SpatialFrequencies
    steering: np.ndarray = field(repr=False)
    amplitude: complex = field(repr=False)

    @property
    def bin_span(self) -> tuple:
        return (self.range_bin, self.range_bin + self.num_bins)


@dataclass(frozen=True)
class DataCube:
    """Simulated virtual-array snapshots.

    snapshots has shape (num_pulses, num_range_bins, num_tx * num_rx);
    the channel axis is receive-major (see steering.virtual_steering).
    """

    snapshots: np.ndarray
    params: RadarParams
    components: tuple
    seed: int | tuple

    @property
    def pulse_occupancy(self) -> np.ndarray:
        """Boolean mask over range bins touched by any pulse envelope."""
        mask = np.zeros(self.params.num_range_bins, dtype=bool)
        for comp in self.components:
            start, stop = comp.bin_span
            mask[start:stop] = True
        return mask

    def samples_at_bin(self, bin_index: int) -> np.ndarray:
        """(num_pulses, channels) snapshots of one range bin."""
        return self.snapshots[:, bin_index, :]

    def samples_at_bins(self, bins) -> np.ndarray:
        """Snapshots of several bins stacked into (pulses * len(bins), channels)."""
        picked = self.snapshots[:, np.asarray(bins, dtype=int), :]
        return picked.reshape(-1, self.snapshots.shape[2])

    def power_profile_db(self) -> np.ndarray:
        """Per-bin mean power over pulses and channels, in dB."""
        p = np.mean(np.abs(self.snapshots) ** 2, axis=(0, 2))
        return 10.0 * np.log10(np.maximum(p, 1e-300))


def _resolve(params: RadarParams, label: str, kind: str, angle_deg: float,
             range_m: float, power_db: float, range_bin: int | None) -> SceneComponent:
    if range_m < 0:
        raise SceneError(f"{label}: negative range {range_m}")
    if range_bin is None:
        range_bin = params.bin_of_range(range_m) % params.num_range_bins
    stop = range_bin + params.pulse_bins
    if range_bin < 0 or stop > params.num_range_bins:
        raise SceneError(
            f"{label}: pulse occupies bins [{range_bin}, {stop}) outside the "
            f"{params.num_range_bins}-bin window"
        )
    angle_rad = np.deg2rad(angle_deg)
    freqs = spatial_frequencies(params, range_m, angle_rad)
    steer = virtual_steering(params, range_m, angle_rad)
    power = 10.0 ** (power_db / 10.0)
    round_trip = 2.0 * range_m / SPEED_OF_LIGHT
    amplitude = np.sqrt(power) * np.exp(-2j * np.pi * params.carrier_hz * round_trip)
    return SceneComponent(
        label=label, kind=kind, range_m=range_m, angle_deg=angle_deg, power=power,
        range_bin=range_bin, num_bins=params.pulse_bins, freqs=freqs,
        steering=steer, amplitude=complex(amplitude),
    )


def synthesize_cube(params: RadarParams, target: TargetSpec | None,
                    false_targets=(), errors: ErrorInjection | None = None,
                    seed: int = 0, noise_power: float = 1.0,
                    dtype=np.complex128) -> DataCube:
    """Simulate one coherent processing interval.

    Parameters
    ----------
    target : TargetSpec or None
        None gives a jammer-plus-noise cube (useful for false-alarm and
        training studies).
    false_targets : sequence of FalseTargetSpec
    errors : ErrorInjection, optional
        Offsets added to the true false-target positions.
    seed : int
        Noise stream seed; identical seeds give identical cubes.  Derive
        per-trial seeds from (seed, trial) upstream.
    noise_power : float
        Per-channel noise variance; 0.0 gives a deterministic noiseless
        cube for exactness tests.
    dtype : numpy complex dtype
        complex64 halves memory and is plenty for Monte Carlo detection
        runs; keep complex128 when eigenvalue fidelity matters.
    """
    if len(false_targets) > params.num_tx - 1:
        warnings.warn(
            f"{len(false_targets)} mainlobe false targets exceed the "
            f"{params.num_tx - 1}-jammer suppression capacity", stacklevel=2)
    components = []
    if target is not None:
        components.append(_resolve(
            params, "target", "target",
            target.angle_deg, target.range_m, target.snr_db, target.range_bin))
    err = errors or ErrorInjection()
    for i, ft in enumerate(false_targets):
        true_range = ft.range_m + err.range_bins * params.range_bin_m
        true_angle = ft.angle_deg + err.doa_deg
        true_bin = None if ft.range_bin is None else ft.range_bin + err.range_bins
        components.append(_resolve(
            params, f"false_target_{i + 1}", "false_target",
            true_angle, true_range, ft.jnr_db, true_bin))

    shape = (params.num_pulses, params.num_range_bins, params.virtual_size)
    data = np.empty(shape, dtype=dtype)
    float_view = data.view(np.float32 if dtype == np.complex64 else np.float64)
    if noise_power > 0.0:
        rng = np.random.default_rng(seed)
        rng.standard_normal(out=float_view, dtype=float_view.dtype)
        float_view *= np.sqrt(noise_power / 2.0)
    else:
        float_view[:] = 0.0

    for comp in components:
        start, stop = comp.bin_span
        data[:, start:stop, :] += (comp.amplitude * comp.steering).astype(dtype)
    return DataCube(snapshots=data, params=params, components=tuple(components), seed=seed)
