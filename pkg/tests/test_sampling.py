"""Sample selection: segmentation, presence test, cumulative localization."""

import numpy as np
import pytest

from stca.covariance import eig_descending, sample_covariance
from stca.params import RadarParams
from stca.sampling import (DetectionThresholds, Segment, best_correlation,
                           locate_target, segment_echo)
from stca.scene import FalseTargetSpec, TargetSpec, synthesize_cube
from stca.steering import virtual_steering

THRESHOLDS = DetectionThresholds()


def _eigen_of(cube):
    flat = cube.snapshots.reshape(-1, cube.params.virtual_size)
    return eig_descending(sample_covariance(flat))


def test_thresholds_validation():
    with pytest.raises(ValueError):
        DetectionThresholds(sampling_db=0.0)
    with pytest.raises(ValueError):
        DetectionThresholds(jump=-0.1)
    with pytest.raises(ValueError):
        DetectionThresholds(mode="fancy")


def test_segment_dataclass():
    seg = Segment(10, 20)
    assert seg.width == 10
    assert np.array_equal(seg.bins, np.arange(10, 20))


def test_reference_scene_segments(ref_cube):
    found = segment_echo(ref_cube)
    spans = [(s.start_bin, s.stop_bin) for s in found.segments]
    assert spans == [(321, 331), (431, 441), (1221, 1231), (1601, 1611)]
    # unit noise floor
    assert found.noise_floor_db == pytest.approx(0.0, abs=0.5)


def test_noise_only_yields_no_segments():
    cube = synthesize_cube(RadarParams(), None, seed=11, dtype=np.complex64)
    assert len(segment_echo(cube).segments) == 0


def test_minimum_width_rule():
    params = RadarParams(num_range_bins=200, num_pulses=6)
    cube = synthesize_cube(params, None, seed=12)
    # 8 bins wide: narrower than 4/5 of the 10-bin pulse plus one
    cube.snapshots[:, 50:58, :] += 10.0
    # 10 bins wide: a legitimate pulse footprint
    cube.snapshots[:, 100:110, :] += 10.0
    spans = [(s.start_bin, s.stop_bin) for s in segment_echo(cube).segments]
    assert spans == [(100, 110)]


def test_floor_refinement_survives_strong_scene():
    # a very strong, wide occupied stretch should not drag the estimated
    # floor up enough to hide a modest segment
    params = RadarParams(num_range_bins=300, num_pulses=6)
    cube = synthesize_cube(params, None, seed=13)
    cube.snapshots[:, 30:120, :] += 300.0
    cube.snapshots[:, 200:210, :] += 3.0  # ~9.5 dB over unit noise
    spans = [(s.start_bin, s.stop_bin) for s in segment_echo(cube).segments]
    assert (200, 210) in spans


def test_presence_gate_rejects_jammer_only_scene(ref_config):
    cube = synthesize_cube(ref_config.params, None, ref_config.jammers,
                           seed=21, dtype=np.complex64)
    target = ref_config.target
    steering = virtual_steering(ref_config.params, target.range_m,
                                np.deg2rad(target.angle_deg))
    eigen = _eigen_of(cube)
    report = best_correlation(eigen, steering)
    assert report.peak_correlation < 0.1
    result = locate_target(cube, eigen, steering, THRESHOLDS)
    assert not result.target_present
    assert result.target_range_bin is None
    # everything segmented becomes training data
    assert set(np.unique(result.training_bins)) == (
        set(range(321, 331)) | set(range(431, 441)) | set(range(1601, 1611)))


def test_presence_passes_with_target(ref_cube, ref_eigen_full, ref_steering):
    report = best_correlation(ref_eigen_full, ref_steering)
    assert report.peak_correlation > 0.9
    assert 1 <= report.peak_index <= 4


def test_locate_target_reference_scene(ref_cube, ref_eigen_full, ref_steering):
    result = locate_target(ref_cube, ref_eigen_full, ref_steering, THRESHOLDS)
    assert result.target_present
    assert result.target_range_bin == 1221
    # segments ordered near to far: 321, 431, 1221, 1601 -> third step
    assert result.target_segment_index == 3
    assert len(result.mass_trace) == 3
    # the first two cumulative steps stay flat, the third jumps
    assert result.mass_trace[1] - result.mass_trace[0] < THRESHOLDS.jump
    assert result.mass_trace[2] - result.mass_trace[1] >= THRESHOLDS.jump
    assert set(np.unique(result.training_bins)) == (
        set(range(321, 331)) | set(range(431, 441)) | set(range(1601, 1611)))


def test_locate_target_between_jammers():
    # the target segment is second in range order; the jump must fire at
    # step 2 and leave the flanking jammer segments as training data
    params = RadarParams()
    target = TargetSpec(angle_deg=0.0, range_m=43.0e3, snr_db=20.0, range_bin=651)
    jammers = (
        FalseTargetSpec(angle_deg=0.0, range_m=64.0e3, jnr_db=30.0, range_bin=501),
        FalseTargetSpec(angle_deg=0.0, range_m=66.0e3, jnr_db=30.0, range_bin=1201),
    )
    cube = synthesize_cube(params, target, jammers, seed=31, dtype=np.complex64)
    steering = virtual_steering(params, target.range_m, 0.0)
    result = locate_target(cube, _eigen_of(cube), steering, THRESHOLDS)
    assert result.target_present
    assert result.target_segment_index == 2
    assert result.target_range_bin == 651
    assert set(np.unique(result.training_bins)) == (
        set(range(501, 511)) | set(range(1201, 1211)))


def test_jump_never_fires_falls_through(ref_cube, ref_eigen_full, ref_steering):
    # an unreachable jump threshold (mass is bounded by the rank) means
    # no step qualifies; the selector must hand back all segments
    cautious = DetectionThresholds(jump=100.0)
    result = locate_target(ref_cube, ref_eigen_full, ref_steering, cautious)
    assert not result.target_present
    assert len(result.mass_trace) == 4
    assert result.training_bins.size == 40


def test_locate_target_deterministic(ref_cube, ref_eigen_full, ref_steering):
    a = locate_target(ref_cube, ref_eigen_full, ref_steering, THRESHOLDS)
    b = locate_target(ref_cube, ref_eigen_full, ref_steering, THRESHOLDS)
    assert a.target_range_bin == b.target_range_bin
    assert a.mass_trace == b.mass_trace
    assert np.array_equal(a.training_bins, b.training_bins)


def test_raw_mode_runs(ref_cube, ref_eigen_full, ref_steering):
    # raw-mode scores scale with the channel count; the reference scene
    # peaks around 150 for a present target
    raw = DetectionThresholds(presence=125.0, jump=150.0, mode="raw")
    result = locate_target(ref_cube, ref_eigen_full, ref_steering, raw)
    assert result.report.peak_correlation > 125.0
    assert result.target_present
    assert result.target_range_bin == 1221
