"""End-to-end drivers: detection trials, suppression runs, sweeps, CSVs."""

from dataclasses import replace

import numpy as np
import pytest

from stca.covariance import eig_descending, sample_covariance, split_subspaces
from stca.experiment import (SWEEP_METHODS, DetectionTrial, SinrPoint,
                             detection_success_rate, presumed_target_steering,
                             robustness_comparison, run_detection_trials,
                             run_sinr_sweep, run_suppression, training_rows,
                             true_interference_covariance, write_detection_csv,
                             write_pattern_csv, write_profile_csv,
                             write_sinr_csv)
from stca.metrics import pattern_2d, sinr_db
from stca.scene import SceneError
from stca.steering import virtual_steering
from stca.suppression import nsjm_weight


def test_presumed_steering_matches_direct(ref_config):
    steering, freqs = presumed_target_steering(ref_config)
    direct = virtual_steering(ref_config.params, 43.0e3, 0.0)
    assert np.array_equal(steering, direct)
    assert freqs.receive == 0.0


def test_presumed_steering_requires_target(ref_config):
    with pytest.raises(SceneError, match="no \\[target\\]"):
        presumed_target_steering(replace(ref_config, target=None))


def test_true_incm_matches_analytic(ref_config):
    params = ref_config.params
    r = true_interference_covariance(params, ref_config.jammers)
    vectors = [virtual_steering(params, j.range_m, 0.0) for j in ref_config.jammers]
    expect = np.eye(params.virtual_size, dtype=complex)
    for v in vectors:
        expect += 1000.0 * np.outer(v, v.conj())
    assert np.allclose(r.values, expect, atol=1e-9)
    # no jammers: white noise only
    empty = true_interference_covariance(params, ())
    assert np.array_equal(empty.values, np.eye(params.virtual_size))


def test_detection_trials_deterministic(ref_config):
    a = run_detection_trials(ref_config, seed=5, trials=4)
    b = run_detection_trials(ref_config, seed=5, trials=4)
    assert a == b
    c = run_detection_trials(ref_config, seed=6, trials=4)
    assert any(x.peak_correlation != y.peak_correlation for x, y in zip(a, c))


def test_detection_trials_find_reference_target(ref_config):
    rows = run_detection_trials(ref_config, seed=0, trials=6)
    assert detection_success_rate(rows, 1221) == 1.0
    assert all(r.jump_step == 3 for r in rows)
    assert all(r.peak_correlation > 0.9 for r in rows)
    assert detection_success_rate([], 1221) == 0.0


def test_run_suppression_methods(ref_config):
    runs = {m: run_suppression(ref_config, seed=0, method=m)
            for m in ("mvdr", "nsjm", "rjns")}
    for method, run in runs.items():
        assert run.method == method
        assert run.weight.provenance == method
        assert run.sinr_db > 40.0
        assert run.profile_db.shape == (2000,)
    assert runs["mvdr"].nhss is None
    assert runs["nsjm"].nhss.target_present
    assert runs["rjns"].control.converged
    # the optimum upper-bounds the estimated methods
    assert runs["mvdr"].sinr_db >= runs["nsjm"].sinr_db - 0.1
    assert runs["mvdr"].sinr_db >= runs["rjns"].sinr_db - 0.1
    with pytest.raises(ValueError, match="unknown suppression method"):
        run_suppression(ref_config, method="music")


def test_training_rows_layout(ref_config):
    params = ref_config.params
    rng = np.random.default_rng(0)
    clean = training_rows(params, ref_config.jammers, rng)
    assert clean.shape == (3 * params.num_pulses * 10, params.virtual_size)
    rng = np.random.default_rng(0)
    dirty = training_rows(params, ref_config.jammers, rng, target=ref_config.target)
    assert dirty.shape == (4 * params.num_pulses * 10, params.virtual_size)
    with pytest.raises(SceneError, match="no components"):
        training_rows(params, (), rng)


def test_training_rows_feed_valid_subspace(ref_config):
    params = ref_config.params
    rows = training_rows(params, ref_config.jammers, np.random.default_rng(1))
    eigen = split_subspaces(eig_descending(sample_covariance(rows, kind="training")),
                            len(ref_config.jammers) + 1)
    steering, _ = presumed_target_steering(ref_config)
    w = nsjm_weight(eigen, steering)
    r_true = true_interference_covariance(params, ref_config.jammers)
    assert sinr_db(w, steering, r_true, 100.0) > 40.0


def test_sinr_sweep_shape_and_ordering(ref_config):
    narrow = replace(ref_config, sweep=replace(ref_config.sweep, snr_start_db=0.0,
                                               snr_stop_db=10.0, snr_step_db=5.0))
    points = run_sinr_sweep(narrow, seed=0, trials=3)
    assert len(points) == 3 * len(SWEEP_METHODS)
    snrs = sorted({p.snr_db for p in points})
    assert snrs == [0.0, 5.0, 10.0]
    by_key = {(p.snr_db, p.method): p for p in points}
    for snr in snrs:
        mvdr = by_key[(snr, "mvdr")]
        assert mvdr.std_sinr_db == 0.0
        assert mvdr.trials == 1
        # estimated methods stay below the analytic optimum
        assert by_key[(snr, "nsjm")].mean_sinr_db <= mvdr.mean_sinr_db
        assert by_key[(snr, "rjns")].mean_sinr_db <= mvdr.mean_sinr_db
    # output SINR scales with input SNR for the fixed-weight methods
    assert by_key[(10.0, "nsjm")].mean_sinr_db == pytest.approx(
        by_key[(0.0, "nsjm")].mean_sinr_db + 10.0, abs=1e-9)
    # leaving the target in the training data self-nulls at high SNR
    assert by_key[(10.0, "nsjm_direct")].mean_sinr_db < by_key[
        (10.0, "nsjm")].mean_sinr_db - 20.0


def test_sinr_sweep_method_subset_and_validation(ref_config):
    narrow = replace(ref_config, sweep=replace(ref_config.sweep, snr_start_db=0.0,
                                               snr_stop_db=0.0))
    points = run_sinr_sweep(narrow, seed=0, trials=2, methods=("mvdr",))
    assert [p.method for p in points] == ["mvdr"]
    with pytest.raises(ValueError, match="unknown sweep method"):
        run_sinr_sweep(narrow, trials=1, methods=("mvdr", "smart"))


def test_robustness_comparison_shapes():
    out = robustness_comparison(seed=0, trials=3)
    assert out["trials"] == 3
    assert out["control"].converged
    for name in ("nsjm", "rjns"):
        stats = out[name]
        assert stats["degradation_db"] == pytest.approx(
            stats["nominal_sinr_db"] - stats["errored_sinr_db"], abs=1e-12)
    # the shifted truth guts the plain weight but not the shaped one
    assert out["nsjm"]["degradation_db"] > 10.0
    assert out["rjns"]["degradation_db"] < 3.0


def test_detection_csv_golden(tmp_path):
    rows = [DetectionTrial(trial=0, detected_bin=1221, jump_step=3,
                           peak_correlation=0.9451234),
            DetectionTrial(trial=1, detected_bin=-1, jump_step=0,
                           peak_correlation=0.0123456)]
    path = tmp_path / "detection.csv"
    write_detection_csv(path, rows)
    data = path.read_bytes()
    assert data == (b"trial,detected_bin,jump_step,peak_correlation\n"
                    b"0,1221,3,0.945123\n"
                    b"1,-1,0,0.012346\n")


def test_sinr_csv_golden(tmp_path):
    points = [SinrPoint(snr_db=0.0, method="mvdr", mean_sinr_db=23.456789,
                        std_sinr_db=0.0, trials=1)]
    path = tmp_path / "sweep.csv"
    write_sinr_csv(path, points)
    assert path.read_bytes() == (b"snr_db,method,mean_sinr_db,std\n"
                                 b"0.0000,mvdr,23.4568,0.0000\n")


def test_pattern_and_profile_csv(tmp_path, ref_config):
    steering, _ = presumed_target_steering(ref_config)
    grid = pattern_2d(steering, np.array([0.0, 0.1]), np.array([0.0]), 16, 16)
    p1 = tmp_path / "pattern.csv"
    write_pattern_csv(p1, grid)
    lines = p1.read_text().splitlines()
    assert lines[0] == "f_T,f_R,db"
    assert len(lines) == 3
    assert lines[1].startswith("0.000000,0.000000,")

    p2 = tmp_path / "profile.csv"
    write_profile_csv(p2, np.array([-1.25, 3.5]))
    assert p2.read_bytes() == b"bin,mag_db\n0,-1.2500\n1,3.5000\n"


def test_csv_writers_byte_deterministic(tmp_path, ref_config):
    rows = run_detection_trials(ref_config, seed=3, trials=3)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_detection_csv(a, rows)
    write_detection_csv(b, run_detection_trials(ref_config, seed=3, trials=3))
    content = a.read_bytes()
    assert content == b.read_bytes()
    assert b"\r" not in content
