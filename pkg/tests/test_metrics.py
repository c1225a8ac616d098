"""Output SINR, MVDR baseline, 2-D pattern and Capon scans."""

import numpy as np
import pytest

from stca.covariance import analytic_covariance
from stca.metrics import (SINR_FLOOR_DB, capon_2d, mvdr_weight, pattern_2d,
                          relative_response_db, sinr_db)
from stca.params import RadarParams
from stca.steering import (spatial_frequencies, uniform_phase_vector,
                           virtual_steering)
from stca.suppression import BeamWeight, unit_gain

PARAMS = RadarParams()


def _reference_incm():
    jammers = [virtual_steering(PARAMS, r, 0.0) for r in (64e3, 66e3, 84e3)]
    return analytic_covariance(jammers, [1000.0] * 3), jammers


def test_sinr_identity_covariance():
    v = virtual_steering(PARAMS, 43e3, 0.0)
    eye = np.eye(PARAMS.virtual_size, dtype=np.complex128)
    # matched weight against white noise: SINR = P * M * N
    value = sinr_db(v, v, eye, signal_power=1.0)
    assert value == pytest.approx(10 * np.log10(256), abs=1e-9)
    assert sinr_db(v, v, eye, signal_power=100.0) == pytest.approx(
        value + 20.0, abs=1e-9)


def test_sinr_scale_invariant_in_weight():
    r, _ = _reference_incm()
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w = mvdr_weight(r, v)
    assert sinr_db(w.values * 17.3j, v, r) == pytest.approx(
        sinr_db(w, v, r), abs=1e-9)


def test_sinr_floor_and_validation():
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w_orth = v.copy()
    w_orth[0] -= np.vdot(v, v) / np.conj(v[0])  # force <w, v> = 0
    assert abs(np.vdot(w_orth, v)) < 1e-10
    eye = np.eye(256, dtype=complex)
    assert sinr_db(w_orth, v, eye) == SINR_FLOOR_DB
    with pytest.raises(ValueError):
        sinr_db(v, v, np.zeros((256, 256), dtype=complex))


def test_mvdr_is_optimal():
    r, jammers = _reference_incm()
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w = mvdr_weight(r, v)
    assert w.provenance == "mvdr"
    # unit gain on the target
    assert np.vdot(w.values, v) == pytest.approx(1.0, abs=1e-10)
    best = sinr_db(w, v, r)
    rng = np.random.default_rng(7)
    for _ in range(25):
        trial = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        assert sinr_db(trial, v, r) <= best + 1e-9


def test_relative_response_cases():
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w = BeamWeight(values=unit_gain(v, v), provenance="baseline")
    assert relative_response_db(w, v, v) == pytest.approx(0.0, abs=1e-12)
    other = virtual_steering(PARAMS, 64e3, 0.0)
    assert relative_response_db(w, other, v) < 0.0
    # exact orthogonality hits the floor
    probe = np.zeros(256, dtype=complex)
    probe[0], probe[1] = v[1], -v[0]
    w_unit = np.zeros(256, dtype=complex)
    w_unit[0], w_unit[1] = v[0], v[1]
    assert relative_response_db(w_unit, np.conj(probe), v) == pytest.approx(-300.0)
    with pytest.raises(ValueError):
        relative_response_db(np.zeros(256, complex), v, v)


def test_pattern_2d_matches_direct_loop():
    # direct-summation oracle on a small grid
    r, _ = _reference_incm()
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w = mvdr_weight(r, v)
    f_t = np.linspace(-0.5, 0.45, 7)
    f_r = np.linspace(-0.4, 0.4, 5)
    grid = pattern_2d(w, f_t, f_r, PARAMS.num_tx, PARAMS.num_rx)
    assert grid.values_db.shape == (5, 7)
    assert grid.provenance == "mvdr"
    assert grid.values_db.max() == pytest.approx(0.0)
    raw = np.empty((5, 7))
    for i, fr in enumerate(f_r):
        b = np.exp(2j * np.pi * fr * np.arange(PARAMS.num_rx))
        for j, ft in enumerate(f_t):
            a = np.exp(2j * np.pi * ft * np.arange(PARAMS.num_tx))
            raw[i, j] = np.abs(np.vdot(w.values, np.kron(b, a))) ** 2
    expect = 10 * np.log10(raw)
    assert np.allclose(grid.values_db, expect - expect.max(), atol=1e-9)


def test_pattern_2d_rejects_mismatch():
    with pytest.raises(ValueError):
        pattern_2d(np.ones(100, complex), np.zeros(3), np.zeros(3), 16, 16)


def test_pattern_peak_sits_on_target():
    freqs = spatial_frequencies(PARAMS, 43e3, 0.0)
    v = virtual_steering(PARAMS, 43e3, 0.0)
    w = BeamWeight(values=unit_gain(v, v), provenance="baseline")
    f_t = np.arange(-0.5, 0.5, 0.01)
    f_r = np.arange(-0.5, 0.5, 0.01)
    grid = pattern_2d(w, f_t, f_r, 16, 16)
    i, j = np.unravel_index(np.argmax(grid.values_db), grid.values_db.shape)
    assert f_t[j] == pytest.approx(freqs.transmit, abs=0.01)
    assert f_r[i] == pytest.approx(freqs.receive, abs=0.01)


def test_capon_matches_direct_inversion():
    r, _ = _reference_incm()
    f_t = np.linspace(-0.45, 0.45, 6)
    f_r = np.linspace(-0.3, 0.3, 4)
    grid = capon_2d(r, f_t, f_r, PARAMS.num_tx, PARAMS.num_rx)
    r_inv = np.linalg.inv(r.values)
    raw = np.empty((4, 6))
    for i, fr in enumerate(f_r):
        b = np.exp(2j * np.pi * fr * np.arange(16))
        for j, ft in enumerate(f_t):
            a = np.exp(2j * np.pi * ft * np.arange(16))
            virt = np.kron(b, a)
            raw[i, j] = 1.0 / np.real(virt.conj() @ r_inv @ virt)
    expect = 10 * np.log10(raw)
    assert np.allclose(grid.values_db, expect - expect.max(), atol=1e-8)
    assert grid.provenance == "capon"


def test_capon_peaks_at_jammers():
    # the analytic-covariance peaks are much narrower than any practical
    # scan step, so put the exact frequencies in the grid
    r, _ = _reference_incm()
    jam_freqs = [spatial_frequencies(PARAMS, range_m, 0.0).transmit
                 for range_m in (64e3, 66e3, 84e3)]
    f_t = np.sort(np.concatenate([np.arange(-0.5, 0.5, 0.005), jam_freqs]))
    grid = capon_2d(r, f_t, np.array([0.0]), 16, 16)
    spectrum = grid.values_db[0]
    for f_jam in jam_freqs:
        idx = int(np.argmin(np.abs(f_t - f_jam)))
        assert spectrum[idx] >= -1.0
    # and the floor between peaks sits far below them
    assert np.median(spectrum) < -25.0


def test_capon_singular_covariance_loads():
    v = virtual_steering(PARAMS, 43e3, 0.0)
    rank1 = np.outer(v, v.conj())  # singular on purpose
    with pytest.warns(UserWarning, match="diagonal loading"):
        grid = capon_2d(rank1, np.linspace(-0.4, 0.4, 5),
                        np.array([0.0]), 16, 16)
    assert np.isfinite(grid.values_db).all()


def test_mvdr_singular_covariance_loads():
    v = virtual_steering(PARAMS, 43e3, 0.0)
    other = virtual_steering(PARAMS, 64e3, 0.0)
    rank1 = np.outer(other, other.conj())
    with pytest.warns(UserWarning, match="diagonal loading"):
        w = mvdr_weight(rank1, v)
    assert np.isfinite(w.values).all()
