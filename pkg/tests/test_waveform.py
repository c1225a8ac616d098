"""Pulse-level validation of the snapshot phase model.

The steering model asserts that after matched filtering, element m's
peak carries phase 2 pi m f_T (plus a common round-trip term).  The
simulation here is the independent check: build the delayed chirps,
demix, compress, and compare the measured peak phases against the
model.  Anything wrong with the f_T convention (sign, wrap, folded
range handling) shows up as a residual of order one radian.
"""

import numpy as np

from stca.waveform import chirp_samples, validate_matched_filter


def test_chirp_samples_shape_and_modulus(params):
    g = chirp_samples(params, oversample=16)
    assert g.size == 160
    assert np.allclose(np.abs(g), 1.0, atol=1e-12)


def test_chirp_quadratic_phase(params):
    oversample = 16
    g = chirp_samples(params, oversample=oversample)
    phase = np.unwrap(np.angle(g))
    # d2(phase)/du2 = 2 pi mu, so the second difference is constant
    second = np.diff(phase, n=2)
    fs_sim = params.sample_rate_hz * oversample
    expected = 2.0 * np.pi * params.chirp_rate / fs_sim**2
    assert np.allclose(second, expected, rtol=1e-6)


def test_matched_filter_residual_reference_geometry(params):
    assert validate_matched_filter(params, 43.0e3, 0.0) < 1e-2


def test_matched_filter_residual_other_geometries(params):
    assert validate_matched_filter(params, 48315.0, np.deg2rad(15.0)) < 1e-2
    assert validate_matched_filter(params, 84015.0, np.deg2rad(-25.0)) < 1e-2


def test_matched_filter_residual_zero_delay(params):
    flat = params.with_element_delay(0.0)
    assert validate_matched_filter(flat, 43.0e3, 0.0) < 1e-2


def test_residual_is_tight_not_marginal(params):
    # the model is exact up to numerics; a residual anywhere near the
    # acceptance limit would mean a convention bug partially cancelled
    assert validate_matched_filter(params, 43.0e3, 0.0) < 1e-6


def test_oversample_controls_grid(params):
    g8 = chirp_samples(params, oversample=8)
    assert g8.size == 80
    assert validate_matched_filter(params, 43.0e3, 0.0, oversample=8) < 1e-2


def test_max_elements_limits_work(params):
    assert validate_matched_filter(params, 43.0e3, 0.0, max_elements=2) < 1e-2
