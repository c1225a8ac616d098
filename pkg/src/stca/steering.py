"""Steering vectors and spatial frequencies of the STCA virtual array.

Conventions used throughout the package:

* receive spatial frequency  f_R = (d / lambda) * sin(theta)
* transmit spatial frequency f_T = mu * delta_t * (2 R / c) + (d / lambda) * sin(theta),
  wrapped to the principal interval [-0.5, 0.5)
* element n of a steering vector carries exp(j 2 pi n f), n = 0 .. N-1
* the virtual (MN)-element vector is kron(receive, transmit): receive index
  is the outer (slow) index, transmit the inner (fast) one

The range term in f_T is what distinguishes STCA from a conventional MIMO
array: two sources at the same angle but different ranges occupy different
transmit spatial frequencies, so a delayed repeater inside the mainlobe is
separable even though its angle is indistinguishable from the target's.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SPEED_OF_LIGHT, RadarParams


def wrap_frequency(f):
    """Wrap a normalized spatial frequency into [-0.5, 0.5).

    Works on scalars and arrays.  The right endpoint maps to the left one,
    so wrap_frequency(0.5) == -0.5.
    """
    return np.mod(np.asarray(f) + 0.5, 1.0) - 0.5


@dataclass(frozen=True)
class SpatialFrequencies:
    """Principal-interval frequencies of one source, plus diagnostics.

    transmit_unwrapped keeps the pre-wrap value; the integer number of
    wraps is often the quickest sanity check on a scene geometry.
    """

    transmit: float
    receive: float
    transmit_unwrapped: float


def spatial_frequencies(params: RadarParams, range_m: float, angle_rad: float) -> SpatialFrequencies:
    """Transmit / receive spatial frequencies of a source at (range, angle)."""
    d_over_lambda = params.element_spacing_wavelengths
    f_r = d_over_lambda * np.sin(angle_rad)
    f_t_unwrapped = (
        params.chirp_rate * params.element_delay_s * 2.0 * range_m / SPEED_OF_LIGHT + f_r
    )
    return SpatialFrequencies(
        transmit=float(wrap_frequency(f_t_unwrapped)),
        receive=float(f_r),
        transmit_unwrapped=float(f_t_unwrapped),
    )


def uniform_phase_vector(num_elements: int, freq: float) -> np.ndarray:
    """exp(j 2 pi n freq) for n = 0 .. num_elements-1."""
    n = np.arange(num_elements)
    return np.exp(2j * np.pi * freq * n)


def transmit_steering(params: RadarParams, range_m: float, angle_rad: float) -> np.ndarray:
    """M-element transmit steering vector a(f_T)."""
    f = spatial_frequencies(params, range_m, angle_rad)
    return uniform_phase_vector(params.num_tx, f.transmit)


def receive_steering(params: RadarParams, angle_rad: float) -> np.ndarray:
    """N-element receive steering vector b(theta); range independent."""
    f_r = params.element_spacing_wavelengths * np.sin(angle_rad)
    return uniform_phase_vector(params.num_rx, f_r)


def virtual_steering(params: RadarParams, range_m: float, angle_rad: float) -> np.ndarray:
    """MN-element virtual steering vector kron(b, a).

    Element n*M + m carries the receive-n, transmit-m phase product, i.e.
    snapshots are stored receive-major.
    """
    return np.kron(receive_steering(params, angle_rad), transmit_steering(params, range_m, angle_rad))


def virtual_from_frequencies(num_tx: int, num_rx: int, f_transmit: float, f_receive: float) -> np.ndarray:
    """Virtual steering vector directly from the two spatial frequencies."""
    return np.kron(uniform_phase_vector(num_rx, f_receive), uniform_phase_vector(num_tx, f_transmit))
