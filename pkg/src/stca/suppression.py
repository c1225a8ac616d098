"""Noise-subspace jamming mitigation (NSJM).

With a target-free covariance estimate, the jamming lives in the dominant
eigenvectors and everything orthogonal to them is the noise subspace.
Projecting the presumed target steering vector onto that subspace yields a
weight that keeps target gain while sitting exactly orthogonal to every
jamming steering vector the subspace captured.  No inversion, no loading;
the cost of the free lunch is the sample-selection stage that kept the
target out of the estimate, and a hard capacity limit: the transmit array
can only spend M-1 degrees of freedom on mainlobe jammers before the
projection of the target vector itself collapses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import EigenSplit
from .scene import DataCube


class DegenerateGeometryError(RuntimeError):
    """The presumed target steering vector lies in the jamming subspace.

    Happens when the jammer count reaches the transmit element count (or
    a jammer sits exactly on the target): the noise-subspace projection
    of the target vector vanishes and no weight can separate them.
    """


@dataclass(frozen=True)
class BeamWeight:
    """Weight vector tagged with how it was built.

    provenance is one of 'nsjm', 'mrbc', 'rjns', 'mvdr', 'baseline'.
    values are normalized to unit gain on the presumed target steering
    vector so outputs of different methods are directly comparable.
    """

    values: np.ndarray
    provenance: str
    presumed_target: tuple | None = None


def unit_gain(values: np.ndarray, steering: np.ndarray) -> np.ndarray:
    """Scale so the response on the given steering vector is exactly 1+0j."""
    gain = np.vdot(values, steering)
    if abs(gain) == 0.0:
        raise DegenerateGeometryError("weight has zero gain on the steering vector")
    return values / np.conj(gain)


def nsjm_weight(eigen_incm: EigenSplit, steering: np.ndarray,
                presumed_target: tuple | None = None) -> BeamWeight:
    """Noise-subspace projection of the presumed target steering vector.

    eigen_incm must carry a subspace split (split_index set).  Raises
    DegenerateGeometryError when the projection loses essentially all of
    the steering vector, which is the M-jammer capacity failure.
    """
    noise_basis = eigen_incm.noise_subspace
    v = np.asarray(steering, dtype=np.complex128)
    w = noise_basis @ (noise_basis.conj().T @ v)
    if np.linalg.norm(w) <= 1e-6 * np.linalg.norm(v):
        raise DegenerateGeometryError(
            "target steering vector lies in the jamming subspace "
            f"(projection norm {np.linalg.norm(w):.2e})")
    return BeamWeight(values=unit_gain(w, v), provenance="nsjm",
                      presumed_target=presumed_target)


def apply_weight(weight: BeamWeight, cube: DataCube) -> np.ndarray:
    """Filter every snapshot: y[pulse, bin] = W^H x[pulse, bin]."""
    w = weight.values
    if w.shape[-1] != cube.snapshots.shape[-1]:
        raise ValueError(
            f"weight length {w.shape[-1]} != channel count {cube.snapshots.shape[-1]}")
    return cube.snapshots @ np.conj(w)


def output_profile_db(filtered: np.ndarray) -> np.ndarray:
    """Per-bin output power (mean over pulses), in dB."""
    p = np.mean(np.abs(filtered) ** 2, axis=0)
    return 10.0 * np.log10(np.maximum(p, 1e-300))
