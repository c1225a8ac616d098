"""Evaluation metrics: output SINR, beampatterns, Capon spectra, MVDR.

Figures of merit only; nothing here feeds back into weight construction
except mvdr_weight, which doubles as the optimal baseline the adaptive
methods are judged against.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .covariance import CovarianceMatrix
from .suppression import BeamWeight

SINR_FLOOR_DB = -100.0


@dataclass(frozen=True)
class PatternGrid:
    """dB response over a transmit x receive spatial-frequency grid.

    values_db has shape (len(f_receive), len(f_transmit)) and is
    normalized so the maximum is 0 dB.
    """

    f_transmit: np.ndarray
    f_receive: np.ndarray
    values_db: np.ndarray
    provenance: str


def sinr_db(weight, target_steering: np.ndarray, incm: CovarianceMatrix | np.ndarray,
            signal_power: float = 1.0) -> float:
    """Output SINR: signal_power |w^H v|^2 / (w^H R_jn w), in dB.

    Scale-invariant in the weight; floored at -100 dB so an exactly
    nulled target stays finite.
    """
    w = weight.values if isinstance(weight, BeamWeight) else np.asarray(weight)
    r = incm.values if isinstance(incm, CovarianceMatrix) else np.asarray(incm)
    signal = signal_power * np.abs(np.vdot(w, target_steering)) ** 2
    denom = np.real(np.vdot(w, r @ w))
    if denom <= 0.0:
        raise ValueError("interference-plus-noise power is not positive")
    ratio = signal / denom
    if ratio <= 10.0 ** (SINR_FLOOR_DB / 10.0):
        return SINR_FLOOR_DB
    return float(10.0 * np.log10(ratio))


def relative_response_db(weight, probe_steering: np.ndarray,
                         reference_steering: np.ndarray) -> float:
    """20 log10 |w^H v_probe| / |w^H v_ref|, floored at -300 dB.

    Null depth at a probe location, measured against the response at a
    reference (normally the target) rather than the grid maximum.
    """
    w = weight.values if isinstance(weight, BeamWeight) else np.asarray(weight)
    ref = np.abs(np.vdot(w, reference_steering))
    if ref == 0.0:
        raise ValueError("reference response is zero")
    ratio = np.abs(np.vdot(w, probe_steering)) / ref
    return float(20.0 * np.log10(max(ratio, 1e-15)))


def mvdr_weight(incm: CovarianceMatrix | np.ndarray, target_steering: np.ndarray,
                presumed_target: tuple | None = None) -> BeamWeight:
    """Minimum-variance weight R^{-1} v, unit target gain.

    A singular covariance gets one round of diagonal loading at 1e-8 of
    its mean eigenvalue before giving up.
    """
    r = incm.values if isinstance(incm, CovarianceMatrix) else np.asarray(incm)
    v = np.asarray(target_steering, dtype=np.complex128)
    try:
        w = scipy.linalg.solve(r, v, assume_a="pos")
    except np.linalg.LinAlgError:
        warnings.warn("singular covariance in MVDR, applying diagonal loading",
                      stacklevel=2)
        load = 1e-8 * np.trace(r).real / r.shape[0]
        w = scipy.linalg.solve(r + load * np.eye(r.shape[0]), v, assume_a="pos")
    gain = np.vdot(w, v).real  # v^H R^{-1} v, real positive
    return BeamWeight(values=w / gain, provenance="mvdr", presumed_target=presumed_target)


def pattern_2d(weight, f_transmit: np.ndarray, f_receive: np.ndarray,
               num_tx: int, num_rx: int) -> PatternGrid:
    """|W^H (b(f_R) kron a(f_T))|^2 over the grid, max-normalized dB."""
    w = weight.values if isinstance(weight, BeamWeight) else np.asarray(weight)
    provenance = weight.provenance if isinstance(weight, BeamWeight) else "custom"
    if w.size != num_tx * num_rx:
        raise ValueError(f"weight length {w.size} != {num_tx}*{num_rx}")
    f_t = np.asarray(f_transmit, dtype=float)
    f_r = np.asarray(f_receive, dtype=float)
    a = np.exp(2j * np.pi * np.outer(np.arange(num_tx), f_t))
    b = np.exp(2j * np.pi * np.outer(np.arange(num_rx), f_r))
    w_rc = np.conj(w).reshape(num_rx, num_tx)
    power = np.abs(b.T @ w_rc @ a) ** 2
    values_db = 10.0 * np.log10(np.maximum(power, 1e-300))
    return PatternGrid(f_transmit=f_t, f_receive=f_r,
                       values_db=values_db - values_db.max(), provenance=provenance)


def capon_2d(cov: CovarianceMatrix | np.ndarray, f_transmit: np.ndarray,
             f_receive: np.ndarray, num_tx: int, num_rx: int) -> PatternGrid:
    """Capon spectrum 1 / (v^H R^{-1} v) over the grid, max-normalized dB."""
    r = cov.values if isinstance(cov, CovarianceMatrix) else np.asarray(cov)
    f_t = np.asarray(f_transmit, dtype=float)
    f_r = np.asarray(f_receive, dtype=float)
    try:
        factor = scipy.linalg.cho_factor(r)
    except np.linalg.LinAlgError:
        warnings.warn("singular covariance in Capon scan, applying diagonal loading",
                      stacklevel=2)
        load = 1e-8 * np.trace(r).real / r.shape[0]
        factor = scipy.linalg.cho_factor(r + load * np.eye(r.shape[0]))
    a = np.exp(2j * np.pi * np.outer(np.arange(num_tx), f_t))
    power = np.empty((f_r.size, f_t.size))
    for i, fr in enumerate(f_r):
        b = np.exp(2j * np.pi * fr * np.arange(num_rx))
        v = (b[:, None, None] * a[None, :, :]).reshape(num_rx * num_tx, f_t.size)
        power[i] = 1.0 / np.real(np.sum(np.conj(v) * scipy.linalg.cho_solve(factor, v), axis=0))
    values_db = 10.0 * np.log10(np.maximum(power, 1e-300))
    return PatternGrid(f_transmit=f_t, f_receive=f_r,
                       values_db=values_db - values_db.max(), provenance="capon")
