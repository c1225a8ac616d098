"""Radar system parameters for a MIMO space-time coding array (STCA).

An STCA transmitter staggers the common chirp across elements: element m
(0-based) sends the waveform delayed by m * delta_t.  After matched
filtering, that stagger turns the element index into a range-dependent
transmit spatial frequency, which is what lets a downstream canceller
separate deceptive false targets from the true one inside the mainlobe.
"""

from __future__ import annotations

from dataclasses import dataclass

SPEED_OF_LIGHT = 3.0e8


@dataclass(frozen=True)
class RadarParams:
    """Immutable system description; everything else derives from it.

    Parameters
    ----------
    num_tx, num_rx : int
        Transmit / receive element counts of the colocated array.
    carrier_hz : float
        Carrier frequency f0.
    sample_rate_hz : float
        Complex baseband sampling rate, one range bin per sample.
    prf_hz : float
        Pulse repetition frequency.
    bandwidth_hz : float
        Chirp sweep bandwidth.
    pulse_width_s : float
        Chirp duration Tp.
    element_delay_s : float
        STCA inter-element transmit delay.  Zero degenerates the array
        into a conventional MIMO radar (no range-dependent coding).
    num_range_bins : int
        Fast-time extent of one pulse repetition interval.
    num_pulses : int
        Slow-time extent of one coherent processing interval.
    element_spacing_wavelengths : float
        d / lambda, half-wavelength by default.
    """

    num_tx: int = 16
    num_rx: int = 16
    carrier_hz: float = 10.0e9
    sample_rate_hz: float = 10.0e6
    prf_hz: float = 5.0e3
    bandwidth_hz: float = 10.0e6
    pulse_width_s: float = 1.0e-6
    element_delay_s: float = 0.1022e-6
    num_range_bins: int = 2000
    num_pulses: int = 30
    element_spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.num_tx < 1 or self.num_rx < 1:
            raise ValueError("element counts must be positive")
        if self.pulse_width_s <= 0 or self.sample_rate_hz <= 0:
            raise ValueError("pulse width and sample rate must be positive")
        if self.element_delay_s < 0:
            raise ValueError("element delay must be non-negative")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def chirp_rate(self) -> float:
        """Chirp slope mu in Hz/s."""
        return self.bandwidth_hz / self.pulse_width_s

    @property
    def range_bin_m(self) -> float:
        """Range extent of one fast-time sample."""
        return SPEED_OF_LIGHT / (2.0 * self.sample_rate_hz)

    @property
    def pulse_bins(self) -> int:
        """Number of range bins one pulse envelope occupies."""
        import math

        return math.ceil(self.pulse_width_s * self.sample_rate_hz)

    @property
    def virtual_size(self) -> int:
        """Channels in the virtual array formed after matched filtering."""
        return self.num_tx * self.num_rx

    @property
    def transmit_freq_range_period_m(self) -> float:
        """Range over which the transmit spatial frequency wraps once.

        f_T advances by 2 * mu * delta_t / c per metre, so one full cycle
        spans c / (2 * mu * delta_t).  Infinite when element_delay_s == 0.
        """
        rate = 2.0 * self.chirp_rate * self.element_delay_s
        if rate == 0.0:
            return float("inf")
        return SPEED_OF_LIGHT / rate

    @property
    def max_unambiguous_range_m(self) -> float:
        return SPEED_OF_LIGHT / (2.0 * self.prf_hz)

    def bin_of_range(self, range_m: float) -> int:
        """Fast-time bin whose leading edge the echo from range_m hits."""
        return int(round(2.0 * range_m / SPEED_OF_LIGHT * self.sample_rate_hz))

    def range_of_bin(self, bin_index: int) -> float:
        return bin_index * self.range_bin_m

    def with_element_delay(self, element_delay_s: float) -> "RadarParams":
        """Copy with a different transmit stagger (0 = conventional MIMO)."""
        from dataclasses import replace

        return replace(self, element_delay_s=element_delay_s)
