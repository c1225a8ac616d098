"""How the inter-element transmit delay turns range into a beam direction.

A conventional MIMO array cannot tell two sources apart that share a
bearing: the steering vector depends on angle only. Give each transmit
element a small extra delay over its neighbor and the chirp each element
radiates arrives with a phase that also grows with *range*. The transmit
spatial frequency becomes

    f_T = mu * dt * 2R / c + (d / lambda) sin(theta)   (wrapped to [-0.5, 0.5))

so sources at one bearing but different ranges now sit at different
points of the transmit frequency axis, and the 16 x 16 virtual array can
null one without touching the other. That wrapped range term is the
entire trick; everything else in this package rides on it.

Run: python3 demos/01_virtual_array_geometry.py
Writes demos/out/geometry_*.png
"""

import pathlib

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from stca.metrics import pattern_2d
from stca.params import RadarParams
from stca.steering import spatial_frequencies, virtual_steering

OUT = pathlib.Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    params = RadarParams()

    print("reference system:")
    print(f"  {params.num_tx} x {params.num_rx} elements, "
          f"{params.virtual_size} virtual channels")
    print(f"  element delay {params.element_delay_s * 1e9:.1f} ns, "
          f"chirp rate {params.chirp_rate:.3e} Hz/s")
    print(f"  range bin {params.range_bin_m:.0f} m, "
          f"frequency step per bin "
          f"{params.chirp_rate * params.element_delay_s * 2 * params.range_bin_m / 3e8:.4f}")
    print(f"  f_T folds every {params.transmit_freq_range_period_m:.2f} m")

    print("\ntransmit frequency at broadside:")
    for range_m in (43.0e3, 48315.0, 64815.0, 66465.0, 84015.0):
        freqs = spatial_frequencies(params, range_m, 0.0)
        print(f"  R = {range_m / 1e3:8.3f} km  ->  f_T = {freqs.transmit:+.4f}")

    # a conventional array collapses all of these onto f_T = f_R
    trad = params.with_element_delay(0.0)
    f_a = spatial_frequencies(trad, 43.0e3, 0.0).transmit
    f_b = spatial_frequencies(trad, 84.0e3, 0.0).transmit
    print(f"\nwith the delay zeroed: f_T(43 km) = {f_a:+.4f}, "
          f"f_T(84 km) = {f_b:+.4f} (indistinguishable)")

    ranges = np.linspace(43.0e3, 43.0e3 + 600.0, 2000)
    f_t = [spatial_frequencies(params, r, 0.0).transmit for r in ranges]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.plot((ranges - 43.0e3), f_t, lw=0.8)
    ax.set_xlabel("range past 43 km (m)")
    ax.set_ylabel("transmit spatial frequency")
    ax.set_title("range sweeps the transmit frequency axis and folds")
    fig.tight_layout()
    fig.savefig(OUT / "geometry_ft_vs_range.png", dpi=120)

    # quiescent two-dimensional pattern: a single spot, not a ridge
    grid = np.arange(-0.5, 0.5, 0.004)
    v = virtual_steering(params, 43.0e3, 0.0)
    pattern = pattern_2d(v, grid, grid, params.num_tx, params.num_rx)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(pattern.values_db, origin="lower", vmin=-60, vmax=0,
                   extent=(-0.5, 0.5, -0.5, 0.5), aspect="auto", cmap="viridis")
    ax.set_xlabel("transmit frequency")
    ax.set_ylabel("receive frequency")
    ax.set_title("quiescent pattern, target at 43 km / 0 deg")
    fig.colorbar(im, ax=ax, label="dB")
    fig.tight_layout()
    fig.savefig(OUT / "geometry_quiescent_pattern.png", dpi=120)
    print(f"\nwrote {OUT}/geometry_ft_vs_range.png and geometry_quiescent_pattern.png")


if __name__ == "__main__":
    main()
