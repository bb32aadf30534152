"""
Bath fields along the protection axis
=====================================

When the bath field points along the protection field it cannot tilt it, so
the pointer is never broadened. A strong enough field can however reverse
it; the pointer then moves the wrong way. The readout becomes a two-peak
mixture whose weights follow the probability ``P+`` that the protection
field survives.
"""

import math
import sys

import numpy as np

from protectosim import zaxis_pointer_mixture, zaxis_success_probability
from protectosim.continuum import zaxis_chi, zaxis_chi_expansion
from protectosim.figures import build
from protectosim.fileio import write_curve_set

out_dir = sys.argv[1] if len(sys.argv) > 1 else "."
gamma = math.pi / 4

for s_d in (0.1, 0.5, 1.0, 2.0, 10.0, 50.0):
    mix = zaxis_pointer_mixture(s_d, gamma, 0.03)
    print(f"s_d = {s_d:5.1f}   P+ = {zaxis_success_probability(s_d):.4f}   "
          f"pointer mean = {mix.mean:+.4f}   widths = {sorted(set(mix.widths.tolist()))}")

# The sign of the first-order shift flips once b < -1.
for b in (0.0, -0.5, -2.0):
    approx, sign = zaxis_chi_expansion(0.1, gamma, b)
    print(f"b = {b:+.1f}: chi = {float(zaxis_chi(0.1, gamma, b)):.5f}, "
          f"first order {approx:.5f}, shift sign {sign:+d}")

(curves,) = build("fig4")
for label, y in curves.series.items():
    left, right = curves.x < 0, curves.x >= 0
    print(f"{label}: peaks at {curves.x[left][np.argmax(y[left])]:+.3f} "
          f"and {curves.x[right][np.argmax(y[right])]:+.3f}")
for path in write_curve_set(curves, out_dir, "both"):
    print("wrote", path)
