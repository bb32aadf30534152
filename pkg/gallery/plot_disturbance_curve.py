"""
Disturbance of the protected state by a spin bath
=================================================

A qubit sits in the ground state of a protection field. A weak measurement
field tilts the net field slightly, and a bath of environment spins adds a
random transverse field ``b`` drawn from ``N(0, s_d^2)``. Averaged over the
bath, the probability of ending in the wrong state is half the mean of
``sin^2(theta)``.

Run ``python plot_disturbance_curve.py [OUT_DIR]``; curve data goes to
``OUT_DIR`` (default: current directory) as CSV and SVG.
"""

import math
import sys

import numpy as np

from protectosim import MeasurementGeometry, disturbance_bound, p1_full, p1_weak
from protectosim.figures import build
from protectosim.fileio import write_curve_set

out_dir = sys.argv[1] if len(sys.argv) > 1 else "."

# Transverse measurement axis, measurement strength xi = 0.1.
geom = MeasurementGeometry(gamma=math.pi / 2, eta=0.0, xi=0.1)

# Without any bath the flip probability is bounded by sin^2(theta) at b = 0.
print(f"measurement-only bound: {disturbance_bound(0.1, math.pi / 2):.5f}")

# With the bath the flip probability grows with its strength s_d.
for s_d in (0.0, 0.1, 0.2, 0.35, 1.0, 3.0):
    print(f"s_d = {s_d:4.2f}   P1 = {p1_weak(s_d, geom):.4f}")

# Keeping the precession term instead of averaging it away changes little
# for a long measurement (omega0 T = 200 pi).
for mode in ("full", "average", "drop"):
    v = p1_full(0.2, geom, omega0_T=200 * math.pi, sigma_p=0.03, oscillation=mode)
    print(f"oscillation={mode:8s} P1(s_d=0.2) = {v:.5f}")

# Largest s_d compatible with a 5 % disturbance budget, by bisection on the curve.
grid = np.linspace(0.0, 1.0, 201)
p1 = np.array([p1_weak(s, geom) for s in grid])
print(f"P1 <= 0.05 for s_d <= {grid[p1 <= 0.05][-1]:.3f}")

for curves in build("fig1"):
    for path in write_curve_set(curves, out_dir, "both"):
        print("wrote", path)
