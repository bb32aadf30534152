"""
Finite spin bath against the Gaussian continuum
===============================================

The continuum model replaces the bath by a Gaussian field distribution. Here
a bath of N spins is treated exactly: every one of the 2^N branches gets its
own net field, precession phase and pointer shift, and the reduced qubit
state is assembled from them. Averaging the flip probability over one
precession period and over random couplings reproduces the continuum curve.
"""

import math

import numpy as np

from protectosim import DiscreteEnvironment, MeasurementGeometry, branches, spin_density
from protectosim.exact import draw_couplings
from protectosim.scans import cross_check

geom = MeasurementGeometry(gamma=math.pi / 2, eta=0.0, xi=0.1)

# One bath, looked at in detail.
rng = np.random.default_rng(1)
env = DiscreteEnvironment.uniform(draw_couplings(8, 0.2, rng))
table = branches(env, geom, omega0_T=200 * math.pi, sigma_p=0.03)
rho = spin_density(table, env.amplitudes, oscillation="average")
print(f"{len(table)} branches; fields span [{table.b_tilde.min():.3f}, {table.b_tilde.max():.3f}]")
print("reduced state:\n", np.round(rho.matrix, 5))
print(f"valid density matrix: {rho.is_valid()}; P1 = {rho.p1:.5f}")

# Many baths, compared with the continuum result.
print(f"{'N':>3} {'s_d':>5} {'exact':>9} {'continuum':>9} {'|diff|':>8}")
for n in (4, 8, 12):
    for row in cross_check(n, [0.2, 1.0], seed=7, draws=20):
        print(f"{n:3d} {row.s_d:5.2f} {row.exact:9.5f} {row.continuum:9.5f} {row.difference:8.1e}")
