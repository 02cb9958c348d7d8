# Soliton profiles of the generalized KdV equation u_t + (u_xx + u^p)_x = 0.
#
# Walks through the exact ground state Q_c, the traveling-wave family, the
# conserved quantities, and the mass-scaling law whose sign decides
# stability: supercritical means d/dc of the mass is negative.

import numpy as np

from gkdv import (conserved_quantities, criticality, derivative, ground_state,
                  inner_l2, make_grid, mass_scaling_exponent, soliton_field,
                  SolitonParams)

grid = make_grid(128.0, 4096)

print("=" * 70)
print("Ground states Q_c: Q_xx + Q^p = c Q")
print("=" * 70)
for p in (2, 3, 5, 6, 8):
    q = ground_state(p, 1.0, grid)
    resid = np.max(np.abs(derivative(q, 2).values + q.values ** p - q.values))
    mass, energy = conserved_quantities(q, p)
    print(f"p={p}: peak={q.values.max():.6f}  mass={mass:.6f}  "
          f"energy={energy:+.6f}  profile residual={resid:.2e}")

print()
print("Traveling wave: R(t) is the t=0 profile translated by c t")
prm = SolitonParams(c=1.3, x0=-20.0)
r0 = soliton_field(6, prm, 0.0, grid)
r5 = soliton_field(6, prm, 5.0, grid)
peak0 = grid.x[np.argmax(r0.values)]
peak5 = grid.x[np.argmax(r5.values)]
print(f"peak moved {peak5 - peak0:.4f} over t=5 at speed c={prm.c} (expect {5 * prm.c})")

print()
print("=" * 70)
print("Mass scaling int Q_c^2 = c^s int Q^2 and the stability classification")
print("=" * 70)
for p in (3, 5, 6):
    q1 = ground_state(p, 1.0, grid)
    m1 = inner_l2(q1, q1)
    s = mass_scaling_exponent(p)
    sign, expo = criticality(p)
    label = {1: "subcritical (stable)", 0: "critical",
             -1: "supercritical (unstable)"}[sign]
    print(f"p={p}: exponent s = {expo:+.4f}  ->  {label}")
    for c in (0.5, 2.0):
        qc = ground_state(p, c, grid)
        ratio = inner_l2(qc, qc) / m1
        print(f"   c={c}: measured ratio {ratio:.12f}  vs  c^s = {c ** s:.12f}")
