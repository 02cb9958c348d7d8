# Coercivity of the quadratic form (L v, v) under orthogonality constraints.
#
# Unconstrained, the form has a negative direction (the soliton is
# supercritical).  Constrained L2-orthogonal to {Z+, Z-, Q_x} it is bounded
# below by lambda* ||v||_H1^2 with lambda* > 0: the inequality every tube
# estimate leans on.  The eigenvalue of L on Q^{(p+1)/2} is also measured
# here, adjudicating the printed value -(p^2+1) against 1-((p+1)/2)^2.

from gkdv import (Field, constrained_min_rayleigh, derivative, ensure_spectrum,
                  ground_state, make_grid, measure_mu0, mu0_paper, mu0_symbolic,
                  resample, spectrum_grid, variation_constant)
from gkdv.soliton import SolitonEnsemble, SolitonParams

p = 6
spec = ensure_spectrum(p, spectrum_grid(), directory="runs/spectrum_cache")

print("eigenvalue of L on Q^{(p+1)/2}:")
value, spread = measure_mu0(p, spec.grid)
print(f"  measured mu0 = {value:.9f} (ratio spread {spread:.1e})")
print(f"  1-((p+1)/2)^2 = {mu0_symbolic(p)},  printed -(p^2+1) = {mu0_paper(p)}")
print()

print(f"{'constraints':>22} | {'n':>5} | lambda_min")
print("-" * 50)
for n in (1024, 2048):
    grid = make_grid(spec.grid.length, n)
    zp = resample(spec.Zplus, grid) if n != spec.grid.n else spec.Zplus
    zm = resample(spec.Zminus, grid) if n != spec.grid.n else spec.Zminus
    q = ground_state(p, 1.0, grid)
    qx = derivative(q, 1)
    qhigh = Field(grid, q.values ** ((p + 1) / 2))
    for name, cons in (("{Z+, Z-, Qx}", [zp, zm, qx]),
                       ("{Qx}", [qx]),
                       ("{Q^{(p+1)/2}, Qx}", [qhigh, qx])):
        lam, _ = constrained_min_rayleigh(p, 1.0, 0.0, cons, grid)
        print(f"{name:>22} | {n:>5} | {lam:+.8f}")

grid = make_grid(spec.grid.length, 2048)
q = ground_state(p, 1.0, grid)
qx = derivative(q, 1)
lam, _ = constrained_min_rayleigh(p, 1.0, 0.0, [spec.Zplus, spec.Zminus, qx], grid)
ens = SolitonEnsemble(p, (SolitonParams(1.0, 0.0),))
print()
print(f"reconstruction constant K = 2/lambda* = {variation_constant(lam, ens):.3f}")
print("(used at runtime: ||v||_H1^2 <= K sum_j H_j + K^2 sum_j,+- a_j^2)")
