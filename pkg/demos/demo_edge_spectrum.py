# The unstable edge eigenstructure of d/dx L around a supercritical soliton.
#
# For p > 5 the operator d/dx L (L v = -v_xx - p Q^{p-1} v + v) carries a
# single pair of real eigenvalues +-e0 with localized eigenfunctions Y+-;
# the duals Z+- = L Y+- project a perturbation onto the unstable/stable
# directions.  Below p = 5 no such pair exists, which the solver reports.

import csv

from gkdv import (NoUnstableEigenvalueError, edge_eigenpair, ensure_spectrum,
                  inner_l2, spectrum_grid)

grid = spectrum_grid()
print(f"spectrum grid: L={grid.length:g}, n={grid.n} (dx={grid.dx:.4f})")
print()

spec = ensure_spectrum(6, grid, directory="runs/spectrum_cache")
print(f"p=6 edge eigenvalue           e0   = {spec.e0:.10f}")
print(f"tail decay rate of Z+-        eta0 = {spec.eta0:.6f}")
print(f"dual residuals ||L(Z_x)-+e0Z||     = {spec.residual_plus:.2e}, {spec.residual_minus:.2e}")
print(f"orthogonality max|int Q_x Z+-|     = {spec.ortho:.2e}")
print(f"Gram overlap int Z+ Z-             = {spec.gram:.8f}")
print(f"biorthogonality int Y+ Z+          = {inner_l2(spec.Yplus, spec.Zplus):.2e}")

with open("runs/edge_functions.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["x", "Yplus", "Yminus", "Zplus", "Zminus"])
    for i in range(0, grid.n, 4):
        w.writerow([grid.x[i], spec.Yplus.values[i], spec.Yminus.values[i],
                    spec.Zplus.values[i], spec.Zminus.values[i]])
print("\nwrote runs/edge_functions.csv")

print()
print("subcritical p has no unstable pair:")
for p in (3, 4):
    try:
        edge_eigenpair(p, grid)
        print(f"  p={p}: unexpected eigenvalue found (should not happen)")
    except NoUnstableEigenvalueError as exc:
        print(f"  p={p}: {exc}")
