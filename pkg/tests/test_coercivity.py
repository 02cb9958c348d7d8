import numpy as np
import pytest

from gkdv import coercivity as coer
from gkdv import grid as g
from gkdv import linop
from gkdv import soliton as sol

GOLDEN_LAMBDA_STAR = 0.0730495123


def _constraint_sets(spectrum, n=1024):
    grid = g.Grid1D(spectrum.grid.length, n)
    zp = g.resample(spectrum.Zplus, grid) if n != spectrum.grid.n else spectrum.Zplus
    zm = g.resample(spectrum.Zminus, grid) if n != spectrum.grid.n else spectrum.Zminus
    q = sol.ground_state(6, 1.0, grid)
    qx = g.derivative(q, 1)
    qp = g.Field(grid, q.values ** 3.5)
    return grid, zp, zm, qx, qp


def _project_out(v, directions, grid):
    """L2-orthogonalize v against the given directions (Gram solve)."""
    dirs = [d.values for d in directions]
    G = np.array([[np.sum(a * b) * grid.dx for b in dirs] for a in dirs])
    rhs = np.array([np.sum(v.values * d) * grid.dx for d in dirs])
    coef = np.linalg.solve(G, rhs)
    out = v.values - sum(c * d for c, d in zip(coef, dirs))
    return g.Field(grid, out)


def _smooth_random(grid, rng, modes=60, width=12.0):
    fh = np.zeros(grid.n // 2 + 1, dtype=complex)
    m = np.arange(1, modes + 1)
    fh[1:modes + 1] = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) * np.exp(-0.1 * m)
    f = g.from_hat(grid, fh)
    # localize so constraint profiles see the bulk of the field
    env = np.exp(-(grid.x / width) ** 2)
    return g.Field(grid, f.values * env)


class TestConstrainedMinimum:
    def test_full_constraint_set_positive_and_golden(self, spectrum6):
        grid, zp, zm, qx, _ = _constraint_sets(spectrum6)
        lam, vmin = coer.constrained_min_rayleigh(6, 1.0, 0.0, [zp, zm, qx], grid)
        assert lam > 0
        assert abs(lam - GOLDEN_LAMBDA_STAR) <= 1e-6
        # minimizer realizes the quotient
        lv = linop.apply_L(vmin, 6)
        quot = g.inner_l2(lv, vmin) / g.norm_h1(vmin) ** 2
        assert abs(quot - lam) <= 1e-8

    def test_qx_alone_negative_with_witness(self, spectrum6):
        grid, _, _, qx, qp = _constraint_sets(spectrum6)
        lam, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [qx], grid)
        assert lam < 0
        # direct witness: v = Q^{(p+1)/2} is orthogonal to Q_x and gives a
        # negative quotient
        assert abs(g.inner_l2(qp, qx)) <= 1e-10
        quot = g.inner_l2(linop.apply_L(qp, 6), qp) / g.norm_h1(qp) ** 2
        assert quot < 0
        assert lam <= quot + 1e-12

    def test_claim5_set_positive(self, spectrum6):
        grid, _, _, qx, qp = _constraint_sets(spectrum6)
        lam, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [qp, qx], grid)
        assert lam > 0

    def test_monotone_in_constraint_set(self, spectrum6):
        grid, zp, zm, qx, _ = _constraint_sets(spectrum6)
        lam1, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [qx], grid)
        lam2, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [zp, qx], grid)
        lam3, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [zp, zm, qx], grid)
        assert lam1 <= lam2 + 1e-12
        assert lam2 <= lam3 + 1e-12

    def test_degenerate_constraints_rejected(self, spectrum6):
        grid, zp, _, qx, _ = _constraint_sets(spectrum6)
        nearly = g.Field(grid, qx.values * (1 + 1e-13))
        with pytest.raises(coer.ConstraintError):
            coer.constrained_min_rayleigh(6, 1.0, 0.0, [qx, nearly], grid)

    def test_resolution_convergence(self, spectrum6):
        vals = []
        for n in (1024, 2048):
            grid, zp, zm, qx, _ = _constraint_sets(spectrum6, n)
            lam, _ = coer.constrained_min_rayleigh(6, 1.0, 0.0, [zp, zm, qx], grid)
            vals.append(lam)
        assert abs(vals[1] - vals[0]) / abs(vals[1]) <= 1e-6


class TestLocalizedForm:
    def test_zero_field(self, spectrum6):
        grid = g.make_grid(96.0, 1024)
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 0.0),))
        phis = [g.Field(grid, np.ones(grid.n))]
        H = coer.localized_form_H(g.zeros(grid), ens, np.zeros(1), phis, 0.0)
        assert np.all(H == 0.0)

    def test_partition_violation_rejected(self, spectrum6):
        grid = g.make_grid(96.0, 1024)
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 0.0),))
        bad = [g.Field(grid, np.full(grid.n, 0.5))]
        with pytest.raises(coer.ConstraintError):
            coer.localized_form_H(g.zeros(grid), ens, np.zeros(1), bad, 0.0)

    def test_kernel_direction_gives_zero(self, spectrum6):
        grid = g.Grid1D(spectrum6.grid.length, 1024)
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 0.0),))
        rx = g.derivative(sol.ground_state(6, 1.0, grid), 1)
        phis = [g.Field(grid, np.ones(grid.n))]
        H = coer.localized_form_H(rx, ens, np.zeros(1), phis, 0.0)
        assert abs(H[0]) <= 1e-6 * g.norm_h1(rx) ** 2

    def test_coercive_on_constrained_fields(self, spectrum6, rng):
        grid, zp, zm, qx, _ = _constraint_sets(spectrum6)
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 0.0),))
        phis = [g.Field(grid, np.ones(grid.n))]
        for _ in range(20):
            v = _project_out(_smooth_random(grid, rng), [zp, zm, qx], grid)
            H = coer.localized_form_H(v, ens, np.zeros(1), phis, 0.0)
            assert H[0] >= GOLDEN_LAMBDA_STAR * g.norm_h1(v) ** 2 - 1e-10

    def test_variation_bound_random_fields(self, spectrum6, rng):
        # ||v||_H1^2 <= K sum H_j + K^2 sum a+-^2 under modulation orthogonality
        grid, zp, zm, qx, _ = _constraint_sets(spectrum6)
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 0.0),))
        K = coer.variation_constant(GOLDEN_LAMBDA_STAR, ens)
        phis = [g.Field(grid, np.ones(grid.n))]
        for _ in range(50):
            v = _project_out(_smooth_random(grid, rng), [qx], grid)
            H = coer.localized_form_H(v, ens, np.zeros(1), phis, 0.0)
            a_p = np.sum(v.values * zp.values) * grid.dx
            a_m = np.sum(v.values * zm.values) * grid.dx
            rhs = K * H[0] + K ** 2 * (a_p ** 2 + a_m ** 2)
            assert g.norm_h1(v) ** 2 <= rhs + 1e-10
