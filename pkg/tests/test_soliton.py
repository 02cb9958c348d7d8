import numpy as np
import pytest

from gkdv import grid as g
from gkdv import soliton as sol


GRID = g.make_grid(96.0, 2048)


class TestGroundState:
    def test_peak_value_p6(self):
        q = sol.ground_state(6, 1.0, GRID)
        assert abs(q.values.max() - 3.5 ** 0.2) <= 1e-12
        assert abs(3.5 ** 0.2 - 1.28473) <= 1e-5

    @pytest.mark.parametrize("p", range(2, 9))
    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    def test_profile_equation_residual(self, p, c):
        # fast profiles at large p need dx = 1/32 for the spectral Q_xx
        fine = g.make_grid(128.0, 4096)
        q = sol.ground_state(p, c, fine)
        resid = g.derivative(q, 2).values + q.values ** p - c * q.values
        assert np.max(np.abs(resid)) <= 1e-10

    def test_peak_scaling(self):
        p = 6
        for c in (0.5, 2.0):
            qc = sol.ground_state(p, c, GRID)
            q1 = sol.ground_state(p, 1.0, GRID)
            assert abs(qc.values.max() - c ** (1 / (p - 1)) * q1.values.max()) <= 1e-12

    def test_tail_wrap_rejected(self):
        small = g.make_grid(16.0, 64)
        with pytest.raises(sol.TailWrapError):
            sol.ground_state(6, 0.25, small)   # wide profile on a short domain

    def test_center_near_boundary_rejected(self):
        with pytest.raises(sol.TailWrapError):
            sol.ground_state(6, 1.0, GRID, center=GRID.length / 2 - 1.0)

    def test_no_overflow_in_far_tails(self):
        wide = g.make_grid(4096.0, 4096)
        q = sol.ground_state(6, 1.0, wide)
        assert np.all(np.isfinite(q.values))
        assert q.values.min() >= 0.0


class TestTravelingWave:
    def test_t0_is_ground_state(self):
        prm = sol.SolitonParams(1.0, -3.0)
        f = sol.soliton_field(6, prm, 0.0, GRID)
        q = sol.ground_state(6, 1.0, GRID, -3.0)
        assert np.array_equal(f.values, q.values)

    def test_time_evolution_is_translation(self):
        prm = sol.SolitonParams(1.3, -8.0)
        f0 = sol.soliton_field(6, prm, 0.0, GRID)
        ft = sol.soliton_field(6, prm, 5.0, GRID)
        shifted = g.shift(f0, 1.3 * 5.0)
        assert np.max(np.abs(ft.values - shifted.values)) <= 1e-12

    def test_mass_time_independent(self):
        prm = sol.SolitonParams(1.0, -5.0)
        m0 = g.inner_l2(*(sol.soliton_field(6, prm, 0.0, GRID),) * 2)
        m1 = g.inner_l2(*(sol.soliton_field(6, prm, 7.0, GRID),) * 2)
        assert abs(m1 - m0) <= 1e-12 * m0

    def test_moving_center_out_of_domain_rejected(self):
        prm = sol.SolitonParams(1.0, 0.0)
        with pytest.raises(sol.TailWrapError):
            sol.soliton_field(6, prm, 46.0, GRID)


def two_soliton_ensemble():
    # separation 56 at t=0, within the default admissibility
    return sol.SolitonEnsemble(6, (sol.SolitonParams(0.7, -28.0),
                                   sol.SolitonParams(1.3, 28.0)))


class TestEnsemble:
    def test_single_soliton_sum(self):
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(1.0, 2.0),))
        r = sol.ensemble_field(ens, 1.5, GRID)
        f = sol.soliton_field(6, sol.SolitonParams(1.0, 2.0), 1.5, GRID)
        assert np.array_equal(r.values, f.values)

    def test_speed_ordering_enforced(self):
        with pytest.raises(sol.SolitonError):
            sol.SolitonEnsemble(6, (sol.SolitonParams(1.3, 0.0), sol.SolitonParams(0.7, 10.0)))

    def test_mass_additivity_far_separated(self):
        ens = two_soliton_ensemble()
        grid = g.make_grid(192.0, 4096)
        r = sol.ensemble_field(ens, 0.0, grid)
        parts = [sol.soliton_field(6, prm, 0.0, grid) for prm in ens.params]
        cross = 2 * g.inner_l2(parts[0], parts[1])
        total = g.inner_l2(r, r)
        sep = abs(ens.params[1].x0 - ens.params[0].x0)
        bound = np.exp(-np.sqrt(4 * ens.sigma0_speed_bound()) * sep)
        assert abs(total - sum(g.inner_l2(f, f) for f in parts)) <= bound
        assert abs(cross) <= bound

    def test_mass_stable_in_time(self):
        ens = two_soliton_ensemble()
        grid = g.make_grid(192.0, 4096)
        sep = abs(ens.params[1].x0 - ens.params[0].x0)
        bound = np.exp(-np.sqrt(4 * ens.sigma0_speed_bound()) * sep)
        m0 = g.inner_l2(*(sol.ensemble_field(ens, 0.0, grid),) * 2)
        m5 = g.inner_l2(*(sol.ensemble_field(ens, 5.0, grid),) * 2)
        assert abs(m5 - m0) <= 2 * bound + 1e-12 * m0

    def test_linearity_in_soliton_list(self):
        ens2 = two_soliton_ensemble()
        grid = g.make_grid(192.0, 4096)
        ens1 = sol.SolitonEnsemble(6, (ens2.params[0],))
        extra = sol.soliton_field(6, ens2.params[1], 3.0, grid)
        r1 = sol.ensemble_field(ens1, 3.0, grid)
        r2 = sol.ensemble_field(ens2, 3.0, grid)
        assert np.array_equal(r2.values, r1.values + extra.values)

    def test_separation_violation(self):
        ens = sol.SolitonEnsemble(6, (sol.SolitonParams(0.7, 0.0),
                                      sol.SolitonParams(1.3, 10.0)))
        with pytest.raises(sol.SeparationError):
            sol.ensemble_field(ens, 0.0, g.make_grid(192.0, 4096))


class TestConservedQuantities:
    def test_zero_field(self):
        assert sol.conserved_quantities(g.zeros(GRID), 6) == (0.0, 0.0)

    def test_grid_doubling_stability(self):
        vals = []
        for n in (2048, 4096):
            grid = g.make_grid(96.0, n)
            q = sol.ground_state(6, 1.0, grid)
            vals.append(sol.conserved_quantities(q, 6))
        assert vals[0][0] > 0
        assert abs(vals[1][0] - vals[0][0]) / vals[0][0] <= 1e-10
        assert abs(vals[1][1] - vals[0][1]) / abs(vals[0][1]) <= 1e-10

    @pytest.mark.parametrize("p", [3, 5, 6])
    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_mass_scaling_law(self, p, c):
        q1 = sol.ground_state(p, 1.0, GRID)
        qc = sol.ground_state(p, c, GRID)
        ratio = g.inner_l2(qc, qc) / g.inner_l2(q1, q1)
        assert abs(ratio / c ** sol.mass_scaling_exponent(p) - 1.0) <= 1e-9

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_energy_scaling_law(self, c):
        p = 6
        _, e1 = sol.conserved_quantities(sol.ground_state(p, 1.0, GRID), p)
        _, ec = sol.conserved_quantities(sol.ground_state(p, c, GRID), p)
        s = sol.mass_scaling_exponent(p)
        assert abs(ec / (c ** (s + 1) * e1) - 1.0) <= 1e-9


class TestCriticality:
    def test_signs(self):
        assert sol.criticality(3)[0] == 1     # subcritical: stable
        assert sol.criticality(5)[0] == 0     # critical
        assert sol.criticality(6)[0] == -1    # supercritical: unstable

    def test_exponent_zero_at_critical(self):
        assert sol.criticality(5)[1] == 0.0

    def test_exponent_matches_measured_scaling(self):
        # the returned exponent is the one quadrature reproduces
        p, c = 6, 2.0
        q1 = sol.ground_state(p, 1.0, GRID)
        qc = sol.ground_state(p, c, GRID)
        ratio = g.inner_l2(qc, qc) / g.inner_l2(q1, q1)
        assert abs(ratio - c ** sol.criticality(p)[1]) <= 1e-9
