import numpy as np
import pytest

from gkdv import evolver as ev
from gkdv import grid as g
from gkdv import soliton as sol
from gkdv.shooting import cutoff_weight_fields

P = 6
GRID = g.make_grid(64.0, 1024)


class TestBasics:
    def test_zero_is_fixed_point(self):
        traj = ev.evolve(g.zeros(GRID), P, 0.0, 0.5, ev.EvolveOptions(dt=1e-3))
        assert np.all(traj.final_field.values == 0.0)

    def test_zero_span(self):
        u0 = sol.ground_state(P, 1.0, GRID)
        traj = ev.evolve(u0, P, 1.0, 1.0)
        assert traj.final_time == 1.0
        assert np.array_equal(traj.final_field.values, u0.values)

    def test_underresolved_data_rejected(self, rng):
        noisy = g.Field(GRID, rng.normal(size=GRID.n))
        with pytest.raises(ev.EvolveError):
            ev.evolve(noisy, P, 0.0, 0.1)

    def test_stable_dt_rule(self):
        assert ev.stable_dt(GRID, 1.0, P, 1.0) == pytest.approx(0.1 * GRID.dx)
        assert ev.stable_dt(GRID, 1.0, P, 1e-5) == 1e-5

    def test_invalid_options(self):
        with pytest.raises(ev.EvolveError):
            ev.EvolveOptions(dt=-1.0)
        with pytest.raises(ev.EvolveError):
            ev.EvolveOptions(tol_mass=0.0)


class TestSolitonPropagation:
    def test_h1_error_and_conservation(self):
        prm = sol.SolitonParams(1.0, 0.0)
        u0 = sol.soliton_field(P, prm, 0.0, GRID)
        traj = ev.evolve(u0, P, 0.0, 1.0, ev.EvolveOptions(dt=1.25e-4))
        exact = sol.soliton_field(P, prm, 1.0, GRID)
        err = g.norm_h1(g.Field(GRID, traj.final_field.values - exact.values))
        assert err <= 1e-6
        assert traj.mass_drift() <= 1e-10
        assert traj.energy_drift() <= 1e-9

    def test_backward_propagation(self):
        prm = sol.SolitonParams(1.0, 0.0)
        u0 = sol.soliton_field(P, prm, 0.0, GRID)
        traj = ev.evolve(u0, P, 0.0, -1.0, ev.EvolveOptions(dt=1.25e-4))
        exact = sol.soliton_field(P, prm, -1.0, GRID)
        err = g.norm_h1(g.Field(GRID, traj.final_field.values - exact.values))
        assert err <= 1e-6

    def test_roundtrip(self):
        prm = sol.SolitonParams(1.0, 0.0)
        u0 = sol.soliton_field(P, prm, 0.0, GRID)
        opts = ev.EvolveOptions(dt=4e-5)
        fwd = ev.evolve(u0, P, 0.0, 0.25, opts)
        back = ev.evolve(fwd.final_field, P, 0.25, 0.0, opts)
        err = g.norm_h1(g.Field(GRID, back.final_field.values - u0.values))
        assert err <= 1e-8

    def test_temporal_convergence(self):
        prm = sol.SolitonParams(1.0, 0.0)
        u0 = sol.soliton_field(P, prm, 0.0, GRID)
        exact = sol.soliton_field(P, prm, 1.0, GRID)
        errs = []
        for dt in (1e-3, 5e-4):
            traj = ev.evolve(u0, P, 0.0, 1.0,
                             ev.EvolveOptions(dt=dt, tol_mass=1e-7, tol_energy=1e-6))
            errs.append(g.norm_h1(g.Field(GRID, traj.final_field.values - exact.values)))
        assert errs[0] / errs[1] >= 12.0


class TestFailureModes:
    def test_blowup_reported_with_time(self):
        # large supercritical data: energy strongly negative, H1 blows up
        q = sol.ground_state(P, 1.0, GRID)
        u0 = g.Field(GRID, 3.0 * q.values)
        with pytest.raises(ev.BlowUpError) as exc:
            ev.evolve(u0, P, 0.0, 5.0,
                      ev.EvolveOptions(dt=2e-4, check_conservation=False))
        assert 0.0 < exc.value.t <= 5.0

    def test_conservation_guard(self):
        u0 = sol.ground_state(P, 1.0, GRID)
        with pytest.raises(ev.ConservationError):
            ev.evolve(u0, P, 0.0, 0.5,
                      ev.EvolveOptions(dt=1e-3, tol_mass=1e-16, save_every=100))

    def test_trajectory_monotonicity_guard(self):
        traj = ev.Trajectory(p=P)
        u = sol.ground_state(P, 1.0, GRID)
        traj.append(0.0, u)
        traj.append(1.0, u)
        with pytest.raises(ev.EvolveError):
            traj.append(0.5, u)


class TestKatoRate:
    def test_constant_weight_gives_zero(self):
        u = sol.ground_state(P, 1.0, GRID)
        one = g.Field(GRID, np.ones(GRID.n))
        zero = g.zeros(GRID)
        assert ev.kato_rate(u, P, one, zero, zero) == 0.0

    def test_zero_field_gives_zero(self):
        f, fx, fxxx = cutoff_weight_fields(GRID, 0.0, 4.0, 0.15)
        assert ev.kato_rate(g.zeros(GRID), P, f, fx, fxxx) == 0.0

    def test_finite_difference_oracle_single_soliton(self):
        # d/dt int u^2 f matches the identity along the flow (frozen weight)
        prm = sol.SolitonParams(1.0, 0.0)
        u0 = sol.soliton_field(P, prm, 4.0, GRID)
        dt = 2.5e-4
        stepper = ev.Stepper(GRID, P, dt)
        uh = u0.hat()
        f, fx, fxxx = cutoff_weight_fields(GRID, 2.0, 4.0, 0.15)
        worst = 0.0
        for k in range(10):
            u_prev = g.from_hat(GRID, uh)
            uh = stepper.step(uh)
            u_mid = g.from_hat(GRID, uh)
            uh = stepper.step(uh)
            u_next = g.from_hat(GRID, uh)
            fd = (np.sum(u_next.values ** 2 * f.values)
                  - np.sum(u_prev.values ** 2 * f.values)) * GRID.dx / (2 * dt)
            rate = ev.kato_rate(u_mid, P, f, fx, fxxx)
            worst = max(worst, abs(fd - rate))
            for _ in range(48):
                uh = stepper.step(uh)
        assert worst <= max(1e-6, 10 * dt * dt)

    def test_weight_derivatives_match_finite_differences(self):
        from gkdv.shooting import arctan_cutoff
        f, fx, fxxx = cutoff_weight_fields(GRID, 3.0, 9.0, 0.2)
        h = 1e-3
        ix = np.arange(GRID.n // 4, 3 * GRID.n // 4, 25)
        xs = GRID.x[ix]
        s = lambda x: arctan_cutoff((x - 3.0) / 3.0, 0.2)
        fd1 = (s(xs + h) - s(xs - h)) / (2 * h)
        fd3 = (s(xs + 2 * h) - 2 * s(xs + h) + 2 * s(xs - h) - s(xs - 2 * h)) / (2 * h ** 3)
        assert np.max(np.abs(fx.values[ix] - fd1)) <= 1e-6
        assert np.max(np.abs(fxxx.values[ix] - fd3)) <= 1e-4
