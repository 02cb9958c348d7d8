"""Acceptance criteria, checked quantitatively at desk scale.

Each criterion function returns a CriterionResult and is exercised both by
the test suite and by the `gkdv verify` command.  Shared heavy artifacts
(edge spectrum, coercivity constants, shooting runs) are computed once per
Resources instance.

Two printed values in the source material are adjudicated by measurement
rather than assumed: the eigenvalue of L on Q^{(p+1)/2} (measured
1 - ((p+1)/2)^2, not -(p^2+1)) and the mass-scaling exponent of int Q_c^2
(measured (5-p)/(2(p-1)), not (5-p)/(p-1)); both records appear in the
criterion details.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import coercivity as coer
from . import grid as g
from . import linop
from . import modulation as mod
from . import shooting as sh
from . import soliton as sol
from .evolver import EvolveOptions, Stepper, evolve, kato_rate


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: list[str] = dc_field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.name}"

    def report(self) -> str:
        return "\n".join([self.line()] + [f"    {d}" for d in self.details])


def _check(details: list[str], ok: bool, msg: str) -> bool:
    details.append(("ok   " if ok else "FAIL ") + msg)
    return ok


# --- desk-scale configurations ---------------------------------------------

P_MAIN = 6

# single-soliton shooting (criteria 9, 10, 12)
N1 = dict(
    p=P_MAIN,
    c=1.0,
    grid_L=96.0,
    grid_n=1024,
    T0=56.0,
    Sn=64.0,
    dt=2.5e-4,
)
# x0 centers the trajectory over the window
N1["x0"] = -0.5 * (N1["T0"] + N1["Sn"])

# b = 0 control run needs a window long enough for the numerical seed
# (~1e-9) to be amplified out of the tube at rate e0
N1_CONTROL = dict(T0=32.0, Sn=64.0)
N1_CONTROL["x0"] = -0.5 * (N1_CONTROL["T0"] + N1_CONTROL["Sn"])

# two-soliton shooting (criterion 11)
N2 = dict(
    p=P_MAIN,
    c=(0.7, 1.3),
    x0=(-75.0, -61.0),
    grid_L=144.0,
    grid_n=2048,
    T0=64.0,
    Sn=72.0,
    dt=2.5e-4,
)


class Resources:
    """Lazy shared artifacts for the acceptance suite."""

    def __init__(self):
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def spectrum_grid(self) -> g.Grid1D:
        return self._get("sgrid", linop.spectrum_grid)

    @property
    def spectrum(self) -> linop.EdgeSpectrum:
        return self._get("spec6", lambda: linop.edge_eigenpair(P_MAIN, self.spectrum_grid))

    def lambda_star(self, n: int = 2048) -> float:
        def compute():
            spec = self.spectrum
            grid = g.Grid1D(self.spectrum_grid.length, n)
            zp = spec.Zplus if n == self.spectrum_grid.n else g.resample(spec.Zplus, grid)
            zm = spec.Zminus if n == self.spectrum_grid.n else g.resample(spec.Zminus, grid)
            qx = g.derivative(sol.ground_state(P_MAIN, 1.0, grid), 1)
            lam, _ = coer.constrained_min_rayleigh(P_MAIN, 1.0, 0.0, [zp, zm, qx], grid)
            return lam
        return self._get(f"lambda_star_{n}", compute)

    def n1_setup(self, T0=None, Sn=None):
        key = ("n1", T0, Sn)

        def compute():
            cfg = N1
            grid = g.Grid1D(cfg["grid_L"], cfg["grid_n"])
            ens = sol.SolitonEnsemble(cfg["p"], (sol.SolitonParams(cfg["c"], cfg["x0"]),))
            spec = sh.TubeSpec.auto(ens, self.spectrum, T0 or cfg["T0"], Sn or cfg["Sn"], grid)
            basis = mod.ProfileBasis(ens, self.spectrum, grid)
            opts = EvolveOptions(dt=cfg["dt"])
            return ens, spec, basis, opts, grid
        return self._get(key, compute)

    @property
    def shoot_n1(self) -> sh.ShootResult:
        def compute():
            ens, spec, basis, opts, grid = self.n1_setup()
            return sh.find_a_hat(ens, spec, self.spectrum, opts, grid, basis=basis)
        return self._get("shoot_n1", compute)

    @property
    def shoot_n1_ext(self) -> sh.ShootResult:
        """Continuation solve at Sn + 2 seeded from shoot_n1."""
        def compute():
            base = self.shoot_n1
            ens, spec, basis, opts, grid = self.n1_setup(Sn=N1["Sn"] + 2.0)
            seed = base.a_hat_plus * np.exp(-1.5 * spec.rate * 2.0)
            return sh.find_a_hat(ens, spec, self.spectrum, opts, grid, basis=basis,
                                 seed=seed)
        return self._get("shoot_n1_ext", compute)

    @property
    def control_n1(self) -> sh.ShootResult:
        def compute():
            cfg = N1_CONTROL
            grid = g.Grid1D(N1["grid_L"], N1["grid_n"])
            ens = sol.SolitonEnsemble(N1["p"], (sol.SolitonParams(N1["c"], cfg["x0"]),))
            spec = sh.TubeSpec.auto(ens, self.spectrum, cfg["T0"], cfg["Sn"], grid)
            basis = mod.ProfileBasis(ens, self.spectrum, grid)
            opts = EvolveOptions(dt=N1["dt"])
            return sh.backward_run(np.zeros(1), ens, spec, self.spectrum, opts, grid,
                                   basis=basis, mode="tube",
                                   b_override=np.zeros(2))
        return self._get("control_n1", compute)

    def n2_setup(self, Sn=None):
        key = ("n2", Sn)

        def compute():
            cfg = N2
            grid = g.Grid1D(cfg["grid_L"], cfg["grid_n"])
            ens = sol.SolitonEnsemble(cfg["p"], tuple(
                sol.SolitonParams(c, x) for c, x in zip(cfg["c"], cfg["x0"])))
            spec = sh.TubeSpec.auto(ens, self.spectrum, cfg["T0"], Sn or cfg["Sn"], grid)
            basis = mod.ProfileBasis(ens, self.spectrum, grid)
            opts = EvolveOptions(dt=cfg["dt"])
            return ens, spec, basis, opts, grid
        return self._get(key, compute)

    @property
    def shoot_n2(self) -> sh.ShootResult:
        def compute():
            ens, spec, basis, opts, grid = self.n2_setup()
            return sh.find_a_hat(ens, spec, self.spectrum, opts, grid, basis=basis)
        return self._get("shoot_n2", compute)


# --- criteria ---------------------------------------------------------------

def criterion_1(res: Resources) -> CriterionResult:
    """Ground-state residual max|Q_xx + Q^p - Q_c| <= 1e-10."""
    details = []
    ok = True
    grid = g.Grid1D(128.0, 4096)
    for p in range(2, 9):
        worst = 0.0
        for c in (0.5, 1.0, 2.0):
            q = sol.ground_state(p, c, grid)
            resid = g.derivative(q, 2).values + q.values ** p - c * q.values
            worst = max(worst, float(np.max(np.abs(resid))))
        ok &= _check(details, worst <= 1e-10, f"p={p}: max residual {worst:.3e} <= 1e-10")
    return CriterionResult(1, "ground-state residual", ok, details)


def criterion_2(res: Resources) -> CriterionResult:
    """Mass-scaling law with exponent adjudication."""
    details = []
    ok = True
    grid = g.Grid1D(128.0, 4096)
    for p in (3, 5, 6):
        q1 = sol.ground_state(p, 1.0, grid)
        m1 = g.inner_l2(q1, q1)
        for c in (0.5, 2.0):
            qc = sol.ground_state(p, c, grid)
            ratio = g.inner_l2(qc, qc) / m1
            s_true = sol.mass_scaling_exponent(p)       # (5-p)/(2(p-1))
            s_print = (5.0 - p) / (p - 1.0)             # printed variant
            err_true = abs(ratio / c ** s_true - 1.0)
            err_print = abs(ratio / c ** s_print - 1.0)
            ok &= _check(
                details, err_true <= 1e-9,
                f"p={p}, c={c}: ratio {ratio:.12f} matches c^((5-p)/(2(p-1))) "
                f"to {err_true:.2e} (printed exponent (5-p)/(p-1) off by {err_print:.2e})",
            )
    details.append("adjudication: measurement selects exponent (5-p)/(2(p-1))")
    return CriterionResult(2, "mass-scaling law", ok, details)


def criterion_3(res: Resources) -> CriterionResult:
    """Edge eigenvalue exists iff supercritical."""
    details = []
    ok = True
    # p = 7, 8 profiles decay faster but carry higher wavenumbers: a shorter,
    # finer domain keeps the two-resolution gate converged
    grids = {6: res.spectrum_grid, 7: g.Grid1D(64.0, 2048), 8: g.Grid1D(64.0, 2048)}
    for p in (6, 7, 8):
        try:
            spec = res.spectrum if p == P_MAIN else linop.edge_eigenpair(p, grids[p])
            r = max(spec.residual_plus, spec.residual_minus)
            ok &= _check(details, spec.e0 > 0 and r <= 1e-8,
                         f"p={p}: e0 = {spec.e0:.8f} > 0, dual residual {r:.2e} <= 1e-8")
        except linop.EigenError as exc:
            ok &= _check(details, False, f"p={p}: {type(exc).__name__}: {exc}")
    for p in (2, 3, 4):
        try:
            linop.edge_eigenpair(p, res.spectrum_grid)
            ok &= _check(details, False, f"p={p}: unexpectedly found an eigenvalue")
        except linop.NoUnstableEigenvalueError:
            ok &= _check(details, True, f"p={p}: correctly reports no positive real eigenvalue")
    return CriterionResult(3, "supercriticality <-> edge eigenvalue", ok, details)


def criterion_4(res: Resources) -> CriterionResult:
    """Dual identities for the p=6 spectrum."""
    details = []
    spec = res.spectrum
    rp, rm, ortho = linop.dual_residuals(spec)
    nzp = g.norm_l2(spec.Zplus)
    nzm = g.norm_l2(spec.Zminus)
    refl = spec.Yplus.values[(-np.arange(spec.grid.n)) % spec.grid.n]
    drefl = float(np.max(np.abs(spec.Yminus.values - refl)))
    ok = True
    ok &= _check(details, max(rp, rm) <= 1e-8, f"||L(Z+-_x) -+ e0 Z+-|| = {max(rp, rm):.2e} <= 1e-8")
    ok &= _check(details, ortho <= 1e-10, f"|int Q_x Z+-| = {ortho:.2e} <= 1e-10")
    ok &= _check(details, abs(nzp - 1) <= 1e-12 and abs(nzm - 1) <= 1e-12,
                 f"||Z+|| - 1 = {nzp - 1:.2e}, ||Z-|| - 1 = {nzm - 1:.2e}")
    ok &= _check(details, drefl <= 1e-10, f"max|Y- - reflect(Y+)| = {drefl:.2e} <= 1e-10")
    return CriterionResult(4, "dual identities", ok, details)


def criterion_5(res: Resources) -> CriterionResult:
    """mu0 adjudication: L Q^{(p+1)/2} = mu0 Q^{(p+1)/2}."""
    details = []
    p = P_MAIN
    value, spread = linop.measure_mu0(p, res.spectrum_grid)
    sym = linop.mu0_symbolic(p)
    pap = linop.mu0_paper(p)
    ok = True
    ok &= _check(details, spread <= 1e-9, f"pointwise-ratio spread {spread:.2e} <= 1e-9")
    match_sym = abs(value - sym) <= 1e-6
    match_pap = abs(value - pap) <= 1e-6
    ok &= _check(details, match_sym or match_pap,
                 f"measured mu0 = {value:.9f}; symbolic 1-((p+1)/2)^2 = {sym}, "
                 f"printed -(p^2+1) = {pap}")
    which = "symbolic 1-((p+1)/2)^2" if match_sym else ("printed -(p^2+1)" if match_pap else "neither")
    details.append(f"adjudication: measurement matches the {which} value")
    return CriterionResult(5, "mu0 adjudication", ok, details)


def criterion_6(res: Resources) -> CriterionResult:
    """Coercivity of (Lv,v) under the three constraint sets."""
    details = []
    ok = True
    lam_fine = res.lambda_star(2048)
    lam_coarse = res.lambda_star(1024)
    rel = abs(lam_fine - lam_coarse) / abs(lam_fine)
    ok &= _check(details, lam_fine > 0, f"lambda*({{Z+,Z-,Qx}}) = {lam_fine:.8f} > 0")
    ok &= _check(details, rel <= 1e-6, f"two-resolution change {rel:.2e} <= 1e-6")

    grid = g.Grid1D(res.spectrum_grid.length, 1024)
    q = sol.ground_state(P_MAIN, 1.0, grid)
    qx = g.derivative(q, 1)
    qp = g.Field(grid, q.values ** ((P_MAIN + 1) / 2.0))
    lam_qx, _ = coer.constrained_min_rayleigh(P_MAIN, 1.0, 0.0, [qx], grid)
    ok &= _check(details, lam_qx < 0, f"lambda({{Qx}}) = {lam_qx:.6f} < 0")
    # negative witness at v = Q^{(p+1)/2}
    lv = linop.apply_L(qp, P_MAIN)
    quot = g.inner_l2(lv, qp) / g.norm_h1(qp) ** 2
    ok &= _check(details, quot < 0, f"witness (L v, v)/||v||_H1^2 at v=Q^{{(p+1)/2}}: {quot:.6f} < 0")
    lam_claim5, _ = coer.constrained_min_rayleigh(P_MAIN, 1.0, 0.0, [qp, qx], grid)
    ok &= _check(details, lam_claim5 > 0, f"lambda({{Q^{{(p+1)/2}},Qx}}) = {lam_claim5:.6f} > 0")
    return CriterionResult(6, "coercivity (Lemma-style bounds)", ok, details)


def criterion_7(res: Resources) -> CriterionResult:
    """Evolver accuracy: propagation, conservation, reversibility, order."""
    details = []
    ok = True
    p, c = P_MAIN, 1.0
    grid = g.Grid1D(128.0, 4096)
    prm = sol.SolitonParams(c, 0.0)
    u0 = sol.soliton_field(p, prm, 0.0, grid)
    traj = evolve(u0, p, 0.0, 1.0, EvolveOptions(dt=1.25e-4))
    exact = sol.soliton_field(p, prm, 1.0, grid)
    err = g.norm_h1(g.Field(grid, traj.final_field.values - exact.values))
    ok &= _check(details, err <= 1e-6, f"H1 propagation error over [0,1]: {err:.3e} <= 1e-6")
    ok &= _check(details, traj.mass_drift() <= 1e-10,
                 f"mass drift {traj.mass_drift():.3e} <= 1e-10")
    ok &= _check(details, traj.energy_drift() <= 1e-9,
                 f"energy drift {traj.energy_drift():.3e} <= 1e-9")

    grid2 = g.Grid1D(64.0, 2048)
    u0 = sol.soliton_field(p, prm, 0.0, grid2)
    fwd = evolve(u0, p, 0.0, 1.0, EvolveOptions(dt=3.2e-5))
    back = evolve(fwd.final_field, p, 1.0, 0.0, EvolveOptions(dt=3.2e-5))
    rt = g.norm_h1(g.Field(grid2, back.final_field.values - u0.values))
    ok &= _check(details, rt <= 1e-8, f"forward-backward roundtrip: {rt:.3e} <= 1e-8")

    errs = []
    for dt in (1e-3, 5e-4):
        # coarse steps on purpose: the conservation thresholds of the
        # criterion apply to the production run above, not the order study
        t = evolve(u0, p, 0.0, 1.0, EvolveOptions(dt=dt, tol_mass=1e-7, tol_energy=1e-6))
        e1 = g.norm_h1(g.Field(grid2, t.final_field.values - sol.soliton_field(p, prm, 1.0, grid2).values))
        errs.append(e1)
    order = np.log2(errs[0] / errs[1])
    ok &= _check(details, errs[0] / errs[1] >= 12.0 and order >= 3.5,
                 f"halving dt shrinks the error {errs[0] / errs[1]:.1f}x (order {order:.2f} >= 3.5)")
    return CriterionResult(7, "evolver accuracy and reversibility", ok, details)


def criterion_8(res: Resources) -> CriterionResult:
    """Kato identity along a two-soliton trajectory, 50 sampled times."""
    details = []
    cfg = N2
    grid = g.Grid1D(cfg["grid_L"], cfg["grid_n"])
    ens = sol.SolitonEnsemble(cfg["p"], tuple(
        sol.SolitonParams(c, x) for c, x in zip(cfg["c"], cfg["x0"])))
    sigma0 = sh.compute_sigma0(ens, res.spectrum)
    t_start = cfg["T0"]
    dt = 2.5e-4
    stepper = Stepper(grid, ens.p, dt)
    uh = sol.ensemble_field(ens, t_start, grid).hat()
    n_samples = 50
    steps_between = 160          # 0.04 time units
    tol = max(1e-6, 10.0 * dt * dt)
    worst = 0.0
    for s in range(n_samples):
        t_mid = t_start + (s * steps_between + 1) * dt
        u_prev = g.from_hat(grid, uh)
        uh = stepper.step(uh)
        u_mid = g.from_hat(grid, uh)
        uh = stepper.step(uh)
        u_next = g.from_hat(grid, uh)
        # frozen weight at the sample time
        prm = ens.params[0], ens.params[1]
        m1 = 0.5 * ((prm[0].c + prm[1].c) * t_mid + prm[0].x0 + prm[1].x0)
        f, fx, fxxx = sh.cutoff_weight_fields(grid, m1, t_mid, sigma0)
        i_prev = float(np.sum(u_prev.values ** 2 * f.values) * grid.dx)
        i_next = float(np.sum(u_next.values ** 2 * f.values) * grid.dx)
        fd = (i_next - i_prev) / (2.0 * dt)
        rate = kato_rate(u_mid, ens.p, f, fx, fxxx)
        worst = max(worst, abs(fd - rate))
        for _ in range(steps_between - 2):
            uh = stepper.step(uh)
    okv = worst <= tol
    details_ok = _check(details, okv,
                        f"max |finite difference - kato_rate| over {n_samples} samples: "
                        f"{worst:.3e} <= {tol:.1e}")
    return CriterionResult(8, "Kato identity", details_ok, details)


def criterion_9(res: Resources) -> CriterionResult:
    """Backward separation of a 1e-3 Z+ final-data difference at rate e0 c^{3/2}."""
    details = []
    ens, spec, basis, opts, grid = res.n1_setup()
    delta = 1e-3
    run0 = sh.backward_run(np.zeros(1), ens, spec, res.spectrum, opts, grid,
                           basis=basis, mode="horizon", b_override=np.zeros(2),
                           with_H=False, guard_factor=1e12)
    run1 = sh.backward_run(np.zeros(1), ens, spec, res.spectrum, opts, grid,
                           basis=basis, mode="horizon",
                           b_override=np.array([delta, 0.0]),
                           with_H=False, guard_factor=1e12)
    t0s = run0.row_times()
    t1s = run1.row_times()
    n = min(t0s.size, t1s.size)
    assert np.allclose(t0s[:n], t1s[:n])
    sep = np.abs(np.array([r1.a_plus[0] - r0.a_plus[0]
                           for r0, r1 in zip(run0.rows[:n], run1.rows[:n])]))
    mask = (sep >= 1e-3) & (sep <= 1e-1)
    fit = sh.fit_decay(t0s[:n][mask], sep[mask])
    target = res.spectrum.e0 * ens.speeds[0] ** 1.5
    rel = abs(abs(fit.slope) - target) / target
    ok = _check(details, mask.sum() >= 10 and rel <= 0.2,
                f"fitted backward growth rate {abs(fit.slope):.4f} vs e0 c^{{3/2}} = {target:.4f} "
                f"({100 * rel:.1f}% off, window points {int(mask.sum())}, R^2 = {fit.r2:.4f})")
    details.append(f"separation measured on the unstable coefficients a+ "
                   f"(H1 distance mixes in the non-modal transient)")
    return CriterionResult(9, "instability growth rate", ok, details)


def criterion_10(res: Resources) -> CriterionResult:
    """End-to-end N=1 construction plus the b=0 falsification control."""
    details = []
    ok = True
    r = res.shoot_n1
    ens, spec, basis, opts, grid = res.n1_setup()
    ball = spec.ball_radius
    ok &= _check(details, r.success, f"find_a_hat succeeded in {r.n_runs} runs")
    ok &= _check(details, float(np.abs(r.a_hat_plus[0])) <= ball,
                 f"|a^+| = {abs(r.a_hat_plus[0]):.3e} <= ball {ball:.3e}")
    ok &= _check(details, all(row.inside for row in r.rows), "tube never exited")
    fit = r.decay_fit
    ok &= _check(details, fit is not None and fit.slope <= -spec.rate,
                 f"decay-fit slope {fit.slope:.4f} <= -sigma0^{{3/2}} = {-spec.rate:.4f} "
                 f"(R^2 = {fit.r2:.3f})")
    ok &= _check(details, fit is not None and fit.r2 >= 0.9, f"decay fit R^2 {fit.r2:.3f} >= 0.9")
    env = max(float(np.linalg.norm(row.a_minus)) * np.exp(1.5 * spec.rate * row.t)
              for row in r.rows)
    ok &= _check(details, env <= 1.0,
                 f"a- envelope: max e^{{(3/2) sigma0^{{3/2}} t}}||a-|| = {env:.3e} <= 1")

    ctrl = res.control_n1
    exited = (not ctrl.success) and ctrl.T_exit > N1_CONTROL["T0"]
    ok &= _check(details, exited,
                 f"b=0 control exits the tube at t = {ctrl.T_exit:.2f} "
                 f"({ctrl.exit_condition}) before reaching T0 = {N1_CONTROL['T0']:g}")
    return CriterionResult(10, "end-to-end construction, N=1", ok, details)


def criterion_11(res: Resources) -> CriterionResult:
    """End-to-end N=2 construction with reconstruction and Jacobian checks."""
    details = []
    ok = True
    r = res.shoot_n2
    ens, spec, basis, opts, grid = res.n2_setup()
    ok &= _check(details, r.success, f"Broyden find_a_hat succeeded in {r.n_runs} runs")
    ok &= _check(details, all(row.inside for row in r.rows),
                 "all Definition-1 conditions hold at every check")
    lam = res.lambda_star(2048)
    K = coer.variation_constant(lam, ens)
    worst = -np.inf
    for row in r.rows:
        lhs = row.v_h1 ** 2
        rhs = K * float(np.sum(row.H)) + K ** 2 * float(np.sum(row.a_plus ** 2 + row.a_minus ** 2))
        worst = max(worst, lhs - rhs)
    ok &= _check(details, worst <= 0.0,
                 f"H1 reconstruction ||v||^2 <= K sum H_j + K^2 sum a^2 holds at every check "
                 f"(max violation {worst:.3e}, K = {K:.2f})")

    # finite-difference Jacobian of b -> (a+, a-) against the dual Gram matrix
    P = mod.dual_gram(ens, res.spectrum, grid, spec.Sn, basis=basis)
    N = ens.n_solitons
    h = 1e-6
    J = np.zeros((2 * N, 2 * N))
    for i in range(2 * N):
        for sgn, w in ((+1, 0.5), (-1, -0.5)):
            b = np.zeros(2 * N)
            b[i] = sgn * h
            u = mod.assemble_final_field(b, ens, spec.Sn, basis)
            st = mod.decompose(u, ens, spec.Sn, basis=basis)
            J[:, i] += w / h * np.concatenate([st.a_plus, st.a_minus])
    inter_tol = np.exp(-spec.rate * spec.Sn) + 1e-6
    dev = float(np.max(np.abs(J - P)))
    ok &= _check(details, dev <= inter_tol,
                 f"final-data Jacobian matches the dual Gram block matrix to {dev:.2e} "
                 f"<= {inter_tol:.2e}")
    # P structure: diagonal blocks diag(||Z_j||^2), off blocks gram * diag
    A = np.diag(P)[:N]
    gram = res.spectrum.gram
    struct = np.block([[np.diag(A), gram * np.diag(A)],
                       [gram * np.diag(A), np.diag(A)]])
    sdev = float(np.max(np.abs(P - struct)))
    ok &= _check(details, sdev <= inter_tol,
                 f"P block structure [[A, gA],[gA, A]] holds to {sdev:.2e}")
    return CriterionResult(11, "end-to-end construction, N=2", ok, details)


def criterion_12(res: Resources) -> CriterionResult:
    """Continuation echo of compactness: Sn and Sn+2 solutions agree."""
    details = []
    ok = True
    r1 = res.shoot_n1
    r2 = res.shoot_n1_ext
    ens, spec, basis, opts, grid = res.n1_setup()
    rate = spec.rate
    rescaled = r2.a_hat_plus * np.exp(1.5 * rate * 2.0)
    scale = max(np.linalg.norm(r1.a_hat_plus), 1e-300)
    rel = float(np.linalg.norm(rescaled - r1.a_hat_plus) / scale)
    ok &= _check(details, rel <= 0.10,
                 f"a^+(Sn+2) rescaled by e^{{(3/2) sigma0^{{3/2}} dSn}} agrees with a^+(Sn) "
                 f"to {100 * rel:.1f}% (<= 10%)")
    ratio = float(r2.a_hat_plus[0] / r1.a_hat_plus[0]) if r1.a_hat_plus[0] != 0 else np.nan
    ball_rel = float(np.linalg.norm(rescaled - r1.a_hat_plus) / spec.ball_radius)
    details.append(
        f"diagnostics: a^+(Sn)={r1.a_hat_plus[0]:.4e}, a^+(Sn+2)={r2.a_hat_plus[0]:.4e}, "
        f"raw ratio {ratio:.4f} (window-stationary drift root), "
        f"rescaled mismatch relative to the shooting ball {ball_rel:.2e}")
    d = g.norm_h1(g.Field(grid, r1.u_final.values - r2.u_final.values))
    ok &= _check(details, d <= 1e-3, f"u(T0) fields differ by {d:.3e} <= 1e-3 in H1")
    return CriterionResult(12, "continuation echo of compactness", ok, details)


ALL_CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                criterion_11, criterion_12]
FAST_CRITERIA = ALL_CRITERIA[:8]


def run_criteria(res: Resources | None = None, full: bool = True,
                 printer=print) -> list[CriterionResult]:
    res = res or Resources()
    out = []
    for fn in (ALL_CRITERIA if full else FAST_CRITERIA):
        try:
            result = fn(res)
        except Exception as exc:  # a crash is a failed criterion, not a crash of the suite
            number = int(fn.__name__.split("_")[1])
            result = CriterionResult(number, fn.__doc__.splitlines()[0], False,
                                     [f"exception: {type(exc).__name__}: {exc}"])
        out.append(result)
        if printer:
            printer(result.report())
    return out
