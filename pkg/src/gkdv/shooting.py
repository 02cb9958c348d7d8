"""Tube definition, backward shooting runs, and the unstable-direction search.

A backward run prepares u(Sn) = R(Sn) + sum b+-_j Z+-_j(Sn) from a target
a^+ (final_data), integrates gKdV backward, and every few steps decomposes
the state, evaluates the five tube conditions

    ||u - R||_H1 <= eps,
    e^{sigma0^{3/2} t} ||v||_H1 <= r_v,       e^{sigma0^{3/2} t} ||y|| <= r_y,
    e^{(3/2) sigma0^{3/2} t} ||a-|| <= r_a-,  e^{(3/2) sigma0^{3/2} t} ||a+|| <= r_a+,

and logs modulation data and localized functionals.  find_a_hat locates the
a^+ for which the run reaches T0 without leaving the tube: scalar bisection
on the sign of a+ at exit for one soliton, damped Broyden on the
fixed-horizon map a^+ -> a+(T0) for several, with Sn-continuation reusing
rescaled solutions as seeds.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field as dc_field
from enum import Enum
from pathlib import Path

import numpy as np

from .coercivity import localized_form_H
from .evolver import EvolveOptions, Stepper, stable_dt
from .grid import Field, Grid1D, derivative, from_hat, norm_h1, norm_h1_hat
from .linop import EdgeSpectrum
from .modulation import (ModulationError, ProfileBasis, assemble_final_field,
                         decompose, final_data, modulation_radius)
from .soliton import SolitonEnsemble, ensemble_field


class ShootingError(RuntimeError):
    pass


class BracketError(ShootingError):
    pass


def compute_sigma0(ens: SolitonEnsemble, spectrum: EdgeSpectrum) -> float:
    """sigma0 = 1/4 min{eta0, e0^{2/3} c_1, c_1, c_2-c_1, ..., c_N-c_{N-1}}."""
    c = ens.speeds
    terms = [spectrum.eta0, spectrum.e0 ** (2.0 / 3.0) * c[0], c[0]]
    terms += list(np.diff(c))
    return 0.25 * float(min(terms))


def shooting_ball_radius(sigma0: float, Sn: float) -> float:
    """Radius e^{-(3/2) sigma0^{3/2} Sn} of the admissible a^+ ball."""
    return float(np.exp(-1.5 * sigma0 ** 1.5 * Sn))


@dataclass(frozen=True)
class TubeSpec:
    sigma0: float
    eps: float
    T0: float
    Sn: float
    r_v: float = 1.0
    r_y: float = 1.0
    r_aminus: float = 1.0
    r_aplus: float = 1.0

    def __post_init__(self):
        if not (0 < self.T0 < self.Sn):
            raise ShootingError(f"need 0 < T0 < Sn, got T0={self.T0}, Sn={self.Sn}")
        if self.sigma0 <= 0 or self.eps <= 0:
            raise ShootingError("sigma0 and eps must be positive")

    @property
    def rate(self) -> float:
        return self.sigma0 ** 1.5

    @property
    def ball_radius(self) -> float:
        return shooting_ball_radius(self.sigma0, self.Sn)

    @staticmethod
    def auto(ens: SolitonEnsemble, spectrum: EdgeSpectrum, T0: float, Sn: float,
             grid: Grid1D, eps: float | None = None, **radii) -> "TubeSpec":
        sigma0 = compute_sigma0(ens, spectrum)
        if eps is None:
            eps = modulation_radius(ens, grid)
        return TubeSpec(sigma0=sigma0, eps=eps, T0=T0, Sn=Sn, **radii)


class FailedCondition(Enum):
    NONE = "none"
    CLOSENESS = "closeness"
    VBALL = "v_ball"
    YBALL = "y_ball"
    AMINUS_BALL = "a_minus_ball"
    APLUS_SPHERE = "a_plus_sphere"


@dataclass(frozen=True)
class TubeStatus:
    inside: bool
    failed_condition: FailedCondition
    margin: float
    scaled: dict

    def __post_init__(self):
        if self.inside != (self.failed_condition is FailedCondition.NONE):
            raise ShootingError("inside flag inconsistent with failed_condition")


def tube_check(state, u: Field, ens: SolitonEnsemble, spec: TubeSpec) -> TubeStatus:
    """Evaluate the five tube conditions; report first failure and least slack."""
    t = state.t
    r = ensemble_field(ens, t, u.grid, min_separation=0.0)
    dist = norm_h1(Field(u.grid, u.values - r.values))
    g1 = np.exp(spec.rate * t)
    g32 = np.exp(1.5 * spec.rate * t)
    checks = [
        (FailedCondition.CLOSENESS, dist / spec.eps),
        (FailedCondition.VBALL, g1 * norm_h1(state.v) / spec.r_v),
        (FailedCondition.YBALL, g1 * float(np.linalg.norm(state.y)) / spec.r_y),
        (FailedCondition.AMINUS_BALL, g32 * float(np.linalg.norm(state.a_minus)) / spec.r_aminus),
        (FailedCondition.APLUS_SPHERE, g32 * float(np.linalg.norm(state.a_plus)) / spec.r_aplus),
    ]
    failed = FailedCondition.NONE
    for cond, q in checks:
        if q > 1.0:
            failed = cond
            break
    margin = float(min(1.0 - q for _, q in checks))
    return TubeStatus(inside=failed is FailedCondition.NONE, failed_condition=failed,
                      margin=margin, scaled={c.value: q for c, q in checks})


def arctan_cutoff(x: np.ndarray, sigma0: float) -> np.ndarray:
    """psi(x) = (2/pi) arctan(exp(-sqrt(sigma0) x)); 1 at -inf, 0 at +inf."""
    return (2.0 / np.pi) * np.arctan(np.exp(-np.sqrt(sigma0) * x))


def cutoff_weight_fields(grid: Grid1D, m: float, t: float, sigma0: float
                         ) -> tuple[Field, Field, Field]:
    """The weight psi((x - m)/sqrt(t)) with analytic first and third x-derivatives.

    psi is not periodic, so its derivatives are evaluated in closed form
    (sech/tanh of the scaled argument) instead of spectrally.
    """
    s = np.sqrt(sigma0) / np.sqrt(t)
    u = s * (grid.x - m)
    sech = 2.0 * np.exp(-np.abs(u)) / (1.0 + np.exp(-2.0 * np.abs(u)))
    tanh = np.tanh(u)
    f = arctan_cutoff((grid.x - m) / np.sqrt(t), sigma0)
    fx = -(s / np.pi) * sech
    fxxx = (s ** 3 / np.pi) * sech * (sech ** 2 - tanh ** 2)
    return Field(grid, f), Field(grid, fx), Field(grid, fxxx)


def diagnostics_weights(ens: SolitonEnsemble, y: np.ndarray, t: float,
                        sigma0: float, grid: Grid1D) -> tuple[list[Field], list[Field]]:
    """Partition-of-unity weights (psi_j, phi_j) separating neighboring solitons.

    psi_j(t,x) = psi((x - m_j(t))/sqrt(t)) with m_j the midpoint of the
    modulated trajectories of solitons j and j+1; psi_N = 1; phi_1 = psi_1,
    phi_j = psi_j - psi_{j-1}.
    """
    if t <= 0:
        raise ShootingError("weights need t > 0 (the 1/sqrt(t) profile scaling)")
    y = np.asarray(y, dtype=float)
    N = ens.n_solitons
    psis = []
    for j in range(N - 1):
        a, b = ens.params[j], ens.params[j + 1]
        m_j = 0.5 * ((a.c + b.c) * t + (a.x0 + b.x0) + (y[j] + y[j + 1]))
        psis.append(Field(grid, arctan_cutoff((grid.x - m_j) / np.sqrt(t), sigma0)))
    psis.append(Field(grid, np.ones(grid.n)))
    phis = [psis[0]]
    for j in range(1, N):
        phis.append(Field(grid, psis[j].values - psis[j - 1].values))
    return psis, phis


def localized_functionals(u: Field, ens: SolitonEnsemble, weights: list[Field],
                          p: int) -> tuple[np.ndarray, np.ndarray]:
    """Localized mass and energy M_j = int u^2 phi_j,
    E_j = int (u_x^2/2 - u^{p+1}/(p+1)) phi_j."""
    ux = derivative(u, 1)
    dx = u.grid.dx
    M = np.zeros(len(weights))
    E = np.zeros(len(weights))
    for j, w in enumerate(weights):
        M[j] = np.sum(u.values ** 2 * w.values) * dx
        E[j] = np.sum((0.5 * ux.values ** 2 - u.values ** (p + 1) / (p + 1)) * w.values) * dx
    return M, E


@dataclass
class LogRow:
    t: float
    dist_r_h1: float
    v_h1: float
    v_l2: float
    y: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    inside: bool
    failed: str
    margin: float
    scaled: dict            # the five tube quantities, each <= 1 inside
    M: np.ndarray
    E: np.ndarray
    H: np.ndarray
    mass: float
    energy: float


@dataclass
class DecayFit:
    slope: float
    intercept: float
    r2: float


def fit_decay(times: np.ndarray, values: np.ndarray) -> DecayFit:
    """Linear fit of log(values) against time."""
    logv = np.log(np.maximum(values, 1e-300))
    slope, intercept = np.polyfit(times, logv, 1)
    pred = slope * times + intercept
    ss_res = float(np.sum((logv - pred) ** 2))
    ss_tot = float(np.sum((logv - logv.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(slope=float(slope), intercept=float(intercept), r2=r2)


@dataclass
class ShootResult:
    a_hat_plus: np.ndarray
    b: np.ndarray | None
    rows: list[LogRow]
    T_exit: float
    success: bool
    exit_condition: str
    decay_fit: DecayFit | None
    sigma0: float
    e0: float
    aborted: str | None = None
    u_final: Field | None = None
    n_runs: int = 1
    search: list = dc_field(default_factory=list)

    @property
    def a_plus_final(self) -> np.ndarray:
        return self.rows[-1].a_plus

    def row_times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    def save(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        N = self.a_hat_plus.size
        meta = {
            "a_hat_plus": list(self.a_hat_plus),
            "b": list(self.b) if self.b is not None else None,
            "success": self.success,
            "T_exit": self.T_exit,
            "exit_condition": self.exit_condition,
            "sigma0": self.sigma0,
            "e0": self.e0,
            "aborted": self.aborted,
            "n_checks": len(self.rows),
            "n_runs": self.n_runs,
            "decay_fit": None if self.decay_fit is None else {
                "slope": self.decay_fit.slope,
                "intercept": self.decay_fit.intercept,
                "r2": self.decay_fit.r2,
            },
        }
        (out / "result.json").write_text(json.dumps(meta, indent=2))
        qnames = [c.value for c in FailedCondition if c is not FailedCondition.NONE]
        cols = (["t", "dist_r_h1", "v_h1", "v_l2", "inside", "failed", "margin",
                 "mass", "energy"]
                + [f"q_{name}" for name in qnames]
                + [f"y_{j+1}" for j in range(N)]
                + [f"a_plus_{j+1}" for j in range(N)]
                + [f"a_minus_{j+1}" for j in range(N)]
                + [f"M_{j+1}" for j in range(N)]
                + [f"E_{j+1}" for j in range(N)]
                + [f"H_{j+1}" for j in range(N)])
        fmt = lambda x: f"{x:.17g}"
        with open(out / "series.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in self.rows:
                w.writerow([fmt(r.t), fmt(r.dist_r_h1), fmt(r.v_h1), fmt(r.v_l2),
                            int(r.inside), r.failed, fmt(r.margin),
                            fmt(r.mass), fmt(r.energy)]
                           + [fmt(r.scaled[name]) for name in qnames]
                           + [fmt(v) for v in r.y]
                           + [fmt(v) for v in r.a_plus]
                           + [fmt(v) for v in r.a_minus]
                           + [fmt(v) for v in r.M]
                           + [fmt(v) for v in r.E]
                           + [fmt(v) for v in r.H])


def backward_run(a_hat_plus, ens: SolitonEnsemble, spec: TubeSpec,
                 spectrum: EdgeSpectrum, opts: EvolveOptions, grid: Grid1D, *,
                 basis: ProfileBasis | None = None,
                 mode: str = "tube",
                 b_override: np.ndarray | None = None,
                 check_interval: float = 0.05,
                 with_H: bool = True,
                 guard_factor: float = 10.0) -> ShootResult:
    """Integrate prepared final data backward from Sn toward T0.

    mode "tube": stop at the first tube exit (the exit-time realization of
    Definition 1).  mode "horizon": ignore tube exits and integrate down to
    T0 (the root-finder map), aborting only when ||u - R||_H1 exceeds
    guard_factor * eps or the evolver blows up.
    """
    if mode not in ("tube", "horizon"):
        raise ShootingError(f"unknown mode {mode!r}")
    if basis is None:
        basis = ProfileBasis(ens, spectrum, grid)
    a_hat_plus = np.asarray(a_hat_plus, dtype=float).reshape(ens.n_solitons)

    if b_override is not None:
        b = np.asarray(b_override, dtype=float)
        u0 = assemble_final_field(b, ens, spec.Sn, basis)
        fd = None
    else:
        fd = final_data(a_hat_plus, ens, spec.Sn, spectrum, basis=basis,
                        ball_radius=spec.ball_radius * 10.0)
        b = fd.b
        u0 = fd.field

    span = spec.Sn - spec.T0
    dt0 = stable_dt(grid, float(np.abs(u0.values).max()), ens.p, opts.dt)
    steps_per_check = max(1, int(check_interval / dt0))
    n_checks = max(1, int(np.ceil(span / (steps_per_check * dt0))))
    dt = span / (n_checks * steps_per_check)
    stepper = Stepper(grid, ens.p, -dt, dealias=opts.dealias)

    rows: list[LogRow] = []
    aborted = None
    y_prev = np.zeros(ens.n_solitons)

    def log_state(t: float, u: Field):
        nonlocal y_prev
        state = decompose(u, ens, t, y_guess=y_prev, basis=basis, radius=spec.eps * 2.0)
        y_prev = state.y
        status = tube_check(state, u, ens, spec)
        psis, phis = diagnostics_weights(ens, state.y, t, spec.sigma0, grid)
        M, E = localized_functionals(u, ens, phis, ens.p)
        if with_H:
            H = localized_form_H(state.v, ens, state.y, phis, t)
        else:
            H = np.full(ens.n_solitons, np.nan)
        r = ensemble_field(ens, t, grid, min_separation=0.0)
        dist = norm_h1(Field(grid, u.values - r.values))
        mass = float(np.sum(u.values ** 2) * grid.dx)
        ux = derivative(u, 1)
        energy = float((0.5 * np.sum(ux.values ** 2)
                        - np.sum(u.values ** (ens.p + 1)) / (ens.p + 1)) * grid.dx)
        rows.append(LogRow(t=t, dist_r_h1=dist, v_h1=norm_h1(state.v),
                           v_l2=float(np.sqrt(np.sum(state.v.values ** 2) * grid.dx)),
                           y=state.y.copy(), a_plus=state.a_plus.copy(),
                           a_minus=state.a_minus.copy(), inside=status.inside,
                           failed=status.failed_condition.value, margin=status.margin,
                           scaled=dict(status.scaled), M=M, E=E, H=H,
                           mass=mass, energy=energy))
        return state, status, dist

    _, status, _ = log_state(spec.Sn, u0)
    T_exit = spec.Sn
    success = False
    u = u0
    uh = u0.hat()
    exited = (mode == "tube") and not status.inside
    if not exited:
        for chk in range(1, n_checks + 1):
            for _ in range(steps_per_check):
                uh = stepper.step(uh)
            t = spec.Sn - chk * steps_per_check * dt
            h1 = norm_h1_hat(grid, uh)
            if not np.isfinite(h1) or h1 > opts.h1_ceiling:
                aborted = f"blow-up: H1 {h1:.3e} at t={t:.4f}"
                T_exit = t
                break
            u = from_hat(grid, uh)
            try:
                state, status, dist = log_state(t, u)
            except ModulationError as exc:
                # modulation loss counts as leaving the tube
                aborted = f"modulation: {exc}"
                T_exit = t
                break
            if mode == "tube" and not status.inside:
                T_exit = t
                break
            if mode == "horizon" and dist > guard_factor * spec.eps:
                aborted = f"guard: ||u-R||_H1 {dist:.3e} > {guard_factor:g} eps at t={t:.4f}"
                T_exit = t
                break
        else:
            T_exit = spec.T0
            success = mode == "tube" and all(r.inside for r in rows)
    if aborted is not None:
        exit_condition = f"aborted: {aborted}"
    else:
        exit_condition = rows[-1].failed if rows else FailedCondition.NONE.value

    fitted = None
    ts = np.array([r.t for r in rows])
    ds = np.array([r.dist_r_h1 for r in rows])
    window = (ts >= spec.T0 + 2.0) & (ts <= spec.Sn - 2.0)
    if window.sum() >= 5:
        fitted = fit_decay(ts[window], ds[window])

    return ShootResult(a_hat_plus=a_hat_plus, b=b, rows=rows, T_exit=T_exit,
                       success=success, exit_condition=exit_condition,
                       decay_fit=fitted, sigma0=spec.sigma0, e0=spectrum.e0,
                       aborted=aborted, u_final=u)


def _exit_sign(result: ShootResult) -> float:
    """Sign of the scalar a+ at the last decomposed state."""
    return float(np.sign(result.rows[-1].a_plus[0]))


def find_a_hat(ens: SolitonEnsemble, spec: TubeSpec, spectrum: EdgeSpectrum,
               opts: EvolveOptions, grid: Grid1D, *,
               basis: ProfileBasis | None = None,
               seed: np.ndarray | None = None,
               bracket_mult: float = 1.0,
               max_runs: int = 64,
               gtol: float | None = None,
               check_interval: float = 0.05,
               with_H: bool = True) -> ShootResult:
    """Locate a^+ with exit time T0: bisection for N=1, Broyden for N>=2."""
    if basis is None:
        basis = ProfileBasis(ens, spectrum, grid)
    if ens.n_solitons == 1:
        return _find_scalar_bisection(ens, spec, spectrum, opts, grid, basis,
                                      seed=seed, bracket_mult=bracket_mult,
                                      max_runs=max_runs, check_interval=check_interval,
                                      with_H=with_H)
    return _find_broyden(ens, spec, spectrum, opts, grid, basis, seed=seed,
                         max_runs=max_runs, gtol=gtol,
                         check_interval=check_interval, with_H=with_H)


def _find_scalar_bisection(ens, spec, spectrum, opts, grid, basis, *, seed,
                           bracket_mult, max_runs, check_interval, with_H,
                           gtol=None):
    """Bisection on the sign of a+ at exit, then secant polish to the root.

    Runs that never leave the tube reach T0, where a+(T0) is the scalar the
    polish drives to zero; the polished root is the canonical a^+ that
    Sn-continuation compares across windows.
    """
    radius = bracket_mult * spec.ball_radius
    if gtol is None:
        gtol = 1e-10 * np.exp(-1.5 * spec.rate * spec.T0)
    run = lambda a: backward_run(np.array([a]), ens, spec, spectrum, opts, grid,
                                 basis=basis, mode="tube",
                                 check_interval=check_interval, with_H=with_H)
    history = []

    def probe(a):
        r = run(a)
        history.append((a, r.T_exit, r.exit_condition))
        return r

    if seed is None:
        lo, hi = -radius, +radius
    else:
        s = float(np.asarray(seed).reshape(1)[0])
        w = max(4.0 * abs(s), 1e-3 * radius)
        lo, hi = s - w, s + w
    r_lo, r_hi = probe(lo), probe(hi)
    successes = [(a, r) for a, r in ((lo, r_lo), (hi, r_hi)) if r.success]
    s_lo, s_hi = _exit_sign(r_lo), _exit_sign(r_hi)
    # widen a seeded bracket until the exit signs differ
    while not successes and s_lo == s_hi and (hi - lo) < 2.0 * radius:
        mid = 0.5 * (lo + hi)
        w = hi - mid
        lo, hi = max(mid - 4.0 * w, -radius), min(mid + 4.0 * w, radius)
        r_lo, r_hi = probe(lo), probe(hi)
        successes = [(a, r) for a, r in ((lo, r_lo), (hi, r_hi)) if r.success]
        s_lo, s_hi = _exit_sign(r_lo), _exit_sign(r_hi)
    if not successes and s_lo == s_hi:
        raise BracketError(
            f"exit signs match at both bracket ends ({s_lo:+.0f}); no sign change "
            f"of a+ across [{lo:.3e}, {hi:.3e}]"
        )

    # bisect until two in-tube runs bracket-ish the root
    while len(successes) < 2 and len(history) < max_runs - 2:
        mid = 0.5 * (lo + hi)
        r = probe(mid)
        if r.success:
            successes.append((mid, r))
        sgn = _exit_sign(r)
        if sgn == s_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(radius, 1e-300):
            break
    if not successes:
        raise ShootingError(
            f"bisection exhausted after {len(history)} runs without an in-tube "
            f"trajectory; bracket [{lo:.6e}, {hi:.6e}]; consider increasing T0"
        )

    # secant polish of G(a) = a+(T0) using in-tube runs only
    def gval(item):
        return float(item[1].rows[-1].a_plus[0])

    best = min(successes, key=lambda it: abs(gval(it)))
    if len(successes) >= 2:
        (a0, r0), (a1, r1) = successes[-2], successes[-1]
    else:
        a0, r0 = successes[0]
        a1 = a0 + max(abs(a0), 1e-3 * radius) * 1e-2
        r1 = probe(a1)
        if not r1.success:
            a1, r1 = a0, r0
    g0, g1 = gval((a0, r0)), gval((a1, r1))
    while abs(gval(best)) > gtol and len(history) < max_runs and a0 != a1 and g0 != g1:
        a_new = a1 - g1 * (a1 - a0) / (g1 - g0)
        a_new = min(max(a_new, -radius), radius)
        r_new = probe(a_new)
        if not r_new.success:
            break
        a0, g0, r0 = a1, g1, r1
        a1, g1, r1 = a_new, gval((a_new, r_new)), r_new
        if abs(g1) < abs(gval(best)):
            best = (a1, r1)
    result = best[1]
    result.n_runs = len(history)
    result.search = history
    return result


def _find_broyden(ens, spec, spectrum, opts, grid, basis, *, seed, max_runs,
                  gtol, check_interval, with_H):
    N = ens.n_solitons
    if gtol is None:
        gtol = 1e-8 * np.exp(-1.5 * spec.rate * spec.T0)
    history = []

    def G(a):
        r = backward_run(a, ens, spec, spectrum, opts, grid, basis=basis,
                         mode="horizon", check_interval=check_interval,
                         with_H=False)
        history.append((list(a), r.T_exit, r.exit_condition, r.aborted))
        if r.aborted or r.T_exit > spec.T0:
            return None
        return r.rows[-1].a_plus.copy()

    window = spec.Sn - spec.T0
    J = np.diag(np.exp(spectrum.e0 * ens.speeds ** 1.5 * window))
    a = np.zeros(N) if seed is None else np.asarray(seed, dtype=float).reshape(N)
    g = G(a)
    if g is None:
        raise ShootingError("Broyden seed run aborted; move the seed or increase T0")
    while len(history) < max_runs - 1:
        if np.linalg.norm(g) <= gtol:
            break
        step = -np.linalg.solve(J, g)
        scale = 1.0
        for _ in range(8):
            a_try = a + scale * step
            g_try = G(a_try)
            if g_try is not None and np.linalg.norm(g_try) < np.linalg.norm(g):
                break
            scale *= 0.5
        else:
            raise ShootingError(
                f"Broyden stagnated at ||a+(T0)|| = {np.linalg.norm(g):.3e} "
                f"after {len(history)} runs"
            )
        da = a_try - a
        dg = g_try - g
        J = J + np.outer((dg - J @ da) / float(da @ da), da)
        a, g = a_try, g_try
    if np.linalg.norm(g) > gtol:
        raise ShootingError(
            f"Broyden did not reach gtol={gtol:.2e}: ||a+(T0)|| = {np.linalg.norm(g):.3e}"
        )
    result = backward_run(a, ens, spec, spectrum, opts, grid, basis=basis,
                          mode="tube", check_interval=check_interval, with_H=with_H)
    result.n_runs = len(history) + 1
    result.search = history
    if not result.success:
        raise ShootingError(
            f"tube validation failed after Broyden: exit at t={result.T_exit:.4f} "
            f"({result.exit_condition}); consider increasing T0"
        )
    return result


def continuation_find(ens: SolitonEnsemble, T0: float, sn_list, spectrum: EdgeSpectrum,
                      opts: EvolveOptions, grid: Grid1D, *,
                      eps: float | None = None, check_interval: float = 0.05,
                      with_H: bool = True, **radii) -> list[ShootResult]:
    """Solve a sequence of growing final times, seeding each solve with the
    previous a^+ rescaled by e^{-(3/2) sigma0^{3/2} dSn}."""
    basis = ProfileBasis(ens, spectrum, grid)
    results = []
    seed = None
    sn_prev = None
    for sn in sn_list:
        spec = TubeSpec.auto(ens, spectrum, T0, sn, grid, eps=eps, **radii)
        if seed is not None:
            seed = seed * np.exp(-1.5 * spec.rate * (sn - sn_prev))
        res = find_a_hat(ens, spec, spectrum, opts, grid, basis=basis, seed=seed,
                         check_interval=check_interval, with_H=with_H)
        results.append(res)
        seed = res.a_hat_plus.copy()
        sn_prev = sn
    return results
