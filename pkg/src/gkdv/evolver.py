"""Time integration of u_t + (u_xx + u^p)_x = 0, forward and backward.

The linear dispersion is propagated exactly in Fourier space (integrating
factor exp(i k^3 t)); the nonlinear flux -(u^p)_x is advanced by the
four-stage fourth-order exponential scheme of Cox-Matthews with the
Kassam-Trefethen contour evaluation of the phi-coefficients.  Products of
degree p are dealiased by zero padding.  The step is fixed (no adaptivity) so
trajectories are bitwise reproducible; backward runs simply use dt < 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Field, Grid1D, derivative, from_hat, inner_l2, norm_h1_hat, spectral_tail_fraction
from .soliton import conserved_quantities


class EvolveError(RuntimeError):
    pass


class BlowUpError(EvolveError):
    """H1 ceiling exceeded; carries the time of failure (the blow-up alternative)."""

    def __init__(self, t: float, h1: float):
        super().__init__(f"H1 norm {h1:.3e} exceeded the ceiling at t={t:.6f}")
        self.t = t
        self.h1 = h1


class ConservationError(EvolveError):
    def __init__(self, t: float, kind: str, drift: float, tol: float):
        super().__init__(f"{kind} drift {drift:.3e} exceeded tolerance {tol:.1e} at t={t:.6f}")
        self.t = t
        self.kind = kind
        self.drift = drift


@dataclass
class EvolveOptions:
    dt: float = 2.5e-4
    tol_mass: float = 1e-10       # relative drift
    tol_energy: float = 1e-9      # relative drift
    dealias: bool = True
    max_steps: int = 50_000_000
    h1_ceiling: float = 50.0
    save_every: int = 0           # 0: keep endpoints only
    check_conservation: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise EvolveError(f"base dt must be positive, got {self.dt}")
        if self.tol_mass <= 0 or self.tol_energy <= 0:
            raise EvolveError("conservation tolerances must be positive")


def stable_dt(grid: Grid1D, u_max: float, p: int, user_dt: float) -> float:
    """Fixed step: min(0.1 dx / max|u|^{(p-1)/2}, user dt)."""
    amp = max(abs(u_max), 1e-12) ** ((p - 1) / 2.0)
    return min(0.1 * grid.dx / amp, user_dt)


class Stepper:
    """ETDRK4 stepper for one (grid, p, dt) triple; dt may be negative."""

    def __init__(self, grid: Grid1D, p: int, dt: float, dealias: bool = True,
                 n_contour: int = 32):
        self.grid = grid
        self.p = p
        self.dt = dt
        self.dealias = dealias
        k = grid.k
        self.ik = grid.odd_multiplier(1)
        lin = 1j * k ** 3            # from -(ik)^3
        h = dt
        r = np.exp(2j * np.pi * (np.arange(n_contour) + 0.5) / n_contour)
        LR = h * lin[:, None] + r[None, :]
        eLR = np.exp(LR)
        self.E = np.exp(h * lin)
        self.E2 = np.exp(0.5 * h * lin)
        self.q = h * np.mean((np.exp(LR / 2.0) - 1.0) / LR, axis=1)
        self.f1 = h * np.mean((-4.0 - LR + eLR * (4.0 - 3.0 * LR + LR ** 2)) / LR ** 3, axis=1)
        self.f2 = h * np.mean((2.0 + LR + eLR * (LR - 2.0)) / LR ** 3, axis=1)
        self.f3 = h * np.mean((-4.0 - 3.0 * LR - LR ** 2 + eLR * (4.0 - LR)) / LR ** 3, axis=1)
        if dealias:
            m = 1
            while m < int(np.ceil((p + 1) / 2.0 * grid.n)):
                m *= 2
            self.m = m
        else:
            self.m = grid.n

    def nonlinear(self, uh: np.ndarray) -> np.ndarray:
        """-(u^p)_x in spectral space, alias-free when dealias is on.

        Overflow during blow-up is deliberate: it surfaces as non-finite
        norms that the caller's ceiling check converts into BlowUpError.
        """
        n, m = self.grid.n, self.m
        with np.errstate(over="ignore", invalid="ignore"):
            if m == n:
                u = np.fft.irfft(uh, n)
                wh = np.fft.rfft(u ** self.p)
            else:
                pad = np.zeros(m // 2 + 1, dtype=complex)
                pad[:n // 2 + 1] = uh * (m / n)
                u = np.fft.irfft(pad, m)
                wh = np.fft.rfft(u ** self.p)[:n // 2 + 1] * (n / m)
            return -self.ik * wh

    def step(self, uh: np.ndarray) -> np.ndarray:
        Nu = self.nonlinear(uh)
        a = self.E2 * uh + self.q * Nu
        Na = self.nonlinear(a)
        b = self.E2 * uh + self.q * Na
        Nb = self.nonlinear(b)
        c = self.E2 * a + self.q * (2.0 * Nb - Nu)
        Nc = self.nonlinear(c)
        return self.E * uh + self.f1 * Nu + 2.0 * self.f2 * (Na + Nb) + self.f3 * Nc


@dataclass
class Trajectory:
    p: int
    times: list[float] = field(default_factory=list)
    fields: list[Field] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)

    def append(self, t: float, u: Field):
        if self.times:
            step = t - self.times[-1]
            direction = self.times[1] - self.times[0] if len(self.times) > 1 else step
            if step == 0.0 or step * direction < 0:
                raise EvolveError("trajectory times must be strictly monotone")
        m, e = conserved_quantities(u, self.p)
        self.times.append(float(t))
        self.fields.append(u)
        self.mass.append(m)
        self.energy.append(e)

    @property
    def final_time(self) -> float:
        return self.times[-1]

    @property
    def final_field(self) -> Field:
        return self.fields[-1]

    def mass_drift(self) -> float:
        m0 = self.mass[0]
        return max(abs(m - m0) for m in self.mass) / max(abs(m0), 1e-300)

    def energy_drift(self) -> float:
        e0 = self.energy[0]
        scale = max(abs(e0), 1e-12)
        return max(abs(e - e0) for e in self.energy) / scale


def evolve(u0: Field, p: int, t0: float, t1: float, opts: EvolveOptions | None = None) -> Trajectory:
    """Integrate from t0 to t1 (either direction) with conservation checks."""
    opts = opts or EvolveOptions()
    if t1 == t0:
        traj = Trajectory(p=p)
        traj.append(t0, u0)
        return traj
    if spectral_tail_fraction(u0) > 1e-10:
        raise EvolveError(
            f"initial data underresolved: spectral tail fraction {spectral_tail_fraction(u0):.2e}"
        )
    span = t1 - t0
    u_max = float(np.abs(u0.values).max())
    dt_mag = stable_dt(u0.grid, u_max, p, opts.dt)
    n_steps = int(np.ceil(abs(span) / dt_mag))
    if n_steps > opts.max_steps:
        raise EvolveError(f"{n_steps} steps exceed max_steps={opts.max_steps}")
    dt = span / n_steps
    stepper = Stepper(u0.grid, p, dt, dealias=opts.dealias)

    traj = Trajectory(p=p)
    traj.append(t0, u0)
    mass0, energy0 = traj.mass[0], traj.energy[0]
    e_scale = max(abs(energy0), 1e-12)

    uh = u0.hat()
    check_every = max(1, n_steps // max(1, n_steps // 200))
    for i in range(1, n_steps + 1):
        uh = stepper.step(uh)
        t = t0 + i * dt
        last = i == n_steps
        if last or (opts.save_every and i % opts.save_every == 0) or i % check_every == 0:
            h1 = norm_h1_hat(u0.grid, uh)
            if not np.isfinite(h1) or h1 > opts.h1_ceiling:
                raise BlowUpError(t, h1)
            if last or (opts.save_every and i % opts.save_every == 0):
                u = from_hat(u0.grid, uh)
                traj.append(t, u)
                if opts.check_conservation:
                    md = abs(traj.mass[-1] - mass0) / max(abs(mass0), 1e-300)
                    ed = abs(traj.energy[-1] - energy0) / e_scale
                    if md > opts.tol_mass:
                        raise ConservationError(t, "mass", md, opts.tol_mass)
                    if ed > opts.tol_energy:
                        raise ConservationError(t, "energy", ed, opts.tol_energy)
    return traj


def kato_rate(u: Field, p: int, f: Field, f_x: Field, f_xxx: Field) -> float:
    """Right-hand side of Kato's identity for d/dt int u^2 f along the flow:

        -3 int u_x^2 f_x + int u^2 f_xxx + 2p/(p+1) int u^{p+1} f_x.
    """
    ux = derivative(u, 1)
    t1 = -3.0 * inner_l2(Field(u.grid, ux.values ** 2), f_x)
    t2 = inner_l2(Field(u.grid, u.values ** 2), f_xxx)
    t3 = 2.0 * p / (p + 1.0) * inner_l2(Field(u.grid, u.values ** (p + 1)), f_x)
    return t1 + t2 + t3
