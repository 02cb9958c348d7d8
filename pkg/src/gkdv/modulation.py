"""Modulation decomposition and the prepared-final-data map.

decompose() splits a field u near the soliton sum into translation offsets
y = (y_j) and a remainder v = u - R~(y) with int v (R~_j)_x = 0 for every j
(Newton on the orthogonality system, diagonally dominant Jacobian).  The
unstable/stable coefficients are a+-_j = int v Z~+-_j.

final_data() inverts the map b -> (a+(Sn), a-(Sn)) around b = 0: given a
target a^+ it returns the 2N coefficients b such that

    u(Sn) = R(Sn) + sum_{j,+-} b+-_j Z+-_j(Sn)

decomposes with a+(Sn) = a^+ and a-(Sn) = 0.  The Newton iteration is
preconditioned by the block Gram matrix of the scaled duals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid1D, norm_h1, norm_l2
from .linop import EdgeSpectrum, scaled_dual
from .soliton import SolitonEnsemble, ensemble_field, ground_state


class ModulationError(RuntimeError):
    pass


class OutOfRadiusError(ModulationError):
    pass


class NewtonDivergenceError(ModulationError):
    pass


def modulation_radius(ens: SolitonEnsemble, grid: Grid1D) -> float:
    """Default closeness radius 0.1 min_j ||Q_{c_j}||_L2 for the Newton basin."""
    norms = [norm_l2(ground_state(ens.p, q.c, grid)) for q in ens.params]
    return 0.1 * min(norms)


def probe_modulation_radius(ens: SolitonEnsemble, t: float,
                            basis: "ProfileBasis", radius: float,
                            n_probes: int = 8, seed: int = 0) -> float:
    """Newton-basin probe: decompose random perturbations at the radius edge.

    Returns the worst orthogonality residual over the probes; raises
    NewtonDivergenceError if the basin does not cover the radius.
    """
    rng = np.random.default_rng(seed)
    grid = basis.grid
    r = basis.soliton_sum(t, np.zeros(ens.n_solitons))
    worst = 0.0
    centers = ens.centers(t)
    for _ in range(n_probes):
        bump = np.zeros(grid.n)
        for ctr in centers:
            amp = rng.normal(size=3)
            for k, a in enumerate(amp):
                bump += a * np.exp(-((grid.x - ctr - 2.0 * (k - 1)) / (2.0 + k)) ** 2)
        nrm = np.sqrt(np.sum(bump ** 2) * grid.dx)
        u = Field(grid, r + bump * (0.95 * radius / nrm))
        st = decompose(u, ens, t, basis=basis, radius=radius)
        worst = max(worst, st.residual)
    return worst


class ProfileBasis:
    """Cached spectral machinery for shifted profiles of one ensemble.

    Holds the half-spectra of the centered profiles Q_{c_j}, their first two
    derivatives, and the scaled duals Z+-_j, so that Newton iterations and
    projections reduce to phase multiplications and inverse FFTs.
    """

    def __init__(self, ens: SolitonEnsemble, spectrum: EdgeSpectrum, grid: Grid1D):
        if spectrum.p != ens.p:
            raise ModulationError("spectrum and ensemble have different p")
        self.ens = ens
        self.spectrum = spectrum
        self.grid = grid
        self.k = grid.k
        n = grid.n
        self.q_hat = []
        self.qx_hat = []
        self.qxx_hat = []
        self.zp_hat = []
        self.zm_hat = []
        self.qx_norm2 = np.zeros(ens.n_solitons)
        d1 = grid.odd_multiplier(1)
        for j, prm in enumerate(ens.params):
            q = ground_state(ens.p, prm.c, grid)
            qh = q.hat()
            self.q_hat.append(qh)
            self.qx_hat.append(d1 * qh)
            self.qxx_hat.append(-grid.k ** 2 * qh)
            zp = scaled_dual(spectrum, prm.c, 0.0, 0.0, grid, +1)
            zm = scaled_dual(spectrum, prm.c, 0.0, 0.0, grid, -1)
            self.zp_hat.append(zp.hat())
            self.zm_hat.append(zm.hat())
            qx = np.fft.irfft(self.qx_hat[j], n)
            self.qx_norm2[j] = np.sum(qx ** 2) * grid.dx

    def _shifted(self, fh: np.ndarray, s: float) -> np.ndarray:
        ph = np.exp(-1j * self.k * s)
        out = fh * ph
        out[-1] = out[-1].real
        return np.fft.irfft(out, self.grid.n)

    def centers(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.ens.centers(t) + y

    def profile(self, j: int, t: float, y_j: float) -> np.ndarray:
        return self._shifted(self.q_hat[j], self.ens.params[j].center(t) + y_j)

    def profile_x(self, j: int, t: float, y_j: float) -> np.ndarray:
        return self._shifted(self.qx_hat[j], self.ens.params[j].center(t) + y_j)

    def profile_xx(self, j: int, t: float, y_j: float) -> np.ndarray:
        return self._shifted(self.qxx_hat[j], self.ens.params[j].center(t) + y_j)

    def dual(self, j: int, sign: int, t: float, y_j: float) -> np.ndarray:
        fh = self.zp_hat[j] if sign > 0 else self.zm_hat[j]
        return self._shifted(fh, self.ens.params[j].center(t) + y_j)

    def soliton_sum(self, t: float, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.grid.n)
        for j in range(self.ens.n_solitons):
            out += self.profile(j, t, y[j])
        return out


@dataclass
class ModulationState:
    t: float
    y: np.ndarray
    v: Field
    a_plus: np.ndarray
    a_minus: np.ndarray
    ens: SolitonEnsemble
    residual: float
    iterations: int

    def to_json(self) -> str:
        return json.dumps({
            "t": self.t,
            "y": list(self.y),
            "a_plus": list(self.a_plus),
            "a_minus": list(self.a_minus),
            "v_l2": norm_l2(self.v),
            "v_h1": norm_h1(self.v),
            "residual": self.residual,
        })


def decompose(u: Field, ens: SolitonEnsemble, t: float,
              y_guess: np.ndarray | None = None,
              spectrum: EdgeSpectrum | None = None, *,
              basis: ProfileBasis | None = None,
              tol: float = 1e-11, max_iter: int = 25,
              radius: float | None = None) -> ModulationState:
    """Solve the N orthogonality conditions int (u - R~(y)) (R~_j)_x = 0.

    Newton with the analytic Jacobian

        J_jk = int (R~_k)_x (R~_j)_x + delta_jk int (u - R~) (R~_j)_xx,

    damped by step halving when the residual grows.  Requires u within the
    modulation radius of R(t).
    """
    if basis is None:
        if spectrum is None:
            raise ModulationError("decompose needs a spectrum or a prepared basis")
        basis = ProfileBasis(ens, spectrum, u.grid)
    grid = u.grid
    dx = grid.dx
    N = ens.n_solitons
    if radius is None:
        radius = modulation_radius(ens, grid)
    r0 = ensemble_field(ens, t, grid, min_separation=0.0)
    dist = norm_l2(Field(grid, u.values - r0.values))
    if dist > radius:
        raise OutOfRadiusError(
            f"||u - R(t)||_L2 = {dist:.3e} exceeds the modulation radius {radius:.3e}"
        )

    y = np.zeros(N) if y_guess is None else np.array(y_guess, dtype=float)

    def residual_vec(yv):
        profs_x = [basis.profile_x(j, t, yv[j]) for j in range(N)]
        rsum = basis.soliton_sum(t, yv)
        diff = u.values - rsum
        g = np.array([np.sum(diff * px) * dx for px in profs_x])
        return g, diff, profs_x

    g, diff, profs_x = residual_vec(y)
    res = float(np.max(np.abs(g)))
    it = 0
    while res > tol and it < max_iter:
        J = np.empty((N, N))
        for j in range(N):
            for kk in range(N):
                J[j, kk] = np.sum(profs_x[kk] * profs_x[j]) * dx
            J[j, j] -= np.sum(diff * basis.profile_xx(j, t, y[j])) * dx
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError as exc:
            raise NewtonDivergenceError(f"singular modulation Jacobian: {exc}") from exc
        scale = 1.0
        for _ in range(10):
            y_try = y - scale * step
            g_try, diff_try, profs_try = residual_vec(y_try)
            if np.max(np.abs(g_try)) < res or scale < 1e-3:
                break
            scale *= 0.5
        y, g, diff, profs_x = y_try, g_try, diff_try, profs_try
        res = float(np.max(np.abs(g)))
        it += 1
        if np.max(np.abs(step)) * scale <= 1e-14:
            # a step at the floating-point floor counts as converged
            break
    if res > tol and it >= max_iter:
        raise NewtonDivergenceError(
            f"modulation Newton stalled at residual {res:.3e} after {it} iterations"
        )
    v = Field(grid, diff)
    a_plus, a_minus = unstable_coeffs(v, ens, y, t, basis.spectrum, basis=basis)
    return ModulationState(t=float(t), y=y, v=v, a_plus=a_plus, a_minus=a_minus,
                           ens=ens, residual=res, iterations=it)


def unstable_coeffs(v: Field, ens: SolitonEnsemble, y: np.ndarray, t: float,
                    spectrum: EdgeSpectrum, *,
                    basis: ProfileBasis | None = None) -> tuple[np.ndarray, np.ndarray]:
    """a+-_j = int v Z~+-_j with the duals at the modulated centers."""
    if basis is None:
        basis = ProfileBasis(ens, spectrum, v.grid)
    dx = v.grid.dx
    N = ens.n_solitons
    a_plus = np.zeros(N)
    a_minus = np.zeros(N)
    for j in range(N):
        a_plus[j] = np.sum(v.values * basis.dual(j, +1, t, y[j])) * dx
        a_minus[j] = np.sum(v.values * basis.dual(j, -1, t, y[j])) * dx
    return a_plus, a_minus


@dataclass
class FinalData:
    Sn: float
    b: np.ndarray                 # (b+_1..b+_N, b-_1..b-_N)
    field: Field
    a_hat_plus: np.ndarray
    state: ModulationState
    residual: float
    iterations: int

    @property
    def b_plus(self) -> np.ndarray:
        return self.b[:self.b.size // 2]

    @property
    def b_minus(self) -> np.ndarray:
        return self.b[self.b.size // 2:]


def dual_gram(ens: SolitonEnsemble, spectrum: EdgeSpectrum, grid: Grid1D,
              Sn: float, basis: ProfileBasis | None = None) -> np.ndarray:
    """Gram matrix of (Z+_1..Z+_N, Z-_1..Z-_N) at time Sn (block P structure)."""
    if basis is None:
        basis = ProfileBasis(ens, spectrum, grid)
    N = ens.n_solitons
    zs = [basis.dual(j, +1, Sn, 0.0) for j in range(N)] + \
         [basis.dual(j, -1, Sn, 0.0) for j in range(N)]
    P = np.empty((2 * N, 2 * N))
    for a in range(2 * N):
        for bq in range(a, 2 * N):
            P[a, bq] = P[bq, a] = np.sum(zs[a] * zs[bq]) * grid.dx
    return P


def assemble_final_field(b: np.ndarray, ens: SolitonEnsemble, Sn: float,
                         basis: ProfileBasis) -> Field:
    """R(Sn) + sum_{j,+-} b+-_j Z+-_j(Sn) (unmodulated centers)."""
    N = ens.n_solitons
    vals = basis.soliton_sum(Sn, np.zeros(N)).copy()
    for j in range(N):
        vals += b[j] * basis.dual(j, +1, Sn, 0.0)
        vals += b[N + j] * basis.dual(j, -1, Sn, 0.0)
    return Field(basis.grid, vals)


def final_data(a_hat_plus: np.ndarray, ens: SolitonEnsemble, Sn: float,
               spectrum: EdgeSpectrum, grid: Grid1D | None = None, *,
               basis: ProfileBasis | None = None,
               ball_radius: float | None = None,
               tol: float = 1e-11, max_iter: int = 60) -> FinalData:
    """Coefficients b realizing a+(Sn) = a_hat_plus, a-(Sn) = 0.

    Newton iteration on b with the dual Gram matrix P as the (fixed)
    Jacobian; each evaluation decomposes the assembled field.  a_hat_plus
    inside the shooting ball keeps the iteration deep in its linear regime; a
    warning is attached when the target lies outside a supplied ball radius.
    """
    if basis is None:
        if grid is None:
            raise ModulationError("final_data needs a grid or a prepared basis")
        basis = ProfileBasis(ens, spectrum, grid)
    grid = basis.grid
    N = ens.n_solitons
    a_hat_plus = np.asarray(a_hat_plus, dtype=float)
    if a_hat_plus.shape != (N,):
        raise ModulationError(f"a_hat_plus must have shape ({N},)")
    if ball_radius is not None and np.linalg.norm(a_hat_plus) > ball_radius:
        if np.linalg.norm(a_hat_plus) > 10.0 * ball_radius:
            raise ModulationError(
                f"target ||a^+|| = {np.linalg.norm(a_hat_plus):.3e} more than 10x the "
                f"ball radius {ball_radius:.3e}"
            )
    target = np.concatenate([a_hat_plus, np.zeros(N)])
    P = dual_gram(ens, spectrum, grid, Sn, basis=basis)

    b = np.linalg.solve(P, target)
    state = None
    res = np.inf
    for it in range(1, max_iter + 1):
        u = assemble_final_field(b, ens, Sn, basis)
        state = decompose(u, ens, Sn, basis=basis, tol=tol)
        got = np.concatenate([state.a_plus, state.a_minus])
        err = got - target
        res = float(np.max(np.abs(err)))
        if res <= tol:
            break
        b = b - np.linalg.solve(P, err)
    else:
        raise NewtonDivergenceError(
            f"final-data Newton stalled at residual {res:.3e} after {max_iter} iterations"
        )
    return FinalData(Sn=float(Sn), b=b, field=u, a_hat_plus=a_hat_plus,
                     state=state, residual=res, iterations=it)
