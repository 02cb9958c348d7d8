"""Soliton profiles, traveling waves, ensembles and conserved quantities.

The ground state Q solves Q_xx + Q^p = Q,

    Q(x) = ((p+1) / (2 cosh^2((p-1) x / 2)))^(1/(p-1)),

and Q_c(x) = c^(1/(p-1)) Q(sqrt(c) x) is the speed-c profile.  A traveling
wave is R_{c,x0}(t,x) = Q_c(x - c t - x0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid1D, derivative, inner_l2

# relative tail magnitude allowed at the domain boundary before a profile is
# considered wrapped
TAIL_TOL = 1e-12


class SolitonError(ValueError):
    pass


class TailWrapError(SolitonError):
    pass


class SeparationError(SolitonError):
    pass


@dataclass(frozen=True)
class SolitonParams:
    c: float
    x0: float = 0.0

    def __post_init__(self):
        if self.c <= 0:
            raise SolitonError(f"soliton speed must be positive, got {self.c}")

    def center(self, t: float) -> float:
        return self.c * t + self.x0


@dataclass(frozen=True)
class SolitonEnsemble:
    p: int
    params: tuple[SolitonParams, ...]

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 2:
            raise SolitonError(f"nonlinearity exponent p must be an integer >= 2, got {self.p}")
        params = tuple(
            q if isinstance(q, SolitonParams) else SolitonParams(*q) for q in self.params
        )
        speeds = [q.c for q in params]
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise SolitonError(f"speeds must be strictly increasing, got {speeds}")
        object.__setattr__(self, "params", params)

    @property
    def n_solitons(self) -> int:
        return len(self.params)

    @property
    def speeds(self) -> np.ndarray:
        return np.array([q.c for q in self.params])

    def centers(self, t: float) -> np.ndarray:
        return np.array([q.center(t) for q in self.params])

    def sigma0_speed_bound(self) -> float:
        """Quarter-min over the speed terms alone; upper bound for sigma0."""
        c = self.speeds
        terms = [c[0]] + list(np.diff(c))
        return 0.25 * float(min(terms))

    def min_separation_default(self) -> float:
        """Default admissible pairwise separation, 20/sqrt(sigma0_bound)."""
        return 20.0 / np.sqrt(4.0 * self.sigma0_speed_bound())


def ground_state_peak(p: int, c: float = 1.0) -> float:
    """Q_c(0) = (c (p+1)/2)^(1/(p-1))."""
    return float((c * (p + 1) / 2.0) ** (1.0 / (p - 1)))


def _q_samples(p: int, c: float, xi: np.ndarray) -> np.ndarray:
    # sech evaluated through exp of negative-magnitude arguments only
    a = 0.5 * (p - 1) * np.sqrt(c) * xi
    sech = 2.0 * np.exp(-np.abs(a)) / (1.0 + np.exp(-2.0 * np.abs(a)))
    return c ** (1.0 / (p - 1)) * ((p + 1) / 2.0) ** (1.0 / (p - 1)) * sech ** (2.0 / (p - 1))


def ground_state(p: int, c: float, grid: Grid1D, center: float = 0.0,
                 tail_tol: float = TAIL_TOL) -> Field:
    """Q_c(x - center) sampled on the grid; rejects profiles that wrap."""
    if p < 2:
        raise SolitonError(f"p must be >= 2, got {p}")
    if c <= 0:
        raise SolitonError(f"c must be positive, got {c}")
    # nearest distance from the center to the domain boundary, periodically
    half = 0.5 * grid.length
    off = (center + half) % grid.length - half  # center folded into the domain
    edge_dist = half - abs(off)
    peak = ground_state_peak(p, c)
    tail = _q_samples(p, c, np.array([edge_dist]))[0]
    if tail > tail_tol * peak:
        raise TailWrapError(
            f"profile tail {tail:.3e} at the boundary exceeds {tail_tol:.1e} x peak "
            f"(center={center}, L={grid.length})"
        )
    return Field(grid, _q_samples(p, c, grid.x - center))


def soliton_field(p: int, params: SolitonParams, t: float, grid: Grid1D,
                  tail_tol: float = TAIL_TOL) -> Field:
    """Exact traveling wave R_{c,x0}(t) on the grid."""
    return ground_state(p, params.c, grid, params.center(t), tail_tol=tail_tol)


def ensemble_field(ens: SolitonEnsemble, t: float, grid: Grid1D,
                   min_separation: float | None = None,
                   tail_tol: float = TAIL_TOL) -> Field:
    """Superposition R(t) = sum_j R_j(t); enforces pairwise separation."""
    if min_separation is None:
        min_separation = ens.min_separation_default()
    centers = ens.centers(t)
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            sep = abs(centers[j] - centers[i])
            if sep < min_separation:
                raise SeparationError(
                    f"solitons {i},{j} separated by {sep:.3f} < required {min_separation:.3f} at t={t}"
                )
    total = np.zeros(grid.n)
    for q in ens.params:
        total += soliton_field(ens.p, q, t, grid, tail_tol=tail_tol).values
    return Field(grid, total)


def conserved_quantities(u: Field, p: int) -> tuple[float, float]:
    """(mass, energy) = (int u^2, 1/2 int u_x^2 - 1/(p+1) int u^{p+1})."""
    mass = inner_l2(u, u)
    ux = derivative(u, 1)
    energy = 0.5 * inner_l2(ux, ux) - float(np.sum(u.values ** (p + 1)) * u.grid.dx) / (p + 1)
    return mass, energy


def mass_scaling_exponent(p: int) -> float:
    """Exponent s in int Q_c^2 = c^s int Q^2 from the change of variables.

    s = 2/(p-1) - 1/2 = (5-p)/(2(p-1)); the sign of s decides stability.
    """
    return (5.0 - p) / (2.0 * (p - 1))


def criticality(p: int, c: float = 1.0) -> tuple[int, float]:
    """Sign of d/dc int Q_c^2 and the mass-scaling exponent.

    Positive for p < 5 (subcritical, stable), zero at p = 5, negative for
    p > 5 (supercritical, unstable).
    """
    if p < 2:
        raise SolitonError(f"p must be >= 2, got {p}")
    if c <= 0:
        raise SolitonError(f"c must be positive, got {c}")
    s = mass_scaling_exponent(p)
    return (0 if s == 0 else (1 if s > 0 else -1)), s
