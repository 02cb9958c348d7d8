"""Command dispatch and reproducible experiment orchestration.

Usage: gkdv <command> --config <path> [--out <dir>] [--threads <k>]

Commands: profile, spectrum, coercivity, evolve, construct, verify.
Exit codes: 0 success, 1 verification failure, 2 config error, 3 numerical
failure (a diagnostic file is written to the output directory).

The JSON config is schema-checked, completed with defaults, and the resolved
copy is echoed into the output directory so every run is self-describing.
Identical configs (and seed) reproduce series.csv bitwise: the pipeline is
deterministic, the seed only feeds randomized probes.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import traceback
from pathlib import Path

import numpy as np

from . import acceptance
from .coercivity import constrained_min_rayleigh
from .evolver import EvolveOptions, evolve
from .grid import Field, Grid1D, derivative, norm_h1, resample
from .linop import (NoUnstableEigenvalueError, ensure_spectrum, spectrum_grid)
from .shooting import TubeSpec, continuation_find, find_a_hat
from .snapshots import save_snapshot
from .soliton import (SolitonEnsemble, SolitonParams, conserved_quantities,
                      ensemble_field, ground_state)

COMMANDS = ("profile", "spectrum", "coercivity", "evolve", "construct", "verify")

_FMT = "{:.17g}".format


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "p": 6,
    "ensemble": [[1.0, 0.0]],
    "grid": {"L": 96.0, "n": 1024},
    "spectrum_grid": {"L": spectrum_grid().length, "n": spectrum_grid().n},
    "window": {"T0": 56.0, "Sn": 64.0},
    "tube": {},
    "evolve": {"dt": 2.5e-4, "dealias": True},
    "check_interval": 0.05,
    "seed": 0,
    "cache_dir": None,
    "t0": 0.0,
    "t1": 1.0,
    "snapshot_every": 0,
    "full": False,
}


def load_config(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    cfg = {}
    for key, default in DEFAULTS.items():
        val = raw.get(key, default)
        if isinstance(default, dict) and isinstance(val, dict):
            merged = dict(default)
            merged.update(val)
            val = merged
        cfg[key] = val
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        cfg["p"] = int(cfg["p"])
        cfg["ensemble"] = [[float(c), float(x)] for c, x in cfg["ensemble"]]
        for gkey in ("grid", "spectrum_grid"):
            cfg[gkey] = {"L": float(cfg[gkey]["L"]), "n": int(cfg[gkey]["n"])}
            Grid1D(cfg[gkey]["L"], cfg[gkey]["n"])   # reject bad geometry early
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from exc
    return cfg


def _ensemble(cfg) -> SolitonEnsemble:
    return SolitonEnsemble(cfg["p"], tuple(SolitonParams(c, x) for c, x in cfg["ensemble"]))


def _grid(cfg, key="grid") -> Grid1D:
    return Grid1D(cfg[key]["L"], cfg[key]["n"])


def _echo_config(cfg, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    (out / "resolved_config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True))


def _spectrum(cfg):
    return ensure_spectrum(cfg["p"], _grid(cfg, "spectrum_grid"), cfg["cache_dir"])


def cmd_profile(cfg, out: Path) -> int:
    grid = _grid(cfg)
    ens = _ensemble(cfg)
    rows = {"x": grid.x}
    report = {}
    for j, prm in enumerate(ens.params, 1):
        q = ground_state(ens.p, prm.c, grid, prm.x0)
        rows[f"Q_c{j}"] = q.values
        mass, energy = conserved_quantities(q, ens.p)
        resid = float(np.max(np.abs(derivative(q, 2).values + q.values ** ens.p
                                    - prm.c * q.values)))
        report[f"soliton_{j}"] = {"c": prm.c, "x0": prm.x0, "mass": mass,
                                  "energy": energy, "peak": float(q.values.max()),
                                  "profile_residual": resid}
    with open(out / "profile.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(rows.keys())
        for i in range(grid.n):
            w.writerow([_FMT(rows[k][i]) for k in rows])
    (out / "profile.json").write_text(json.dumps(report, indent=2))
    print(json.dumps(report, indent=2))
    return 0


def cmd_spectrum(cfg, out: Path) -> int:
    grid = _grid(cfg, "spectrum_grid")
    spec = ensure_spectrum(cfg["p"], grid, cfg["cache_dir"] or out)
    report = spec.summary()
    (out / "spectrum.json").write_text(json.dumps(report, indent=2))
    print(json.dumps(report, indent=2))
    return 0


def cmd_coercivity(cfg, out: Path) -> int:
    spec = _spectrum(cfg)
    p = cfg["p"]
    rows = []
    for n in (1024, 2048):
        grid = Grid1D(spec.grid.length, n)
        zp = spec.Zplus if n == spec.grid.n else resample(spec.Zplus, grid)
        zm = spec.Zminus if n == spec.grid.n else resample(spec.Zminus, grid)
        q = ground_state(p, 1.0, grid)
        qx = derivative(q, 1)
        qp = Field(grid, q.values ** ((p + 1) / 2.0))
        for name, cons in (("Zp,Zm,Qx", [zp, zm, qx]),
                           ("Qx", [qx]),
                           ("Q^((p+1)/2),Qx", [qp, qx])):
            lam, _ = constrained_min_rayleigh(p, 1.0, 0.0, cons, grid)
            rows.append((p, name, lam, n))
    with open(out / "coercivity.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p", "constraints", "lambda_min", "n"])
        for r in rows:
            w.writerow([r[0], r[1], _FMT(r[2]), r[3]])
            print(f"p={r[0]} constraints={{{r[1]}}} lambda_min={r[2]:.8f} n={r[3]}")
    return 0


def cmd_evolve(cfg, out: Path) -> int:
    grid = _grid(cfg)
    ens = _ensemble(cfg)
    u0 = ensemble_field(ens, cfg["t0"], grid)
    opts = EvolveOptions(**cfg["evolve"])
    opts.save_every = max(1, int(round(cfg["check_interval"] / opts.dt)))
    traj = evolve(u0, ens.p, cfg["t0"], cfg["t1"], opts)
    with open(out / "trajectory.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "mass", "energy", "h1_dist_to_R"])
        for t, u, m, e in zip(traj.times, traj.fields, traj.mass, traj.energy):
            r = ensemble_field(ens, t, grid, min_separation=0.0)
            d = norm_h1(Field(grid, u.values - r.values))
            w.writerow([_FMT(t), _FMT(m), _FMT(e), _FMT(d)])
    if cfg["snapshot_every"]:
        for i, (t, u) in enumerate(zip(traj.times, traj.fields)):
            if i % cfg["snapshot_every"] == 0:
                save_snapshot(u, t, out / f"snapshot_{i:06d}.gkdv")
    print(f"evolved t={cfg['t0']} -> {cfg['t1']}: mass drift {traj.mass_drift():.3e}, "
          f"energy drift {traj.energy_drift():.3e}")
    return 0


def cmd_construct(cfg, out: Path) -> int:
    grid = _grid(cfg)
    ens = _ensemble(cfg)
    spectrum = _spectrum(cfg)
    opts = EvolveOptions(**cfg["evolve"])
    win = cfg["window"]
    tube_kwargs = dict(cfg["tube"])
    eps = tube_kwargs.pop("eps", None)
    if "Sn_list" in win:
        results = continuation_find(ens, float(win["T0"]), [float(s) for s in win["Sn_list"]],
                                    spectrum, opts, grid, eps=eps,
                                    check_interval=cfg["check_interval"], **tube_kwargs)
        for res, sn in zip(results, win["Sn_list"]):
            res.save(out / f"run_Sn{sn:g}")
        ok = all(r.success for r in results)
        print(f"continuation over Sn={win['Sn_list']}: "
              + ", ".join(f"{r.a_hat_plus}" for r in results))
    else:
        spec = TubeSpec.auto(ens, spectrum, float(win["T0"]), float(win["Sn"]), grid,
                             eps=eps, **tube_kwargs)
        res = find_a_hat(ens, spec, spectrum, opts, grid,
                         check_interval=cfg["check_interval"])
        res.save(out)
        save_snapshot(res.u_final, spec.T0, out / "u_T0.gkdv")
        ok = res.success
        print(f"construct: success={res.success}, a_hat_plus={res.a_hat_plus}, "
              f"T_exit={res.T_exit}, runs={res.n_runs}")
    return 0 if ok else 3


def cmd_verify(cfg, out: Path) -> int:
    results = acceptance.run_criteria(full=bool(cfg["full"]), printer=print)
    (out / "verify.json").write_text(json.dumps(
        [{"number": r.number, "name": r.name, "passed": r.passed, "details": r.details}
         for r in results], indent=2))
    return 0 if all(r.passed for r in results) else 1


def dispatch(command: str, config_path, out_dir=None, threads=None) -> int:
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)
    if command not in COMMANDS:
        print(f"unknown command {command!r}; choose from {COMMANDS}", file=sys.stderr)
        return 2
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(out_dir) if out_dir else Path(f"runs/{command}")
    try:
        _echo_config(cfg, out)
    except OSError as exc:
        print(f"cannot write output directory {out}: {exc}", file=sys.stderr)
        return 2
    handler = {
        "profile": cmd_profile,
        "spectrum": cmd_spectrum,
        "coercivity": cmd_coercivity,
        "evolve": cmd_evolve,
        "construct": cmd_construct,
        "verify": cmd_verify,
    }[command]
    try:
        return handler(cfg, out)
    except NoUnstableEigenvalueError as exc:
        print(f"numerical failure: no positive real eigenvalue ({exc})", file=sys.stderr)
        (out / "diagnostic.json").write_text(json.dumps(
            {"error": "no positive real eigenvalue", "detail": str(exc)}, indent=2))
        return 3
    except Exception as exc:
        (out / "diagnostic.json").write_text(json.dumps(
            {"error": type(exc).__name__, "detail": str(exc),
             "traceback": traceback.format_exc()}, indent=2))
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gkdv", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int,
                        default=os.environ.get("GKDV_THREADS"),
                        help="BLAS/FFT thread cap (env GKDV_THREADS)")
    args = parser.parse_args(argv)
    return dispatch(args.command, args.config, args.out, args.threads)


if __name__ == "__main__":
    sys.exit(main())
