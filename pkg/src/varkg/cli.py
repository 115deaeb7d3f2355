"""Command-line front end: subcommand dispatch, config merging, manifests.

Every run writes its artifacts plus a manifest.json recording the
effective configuration, its hash, library versions, the seed, and wall
time.  CSV output is deterministic: %.17g cells, LF line endings, and a
finiteness check on every value before it is written.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np
import scipy

from . import __version__
from .errors import VarkgError, WrongRegion
from .evolution import (
    BLOWUP_DETECTED,
    energy_drift,
    evolve,
    invariant_monitor,
    make_initial_data,
)
from .ground_state import closed_form_1d, least_energy, shoot_radial
from .model import (
    INTERIOR,
    LIMIT,
    PowerKG,
    action_S,
    classify_exponents,
    constraint_K,
    kinetic_T,
    nehari_K,
    pohozaev_P,
    pohozaev_residual,
)
from .paths import (
    AMPLITUDE_RAY,
    build_path_interior,
    build_path_limit,
    default_trial_family,
    project_to_constraint,
    verify_T_min_over_P,
    verify_min_on_constraint,
)
from .radial_core import (
    GridFunction,
    RadialGrid,
    h1_norm_sq,
    load_profile,
    save_profile,
)


def _fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise VarkgError("refusing to write a non-finite value to CSV")
    return "%.17g" % x


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [cell if isinstance(cell, str) else _fmt(cell) for cell in row]
            fh.write(",".join(cells) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(outdir: str, command: str, config: dict, seed: int, wall: float) -> None:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    manifest = {
        "command": command,
        "config": config,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": seed,
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "varkg": __version__,
        },
        "wall_time_s": wall,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    _write_json(os.path.join(outdir, "manifest.json"), manifest)


def _resolve(args, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _outdir(args, config: dict) -> str:
    path = _resolve(args, config, "outdir", "varkg-out")
    env = os.environ.get("VARKG_OUTDIR")
    if env:
        path = env
    os.makedirs(path, exist_ok=True)
    return path


def _make_ground_state(p: float, omega: float, dimension: int, outer: float, cells: int,
                       bracket=(1.0, 4.0)):
    grid = RadialGrid(dimension, outer, cells)
    if dimension == 1:
        return closed_form_1d(p, omega, grid)
    return shoot_radial(p, omega, dimension, grid, bracket=bracket)


def _grid_defaults(dimension: int) -> tuple[float, int]:
    if dimension == 1:
        return 80.0, 16000
    return 40.0, 4000


# -- subcommand handlers ------------------------------------------------------

def _cmd_ground_state(args, config, outdir):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    dim = int(_resolve(args, config, "N", 2))
    r_default, m_default = _grid_defaults(dim)
    outer = _resolve(args, config, "R", r_default)
    cells = int(_resolve(args, config, "M", m_default))
    lo = _resolve(args, config, "bracket_lo", 1.0)
    hi = _resolve(args, config, "bracket_hi", 4.0)
    gs = _make_ground_state(p, omega, dim, outer, cells, bracket=(lo, hi))
    save_profile(os.path.join(outdir, "profile.csv"), gs.profile)
    _write_json(os.path.join(outdir, "ground_state.json"), {
        "p": p, "omega": omega, "N": dim,
        "phi0": gs.center_value,
        "m": gs.level,
        "nehari_residual": gs.nehari_residual,
        "pohozaev_residual": gs.pohozaev_residual,
        "ode_residual": gs.ode_residual,
    })
    print(f"ground state: phi(0) = {gs.center_value:.6f}, m = {gs.level:.6f}")
    return 0


def _cmd_functionals(args, config, outdir):
    src = _resolve(args, config, "profile", None)
    if src is None:
        print("functionals: --from PROFILE is required", file=sys.stderr)
        return 2
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    alpha = _resolve(args, config, "alpha", None)
    beta = _resolve(args, config, "beta", None)
    v = load_profile(src)
    nl = PowerKG(p, omega)
    payload = {
        "S": action_S(v, nl),
        "T": kinetic_T(v),
        "P": pohozaev_P(v, nl),
        "nehari_K": nehari_K(v, nl),
        "pohozaev_residual": pohozaev_residual(v, nl),
        "h1_norm_sq": h1_norm_sq(v),
    }
    if alpha is not None and beta is not None:
        se = classify_exponents(alpha, beta, p, v.grid.dimension)
        payload["alpha"], payload["beta"] = alpha, beta
        payload["region"] = se.region
        payload["K"] = constraint_K(v, nl, se)
    _write_json(os.path.join(outdir, "functionals.json"), payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_path(args, config, outdir):
    src = _resolve(args, config, "profile", None)
    if src is None:
        print("path: --from PROFILE is required", file=sys.stderr)
        return 2
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    alpha = _resolve(args, config, "alpha", 1.0)
    beta = _resolve(args, config, "beta", 0.0)
    v = load_profile(src)
    nl = PowerKG(p, omega)
    se = classify_exponents(alpha, beta, p, v.grid.dimension)
    if se.region == INTERIOR:
        lam_star, projected = project_to_constraint(v, nl, se)
        path = build_path_interior(projected, nl, se)
    elif se.region == LIMIT:
        lam_star, projected = project_to_constraint(v, nl, se, ray=AMPLITUDE_RAY)
        path = build_path_limit(projected, nl, se)
    else:
        raise WrongRegion(f"({alpha:g},{beta:g}) is not an admissible exponent pair")
    _write_csv(os.path.join(outdir, "path.csv"), ["t", "action"],
               zip(path.t, path.action_values))
    _write_json(os.path.join(outdir, "path.json"), {
        "alpha": alpha, "beta": beta, "region": se.region,
        "lambda_star": lam_star,
        "max_action": path.max_action,
        "argmax_t": float(path.t[path.argmax_index]),
        "endpoint_action": float(path.action_values[-1]),
        "admissible": path.admissible,
    })
    print(f"path max action = {path.max_action:.6f} (admissible: {path.admissible})")
    return 0


def _member_rows(report):
    for i in range(report.members_total):
        lam = report.lambdas[i]
        s = report.actions[i]
        yield (i, "" if lam is None else _fmt(lam), "" if s is None else _fmt(s))


def _cmd_verify_theorem1(args, config, outdir, seed):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    dim = int(_resolve(args, config, "N", 1))
    r_default, m_default = _grid_defaults(dim)
    outer = _resolve(args, config, "R", r_default)
    cells = int(_resolve(args, config, "M", m_default))
    alpha = _resolve(args, config, "alpha", 1.0)
    beta = _resolve(args, config, "beta", 0.0)
    count = int(_resolve(args, config, "family_size", 50))
    se = classify_exponents(alpha, beta, p, dim)
    gs = _make_ground_state(p, omega, dim, outer, cells)
    m_ref = least_energy(gs)
    family = default_trial_family(gs, count=count, seed=seed)
    report = verify_min_on_constraint(family, gs.nonlinearity, se, m_ref)
    _write_csv(os.path.join(outdir, "theorem1_members.csv"),
               ["index", "lambda_star", "action"], _member_rows(report))
    _write_json(os.path.join(outdir, "theorem1.json"), {
        "alpha": alpha, "beta": beta, "region": report.region,
        "min_S": report.min_action, "m_ref": m_ref,
        "argmin_index": report.argmin_index,
        "failures": len(report.failures),
        "pass": report.passed,
    })
    print(f"theorem-1 check ({alpha:g},{beta:g}): min S = {report.min_action:.6f}, "
          f"m = {m_ref:.6f}, pass = {report.passed}")
    return 0 if report.passed else 1


def _cmd_verify_theorem2(args, config, outdir, seed):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    outer = _resolve(args, config, "R", 40.0)
    cells = int(_resolve(args, config, "M", 4000))
    alpha = _resolve(args, config, "alpha", 1.0)
    beta = _resolve(args, config, "beta", 1.0)
    count = int(_resolve(args, config, "family_size", 20))
    tol = _resolve(args, config, "tol", 0.01)
    se = classify_exponents(alpha, beta, p, 2)
    gs = _make_ground_state(p, omega, 2, outer, cells)
    m_ref = least_energy(gs)
    family = default_trial_family(gs, count=count, seed=seed)
    report = verify_min_on_constraint(family, gs.nonlinearity, se, m_ref)
    path = build_path_limit(gs.profile, gs.nonlinearity, se)
    path_ok = path.admissible and abs(path.max_action - m_ref) <= tol * m_ref
    passed = report.passed and path_ok
    _write_csv(os.path.join(outdir, "theorem2_members.csv"),
               ["index", "lambda_star", "action"], _member_rows(report))
    _write_csv(os.path.join(outdir, "theorem2_path.csv"), ["t", "action"],
               zip(path.t, path.action_values))
    _write_json(os.path.join(outdir, "theorem2.json"), {
        "alpha": alpha, "beta": beta, "region": report.region,
        "min_S": report.min_action, "m_ref": m_ref,
        "path_max": path.max_action, "path_admissible": path.admissible,
        "pass": passed,
    })
    print(f"theorem-2 check ({alpha:g},{beta:g}): min S = {report.min_action:.6f}, "
          f"path max = {path.max_action:.6f}, m = {m_ref:.6f}, pass = {passed}")
    return 0 if passed else 1


def _cmd_verify_lemma_mint(args, config, outdir, seed):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    outer = _resolve(args, config, "R", 40.0)
    cells = int(_resolve(args, config, "M", 4000))
    amps_raw = _resolve(args, config, "amplitudes", "1,1.1,1.25,1.5,1.75,2")
    tol = _resolve(args, config, "tol", 0.01)
    amplitudes = [float(tok) for tok in str(amps_raw).split(",") if tok.strip()]
    gs = _make_ground_state(p, omega, 2, outer, cells)
    m_ref = least_energy(gs)
    q = gs.profile
    rng = np.random.default_rng(seed)
    family = [GridFunction(q.grid, c * q.values) for c in amplitudes]
    for _ in range(4):
        eps = rng.uniform(0.05, 0.2)
        width = rng.uniform(1.0, 3.0)
        bump = 1.0 + eps * np.exp(-((q.grid.r / width) ** 2))
        family.append(GridFunction(q.grid, q.values * bump))
    report = verify_T_min_over_P(family, gs.nonlinearity, m_ref)
    amp_devs = [abs(report.kinetics[i] - m_ref) / m_ref
                for i in range(len(amplitudes)) if report.kinetics[i] is not None]
    scaling_ok = len(amp_devs) == len(amplitudes) and max(amp_devs) <= tol
    passed = report.passed and scaling_ok
    _write_csv(os.path.join(outdir, "lemma_minT_members.csv"),
               ["index", "lambda0", "kinetic"],
               ((i, "" if report.lambdas[i] is None else _fmt(report.lambdas[i]),
                 "" if report.kinetics[i] is None else _fmt(report.kinetics[i]))
                for i in range(report.members_total)))
    _write_json(os.path.join(outdir, "lemma_minT.json"), {
        "m_ref": m_ref, "min_T": report.min_kinetic,
        "amplitude_members": len(amplitudes),
        "max_amplitude_deviation": max(amp_devs) if amp_devs else None,
        "pass": passed,
    })
    print(f"min-T check: min T = {report.min_kinetic:.6f}, m = {m_ref:.6f}, pass = {passed}")
    return 0 if passed else 1


def _trajectory_rows(traj):
    for rec in traj.records:
        yield (rec.t, rec.energy, rec.action, rec.p_value, rec.kinetic,
               rec.h1_norm, "1" if rec.in_invariant_set else "0")


def _cmd_evolve(args, config, outdir):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    outer = _resolve(args, config, "R", 80.0)
    cells = int(_resolve(args, config, "M", 4000))
    lam = _resolve(args, config, "lam", 1.05)
    mu = _resolve(args, config, "mu", 1.05)
    t_max = _resolve(args, config, "tmax", 20.0)
    factor = _resolve(args, config, "blowup_factor", 5.0)
    cfl = _resolve(args, config, "cfl", 0.4)
    gs = _make_ground_state(p, omega, 2, outer, cells)
    u0, report = make_initial_data(gs, lam, mu)
    v0 = GridFunction.zeros(u0.grid)
    traj = evolve(u0, v0, gs.nonlinearity, t_max, blowup_factor=factor,
                  m_ref=report["m_ref"], cfl=cfl)
    _write_csv(os.path.join(outdir, "trajectory.csv"),
               ["t", "E", "S", "P", "T", "H1", "in_I"], _trajectory_rows(traj))
    drift_end = -1 if traj.termination == BLOWUP_DETECTED else None
    payload = {
        "lambda": lam, "mu": mu,
        "initial": report,
        "termination": traj.termination,
        "t_final": traj.records[-1].t,
        "records": len(traj.records),
        "energy_drift": energy_drift(traj, end=drift_end)
        if len(traj.records) > 2 else 0.0,
    }
    if report["in_invariant_set"]:
        monitor = invariant_monitor(traj)
        payload["min_P"] = monitor.min_p
        payload["in_I_throughout"] = monitor.in_set_throughout
    _write_json(os.path.join(outdir, "evolve.json"), payload)
    print(f"evolution: termination = {traj.termination} at t = {traj.records[-1].t:.4f}")
    return 0


def _cmd_instability_sweep(args, config, outdir):
    p = _resolve(args, config, "p", 3.0)
    omega = _resolve(args, config, "omega", 0.0)
    outer = _resolve(args, config, "R", 80.0)
    cells = int(_resolve(args, config, "M", 4000))
    t_max = _resolve(args, config, "tmax", 20.0)
    factor = _resolve(args, config, "blowup_factor", 5.0)
    lam_raw = _resolve(args, config, "lambda_grid", "1.02,1.05,1.1")
    mu_raw = _resolve(args, config, "mu_grid", "1.0,1.05")
    lams = [float(tok) for tok in str(lam_raw).split(",") if tok.strip()]
    mus = [float(tok) for tok in str(mu_raw).split(",") if tok.strip()]
    gs = _make_ground_state(p, omega, 2, outer, cells)
    rows = []
    for lam in lams:
        for mu in mus:
            u0, report = make_initial_data(gs, lam, mu)
            v0 = GridFunction.zeros(u0.grid)
            traj = evolve(u0, v0, gs.nonlinearity, t_max, blowup_factor=factor,
                          m_ref=report["m_ref"])
            escape = traj.records[-1].t if traj.termination == BLOWUP_DETECTED else None
            rows.append((lam, mu, "1" if report["in_invariant_set"] else "0",
                         traj.termination, "" if escape is None else _fmt(escape)))
    _write_csv(os.path.join(outdir, "sweep.csv"),
               ["lambda", "mu", "in_I_initial", "termination", "t_escape"], rows)
    print(f"instability sweep: {len(rows)} runs written")
    return 0


def _cmd_selftest(args, config, outdir):
    checks = []

    def check(name, value, expected, tol):
        ok = abs(value - expected) <= tol
        checks.append(ok)
        print(f"{name} = {value:.6f} (expected {expected:.6f}, tol {tol:g}) "
              f"{'PASS' if ok else 'FAIL'}")

    grid = RadialGrid(1, 20.0, 40000)
    gs = closed_form_1d(3.0, 0.0, grid)
    nl = gs.nonlinearity
    m = least_energy(gs)
    print(f"m = {m:.6f}")
    check("S(phi)", m, 4.0 / 3.0, 1e-4)
    check("T(phi)", kinetic_T(gs.profile), 2.0 / 3.0, 1e-4)
    check("P(phi)", pohozaev_P(gs.profile, nl), -2.0 / 3.0, 1e-4)
    check("K(phi)", nehari_K(gs.profile, nl), 0.0, 1e-4)
    check("pohozaev_residual(phi)", pohozaev_residual(gs.profile, nl), 0.0, 1e-4)
    se = classify_exponents(1.0, 0.0, 3.0, 1)
    path = build_path_interior(gs.profile, nl, se)
    check("path max action", path.max_action, m, 1e-3)
    lam_star, _ = project_to_constraint(gs.profile, nl, se)
    check("projection idempotence", lam_star, 1.0, 1e-6)
    passed = all(checks)
    print(f"selftest: {'PASS' if passed else 'FAIL'} ({sum(checks)}/{len(checks)})")
    return 0 if passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varkg",
        description="Variational toolkit for radial nonlinear Klein-Gordon standing waves")
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    sub = parser.add_subparsers(dest="command")

    def add(name, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.add_argument("--outdir")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--p", type=float)
        sp.add_argument("--omega", type=float)
        sp.add_argument("--R", type=float)
        sp.add_argument("--M", type=int)
        return sp

    sp = add("ground-state", help="compute a ground-state profile")
    sp.add_argument("--N", type=int)
    sp.add_argument("--bracket-lo", dest="bracket_lo", type=float)
    sp.add_argument("--bracket-hi", dest="bracket_hi", type=float)

    sp = add("functionals", help="evaluate S, T, P, K on a stored profile")
    sp.add_argument("--from", dest="profile")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)

    sp = add("path", help="project a profile and build its mountain-pass path")
    sp.add_argument("--from", dest="profile")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)

    sp = add("verify-theorem1", help="minimize S over an interior constraint")
    sp.add_argument("--N", type=int)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--family-size", dest="family_size", type=int)

    sp = add("verify-theorem2", help="limit-pair minimization plus glued path")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--family-size", dest="family_size", type=int)
    sp.add_argument("--tol", type=float)

    sp = add("verify-lemma-minT", help="kinetic minimum over the P >= 0 set")
    sp.add_argument("--amplitudes")
    sp.add_argument("--tol", type=float)

    sp = add("evolve", help="run one radial evolution")
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--tmax", type=float)
    sp.add_argument("--blowup-factor", dest="blowup_factor", type=float)
    sp.add_argument("--cfl", type=float)

    sp = add("instability-sweep", help="evolve over a (lambda, mu) grid")
    sp.add_argument("--lambda-grid", dest="lambda_grid")
    sp.add_argument("--mu-grid", dest="mu_grid")
    sp.add_argument("--tmax", type=float)
    sp.add_argument("--blowup-factor", dest="blowup_factor", type=float)

    add("selftest", help="closed-form oracle suite")
    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            print(f"varkg: cannot read config {args.config}: {err}", file=sys.stderr)
            return 2
        if not isinstance(config, dict):
            print("varkg: config must be a JSON object", file=sys.stderr)
            return 2
    seed = int(_resolve(args, config, "seed", 0))
    outdir = _outdir(args, config)
    handlers = {
        "ground-state": lambda: _cmd_ground_state(args, config, outdir),
        "functionals": lambda: _cmd_functionals(args, config, outdir),
        "path": lambda: _cmd_path(args, config, outdir),
        "verify-theorem1": lambda: _cmd_verify_theorem1(args, config, outdir, seed),
        "verify-theorem2": lambda: _cmd_verify_theorem2(args, config, outdir, seed),
        "verify-lemma-minT": lambda: _cmd_verify_lemma_mint(args, config, outdir, seed),
        "evolve": lambda: _cmd_evolve(args, config, outdir),
        "instability-sweep": lambda: _cmd_instability_sweep(args, config, outdir),
        "selftest": lambda: _cmd_selftest(args, config, outdir),
    }
    started = time.perf_counter()
    try:
        status = handlers[args.command]()
    except FileNotFoundError as err:
        print(f"varkg: {err}", file=sys.stderr)
        return 2
    except VarkgError as err:
        print(f"varkg: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - started
    effective = dict(config)
    effective.update({key: value for key, value in sorted(vars(args).items())
                      if key not in ("command", "config") and value is not None})
    effective.update({"command": args.command, "seed": seed})
    _write_manifest(outdir, args.command, effective, seed, wall)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
