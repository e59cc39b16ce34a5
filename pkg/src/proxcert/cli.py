"""Experiment harness: run, bound-study and offline-certify commands.

Configs are INI files (flat key=value under [section] headers). Artifacts
per run directory: the serialized instance, reference files, one trace CSV
and one or more certificate CSVs per solver, per-solver parameter files, a
plain-text summary, and (for the imaging experiment) PGM reconstructions.
All CSVs are byte-deterministic given config and seed; wall-clock times go
to the summary only.
"""

import argparse
import configparser
import math
import os
import sys
import time

import numpy as np

from .certificates import CertificateReport, gladmm_bound
from .gladmm import gladmm_run, ladmm_run
from .glalm import GlalmConfig, glalm_run
from .gpgm import gpgm_run
from .linalg import load_matrix_txt, save_matrix_txt
from .problems import (gen_cs_tv, gen_logistic, gen_qp, load_instance,
                       logistic_stop_metric, reference_solve, save_instance,
                       write_pgm)
from .schedules import GladmmConfig, validate_gladmm
from .trace import MetricStop, read_trace_csv

PROFILES = {
    "desk": {
        "logistic": dict(m=100, n=1000, s=10, lam=1.0),
        "qp": dict(m=20, n=200),
        "cs_tv": dict(size=16, ratio=0.3, sigma_sq=0.001, lam=1e-3),
    },
    "paper": {
        "logistic": dict(m=300, n=3000, s=30, lam=1.0),
        "qp": dict(m=80, n=1000),
        "cs_tv": dict(size=64, ratio=0.3, sigma_sq=0.001, lam=1e-3),
    },
}

DEFAULT_MAX_ITERS = {"logistic": 2000, "qp": 1000, "cs_tv": 300}
SOLVERS_BY_KIND = {
    "logistic": ("gpgm", "apgm"),
    "qp": ("glalm", "alalm"),
    "cs_tv": ("gladmm", "aladmm", "ladmm"),
}


class CliError(RuntimeError):
    pass


def _fmt(v):
    return repr(float(v))


# ---------------------------------------------------------------------------
# config handling

def load_config(path):
    if not os.path.exists(path):
        raise CliError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise CliError(f"config parse error: {exc}")
    if "experiment" not in cp:
        raise CliError("config needs an [experiment] section")
    return cp


def _get(cp, section, key, default=None):
    if section in cp and key in cp[section]:
        return cp[section][key].strip()
    return default


def _parse_solver_spec(spec):
    """'gpgm:alpha=0.8' -> ('gpgm', {'alpha': '0.8'})."""
    parts = [p.strip() for p in spec.split(":") if p.strip()]
    name = parts[0]
    overrides = {}
    for p in parts[1:]:
        if "=" not in p:
            raise CliError(f"bad solver parameter {p!r} in {spec!r}")
        key, _, val = p.partition("=")
        overrides[key.strip()] = val.strip()
    return name, overrides


def _solver_params(cp, name, overrides):
    params = dict(cp[f"solver.{name}"]) if f"solver.{name}" in cp else {}
    params.update(overrides)
    return params


def _float_or_auto(params, key, default_auto):
    val = params.get(key)
    if val is None or val == "auto":
        return default_auto()
    return float(val)


def resolve_out_dir(out, default_name):
    root = os.environ.get("PROXCERT_OUT_ROOT")
    path = out if out else default_name
    if root and not os.path.isabs(path):
        path = os.path.join(root, path)
    return path


# ---------------------------------------------------------------------------
# instance + reference plumbing

def _generate(kind, params, seed):
    if kind == "logistic":
        return gen_logistic(params["m"], params["n"], params["s"],
                            params["lam"], seed)
    if kind == "qp":
        return gen_qp(params["m"], params["n"], seed)
    if kind == "cs_tv":
        return gen_cs_tv(params["size"], params["ratio"], params["sigma_sq"],
                         params["lam"], seed)
    raise CliError(f"unknown experiment kind {kind!r}")


def _instance_params(cp, kind, profile):
    if kind not in PROFILES["desk"]:
        raise CliError(f"unknown experiment kind {kind!r}")
    params = dict(PROFILES[profile][kind])
    sec = cp["instance"] if "instance" in cp else {}
    for key in params:
        if key in sec:
            params[key] = type(params[key])(
                float(sec[key]) if isinstance(params[key], float) else int(sec[key]))
    if kind == "logistic" and _get(cp, "instance", "mn_order") == "features_samples":
        params["m"], params["n"] = params["n"], params["m"]
    return params


def _save_reference(directory, ref):
    os.makedirs(directory, exist_ok=True)
    save_matrix_txt(os.path.join(directory, "x_star.txt"), ref.x.reshape(-1, 1))
    meta = {"f_star": _fmt(ref.f), "method": ref.method,
            "z_norm": _fmt(ref.z_norm)}
    if ref.z is not None:
        save_matrix_txt(os.path.join(directory, "z_star.txt"), ref.z.reshape(-1, 1))
    if ref.y is not None:
        save_matrix_txt(os.path.join(directory, "y_star.txt"), ref.y.reshape(-1, 1))
    with open(os.path.join(directory, "refs.txt"), "w") as fh:
        for key, val in meta.items():
            fh.write(f"{key}={val}\n")


def _load_reference(directory):
    path = os.path.join(directory, "refs.txt")
    if not os.path.exists(path):
        raise CliError(f"missing reference data in {directory} (refs.txt); "
                       "certificates never estimate references")
    meta = {}
    with open(path) as fh:
        for line in fh:
            key, _, val = line.strip().partition("=")
            meta[key] = val
    out = {"f_star": float(meta["f_star"]), "method": meta.get("method", "?"),
           "x_star": load_matrix_txt(os.path.join(directory, "x_star.txt")).ravel()}
    zp = os.path.join(directory, "z_star.txt")
    out["z_star"] = load_matrix_txt(zp).ravel() if os.path.exists(zp) else None
    yp = os.path.join(directory, "y_star.txt")
    out["y_star"] = load_matrix_txt(yp).ravel() if os.path.exists(yp) else None
    return out


def _write_meta(path, entries):
    with open(path, "w") as fh:
        for key, val in entries.items():
            fh.write(f"{key}={val}\n")


def _read_meta(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                key, _, val = line.partition("=")
                out[key.strip()] = val.strip()
    return out


# ---------------------------------------------------------------------------
# run command

def cmd_run(args):
    cp = load_config(args.config)
    kind = _get(cp, "experiment", "kind")
    if kind is None:
        raise CliError("[experiment] kind is required")
    profile = args.profile or _get(cp, "experiment", "profile", "desk")
    if profile not in PROFILES:
        raise CliError(f"unknown profile {profile!r}")
    seed = args.seed if args.seed is not None else int(_get(cp, "experiment", "seed", "0"))
    out_dir = resolve_out_dir(args.out or _get(cp, "experiment", "out"),
                              f"runs/{kind}_{profile}_seed{seed}")
    params = _instance_params(cp, kind, profile)
    solver_specs = [s.strip() for s in
                    _get(cp, "run", "solvers", " ".join(SOLVERS_BY_KIND[kind][:2]))
                    .replace(",", " ").split()]
    max_iters = int(_get(cp, "run", "max_iters", str(DEFAULT_MAX_ITERS[kind])))
    ref_budget = int(_get(cp, "run", "reference_budget", "60000"))
    ref_tol = float(_get(cp, "run", "reference_tol", "1e-12"))

    try:
        os.makedirs(out_dir, exist_ok=True)
        probe = os.path.join(out_dir, ".write_probe")
        with open(probe, "w") as fh:
            fh.write("ok")
        os.remove(probe)
    except OSError as exc:
        raise CliError(f"output directory not writable: {exc}")

    inst = _generate(kind, params, seed)
    save_instance(os.path.join(out_dir, "instance"), inst)

    summary = [f"experiment={kind} profile={profile} seed={seed}",
               f"instance: {params}"]
    ref = _compute_reference(kind, inst, ref_tol, ref_budget, max_iters)
    _save_reference(os.path.join(out_dir, "refs"), ref)
    summary.append(f"reference: method={ref.method} F*={ref.f!r} "
                   f"||z*||={ref.z_norm!r}")

    for spec in solver_specs:
        name, overrides = _parse_solver_spec(spec)
        if name not in SOLVERS_BY_KIND[kind]:
            raise CliError(f"solver {name!r} not available for experiment "
                           f"{kind!r} (choose from {SOLVERS_BY_KIND[kind]})")
        t0 = time.perf_counter()
        trace, reports = _run_solver(kind, name, _solver_params(cp, name, overrides),
                                     inst, ref, max_iters)
        wall = time.perf_counter() - t0
        trace.write_csv(os.path.join(out_dir, f"trace_{name}.csv"),
                        wall_times=args.wall_times)
        _write_meta(os.path.join(out_dir, f"meta_{name}.txt"),
                    {k: repr(v) if isinstance(v, float) else v
                     for k, v in trace.meta.items()})
        for rep in reports:
            rep.write_csv(os.path.join(out_dir, f"cert_{name}_{rep.name}.csv"))
        if kind == "cs_tv":
            write_pgm(os.path.join(out_dir, f"recon_{name}.pgm"),
                      trace.final.get("x_ag", trace.final["x"]), size=inst.size)
        last = trace.rows[-1]
        stats = " ".join(f"{c}={last[c]!r}" for c in trace.columns
                         if c not in ("elapsed_s",))
        summary.append(f"solver {name}: iters={len(trace.rows)} {stats} "
                       f"wall_s={wall:.3f}")
        for rep in reports:
            summary.append(f"  cert {rep.summary()}")

    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write("\n".join(summary) + "\n")
    print(f"run complete: {out_dir}")
    return 0


def _compute_reference(kind, inst, ref_tol, ref_budget, max_iters):
    if kind == "cs_tv":
        gamma = 1.0 / math.sqrt(inst.problem.op_norm_sq())
        budget = max(20 * max_iters, 4000)
        return reference_solve(inst.problem, tol=ref_tol, budget=min(budget, ref_budget),
                               gamma=gamma)
    return reference_solve(inst.problem, tol=ref_tol, budget=ref_budget)


def _run_solver(kind, name, params, inst, ref, max_iters):
    prob = inst.problem
    if kind == "logistic":
        if name == "apgm":
            alpha, gamma = 1.0, prob.f.L
        else:
            alpha = float(params.get("alpha", 0.8))
            gamma = _float_or_auto(params, "gamma", lambda: prob.f.L / alpha)
        stop_eps = float(params.get("stop_eps", 1e-8))
        stop = MetricStop(stop_eps, lambda x: logistic_stop_metric(inst, x))
        trace = gpgm_run(prob, alpha=alpha, gamma=gamma, x1=np.zeros(prob.dim),
                         max_iters=max_iters, stop=stop, x_star=ref.x, f_star=ref.f)
        tol = 1e-8 * max(1.0, abs(ref.f))
        rep = CertificateReport(name="rate", tol_abs=tol, tol_rel=0.0)
        for row in trace.rows:
            rep.add(row["k"], row["obj_gap"], row["bound"],
                    flag="negative bound" if row["bound"] < 0 else "")
        return trace, [rep]

    if kind == "qp":
        if name == "alalm":
            alpha, kappa = 1.0, 1.0
        else:
            alpha = float(params.get("alpha", 0.5))
            kappa = float(params.get("kappa", 1.5))
        gamma = _float_or_auto(params, "gamma", lambda: 15.0 * inst.m)
        eta = params.get("eta")
        strict = params.get("strict", "true").lower() != "false"
        cfg = GlalmConfig(alpha=alpha, kappa=kappa, gamma=gamma,
                          eta=None if eta in (None, "auto") else float(eta),
                          strict=strict)
        trace = glalm_run(prob, cfg, max_iters=max_iters,
                          x_star=ref.x, f_star=ref.f, z_star=ref.z)
        rep_obj = CertificateReport(name="obj", tol_abs=1e-6, tol_rel=0.0)
        rep_feas = CertificateReport(name="feas", tol_abs=1e-6, tol_rel=0.0)
        for row in trace.rows:
            rep_obj.add(row["k"], abs(row["obj_gap"]), row["bound"])
            rep_feas.add(row["k"], row["feas"], row["bound"])
        return trace, [rep_obj, rep_feas]

    if kind == "cs_tv":
        gamma = _float_or_auto(params, "gamma",
                               lambda: 1.0 / math.sqrt(prob.op_norm_sq()))
        N = int(params.get("n_horizon", max_iters))
        if name == "ladmm":
            rho = _float_or_auto(params, "rho", lambda: gamma)
            trace = ladmm_run(prob, iters=N - 1, rho=rho,
                              x_star=ref.x, y_star=ref.y, z_star=ref.z,
                              f_star=ref.f, x_true=inst.x_true)
            return trace, []
        if name == "aladmm":
            alpha = beta = kappa = 1.0
            xi = float(params.get("xi", 1.5))
        else:
            alpha = float(params.get("alpha", 0.5))
            kappa = float(params.get("kappa", 1.5))
            xi = float(params.get("xi", 1.5))
            beta_s = params.get("beta", "auto")
            beta = None if beta_s == "auto" else float(beta_s)
        cfg = GladmmConfig(N=N, L=prob.f.L, alpha=alpha, kappa=kappa,
                           gamma=gamma, xi=xi, beta=beta)
        violations = validate_gladmm(cfg)
        if violations and name == "gladmm":
            raise CliError("schedule fails admissibility: " + str(violations[0]))
        trace = gladmm_run(prob, cfg, x_star=ref.x, y_star=ref.y, z_star=ref.z,
                           f_star=ref.f, x_true=inst.x_true)
        bound = gladmm_bound(N, cfg.L, cfg.alpha, cfg.beta, cfg.kappa,
                             cfg.gamma, cfg.xi, trace.final["x1"],
                             trace.final["y1"], ref.x, ref.y, ref.z, prob.B)
        last = trace.rows[-1]
        rep_obj = CertificateReport(name="obj", tol_abs=1e-5, tol_rel=0.0)
        rep_obj.add(N, abs(last["obj_gap"]), bound.total)
        rep_feas = CertificateReport(name="feas", tol_abs=1e-5, tol_rel=0.0)
        rep_feas.add(N, last["feas"], bound.total)
        return trace, [rep_obj, rep_feas]

    raise CliError(f"unknown experiment kind {kind!r}")


# ---------------------------------------------------------------------------
# bounds command

def cmd_bounds(args):
    cp = load_config(args.config)
    kind = _get(cp, "experiment", "kind")
    if kind not in ("logistic", "qp"):
        raise CliError("bound studies are defined for the logistic and qp "
                       f"experiments, not {kind!r}")
    profile = args.profile or _get(cp, "experiment", "profile", "desk")
    seed = args.seed if args.seed is not None else int(_get(cp, "experiment", "seed", "0"))
    out_dir = resolve_out_dir(args.out or _get(cp, "experiment", "out"),
                              f"runs/bounds_{kind}_{profile}_seed{seed}")
    os.makedirs(out_dir, exist_ok=True)
    params = _instance_params(cp, kind, profile)
    alphas = [float(a) for a in
              _get(cp, "bounds", "alphas", "0.2,0.4,0.6,0.8,1.0").split(",")]
    iters = int(_get(cp, "bounds", "iters", "400"))
    mode = _get(cp, "bounds", "mode", "fixed")
    if mode not in ("fixed", "coupled"):
        raise CliError(f"bounds mode must be 'fixed' or 'coupled', got {mode!r}")

    inst = _generate(kind, params, seed)
    prob = inst.problem
    ref = reference_solve(prob, budget=int(_get(cp, "run", "reference_budget", "60000")))
    L = prob.f.L
    lines = [f"bound study kind={kind} seed={seed} mode={mode} iters={iters}"]

    if kind == "logistic":
        d1sq = float(ref.x @ ref.x)
        ref_trace = gpgm_run(prob, alpha=1.0, gamma=L, x1=np.zeros(prob.dim),
                             max_iters=iters, x_star=ref.x, f_star=ref.f)
        hd_ref = np.asarray(ref_trace.extras["hat_dist"])
        bound_ref = 0.5 * L * (d1sq - hd_ref ** 2)
        for alpha in alphas:
            gamma = L if mode == "fixed" else L / alpha
            tr = gpgm_run(prob, alpha=alpha, gamma=gamma, x1=np.zeros(prob.dim),
                          max_iters=iters, x_star=ref.x, f_star=ref.f)
            hd = np.asarray(tr.extras["hat_dist"])
            ba = gamma / (2.0 * (2.0 - alpha)) * (d1sq - hd ** 2)
            lines.append(_write_bound_csv(
                os.path.join(out_dir, f"bounds_alpha_{alpha:g}.csv"),
                alpha, ba, bound_ref))
    else:
        kappas = [float(k) for k in _get(cp, "bounds", "kappas", "1.0,1.5").split(",")]
        gamma = 15.0 * inst.m
        d1sq = float(ref.x @ ref.x)
        zn2 = float(ref.z @ ref.z)
        for kappa in kappas:
            cfg1 = GlalmConfig(alpha=1.0, kappa=kappa, gamma=gamma, eta=2.0 * L)
            t1 = glalm_run(prob, cfg1, max_iters=iters, x_star=ref.x,
                           f_star=ref.f, z_star=ref.z)
            hd1 = np.asarray(t1.extras["hat_dist"])
            zd1 = np.asarray(t1.extras["zhat_dist"])
            bound_ref = 2.0 * L * (d1sq - hd1 ** 2) + (zn2 - zd1 ** 2) / (kappa * gamma)
            for alpha in alphas:
                eta = 2.0 * L if mode == "fixed" else 2.0 * L / alpha
                cfg = GlalmConfig(alpha=alpha, kappa=kappa, gamma=gamma, eta=eta,
                                  strict=(alpha == 1.0 or mode == "coupled"))
                tr = glalm_run(prob, cfg, max_iters=iters, x_star=ref.x,
                               f_star=ref.f, z_star=ref.z)
                hd = np.asarray(tr.extras["hat_dist"])
                zd = np.asarray(tr.extras["zhat_dist"])
                ba = eta / (2.0 - alpha) * (d1sq - hd ** 2) + (zn2 - zd ** 2) / (kappa * gamma)
                lines.append(_write_bound_csv(
                    os.path.join(out_dir, f"bounds_kappa_{kappa:g}_alpha_{alpha:g}.csv"),
                    alpha, ba, bound_ref, kappa=kappa))

    with open(os.path.join(out_dir, "bounds_summary.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"bound study complete: {out_dir}")
    return 0


def _write_bound_csv(path, alpha, bound_alpha, bound_ref, kappa=None):
    n = min(len(bound_alpha), len(bound_ref))
    with open(path, "w") as fh:
        fh.write("k,bound_alpha,bound_ref\n")
        for i in range(n):
            fh.write(f"{i + 1},{_fmt(bound_alpha[i])},{_fmt(bound_ref[i])}\n")
    ok = bool(np.all(bound_alpha[:n] <= bound_ref[:n] * (1.0 + 1e-9) + 1e-12))
    tag = f"kappa={kappa:g} alpha={alpha:g}" if kappa is not None else f"alpha={alpha:g}"
    first_bad = ""
    if not ok:
        bad = np.where(bound_alpha[:n] > bound_ref[:n] * (1.0 + 1e-9) + 1e-12)[0]
        first_bad = f" first_violation_k={bad[0] + 1}"
    return f"{tag}: bound_alpha<=bound_ref at all k: {ok}{first_bad}"


# ---------------------------------------------------------------------------
# certify command

def cmd_certify(args):
    run_dir = args.directory
    if not os.path.isdir(run_dir):
        raise CliError(f"not a run directory: {run_dir}")
    refs = _load_reference(os.path.join(run_dir, "refs"))
    traces = sorted(f for f in os.listdir(run_dir)
                    if f.startswith("trace_") and f.endswith(".csv"))
    if not traces:
        raise CliError(f"no trace CSVs in {run_dir}")
    n_viol = 0
    for fname in traces:
        name = fname[len("trace_"):-len(".csv")]
        meta_path = os.path.join(run_dir, f"meta_{name}.txt")
        meta = _read_meta(meta_path) if os.path.exists(meta_path) else {}
        header, rows = read_trace_csv(os.path.join(run_dir, fname))
        solver = meta.get("solver", name)
        if solver == "ladmm":
            print(f"{name}: baseline, no certificates")
            continue
        if solver == "gladmm":
            n_viol += _certify_gladmm(run_dir, name, meta, rows, refs)
        elif solver == "glalm":
            n_viol += _certify_per_iteration(name, rows, refs, two_sided=True,
                                             tol=1e-6, check_feas=True)
        else:
            tol = 1e-8 * max(1.0, abs(refs["f_star"]))
            n_viol += _certify_per_iteration(name, rows, refs, two_sided=False,
                                             tol=tol, check_feas=False)
    if n_viol:
        print(f"certification FAILED: {n_viol} violations")
        return 1
    print("certification passed: no violations")
    return 0


def _certify_per_iteration(name, rows, refs, two_sided, tol, check_feas):
    f_star = refs["f_star"]
    bad = 0
    for row in rows:
        gap = row["obj"] - f_star
        measured = abs(gap) if two_sided else gap
        if not math.isfinite(row["bound"]):
            raise CliError(f"{name}: trace has no bound column values; "
                           "rerun with references")
        if measured > row["bound"] + tol:
            bad += 1
        if check_feas and row["feas"] > row["bound"] + tol:
            bad += 1
    status = "ok" if bad == 0 else f"{bad} VIOLATIONS"
    print(f"{name}: {len(rows)} iterations checked, {status}")
    return bad


def _certify_gladmm(run_dir, name, meta, rows, refs):
    cfg = GladmmConfig(N=int(meta["N"]), L=float(meta["L"]),
                       alpha=float(meta["alpha"]), beta=float(meta["beta"]),
                       kappa=float(meta["kappa"]), gamma=float(meta["gamma"]),
                       xi=float(meta["xi"]))
    violations = validate_gladmm(cfg)
    if violations:
        raise CliError(f"{name}: schedule fails admissibility, refusing to "
                       f"certify: {violations[0]}")
    if refs["y_star"] is None or refs["z_star"] is None:
        raise CliError(f"{name}: two-block certification needs y_star and "
                       "z_star references")
    inst = load_instance(os.path.join(run_dir, "instance"))
    prob = inst.problem
    x1 = np.zeros(prob.A.in_dim)
    y1 = prob.A.forward(x1) + prob.b
    bound = gladmm_bound(cfg.N, cfg.L, cfg.alpha, cfg.beta, cfg.kappa,
                         cfg.gamma, cfg.xi, x1, y1, refs["x_star"],
                         refs["y_star"], refs["z_star"], prob.B)
    last = rows[-1]
    bad = 0
    if abs(last["obj"] - refs["f_star"]) > bound.total + 1e-5:
        bad += 1
    if last["feas"] > bound.total + 1e-5:
        bad += 1
    status = "ok" if bad == 0 else f"{bad} VIOLATIONS"
    print(f"{name}: final aggregate vs horizon bound {bound.total!r}, {status}")
    return bad


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="proxcert",
        description="accelerated splitting solvers with rate certificates")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="generate an instance, solve, certify")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--profile", choices=("desk", "paper"), default=None)
    p_run.add_argument("--wall-times", action="store_true",
                       help="write measured wall times into trace CSVs "
                            "(breaks byte-for-byte rerun identity)")
    p_run.set_defaults(func=cmd_run)

    p_b = sub.add_parser("bounds", help="rate-bound comparison study")
    p_b.add_argument("config")
    p_b.add_argument("--seed", type=int, default=None)
    p_b.add_argument("--out", default=None)
    p_b.add_argument("--profile", choices=("desk", "paper"), default=None)
    p_b.set_defaults(func=cmd_bounds)

    p_c = sub.add_parser("certify", help="re-check certificates of a run dir")
    p_c.add_argument("directory")
    p_c.set_defaults(func=cmd_certify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surface solver/reference failures with context
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
