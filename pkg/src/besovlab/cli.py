"""Command-line surface: kernel-check, constants, seminorm, sweep,
experiment and print-defaults subcommands."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import BesovLabError, InputError
from .experiments import (EXPERIMENT_KINDS, ExperimentConfig, default_config,
                          run, validate_config, _fmt, _write_csv,
                          _kernel_eps_list, _json_default)
from .jumps import dimensional_constants
from .kernels import RadialKernelFamily, audit_rows
from .limits import epsilon_sweep
from .seminorms import (besov_constant_at, besov_seminorm_q,
                        brq_double_integral, directional_variation,
                        gagliardo_constant_at, gagliardo_seminorm_q,
                        spherical_variation)

FUNCTIONALS = ("gagliardo-seminorm", "besov-seminorm", "brq",
               "directional-variation", "spherical-variation",
               "besov-constant", "gagliardo-constant")


def _load_config(path) -> ExperimentConfig:
    if path is None:
        return default_config("jump_chain")
    with open(path, "r", encoding="utf-8") as fh:
        return validate_config(json.load(fh))


def _functional_closure(name: str, cfg: ExperimentConfig):
    f = cfg.build_field()
    region = cfg.build_region(f)
    params = cfg.build_params(region)
    budget = cfg.build_budget()
    if name == "gagliardo-seminorm":
        return lambda eps: gagliardo_seminorm_q(f, params, budget=budget)
    if name == "besov-seminorm":
        return lambda eps: besov_seminorm_q(f, params)
    if name == "brq":
        return lambda eps: brq_double_integral(f, params, eps, budget=budget)
    if name == "directional-variation":
        direction = cfg.params.get("direction", [1.0] + [0.0] * (f.dim_in - 1))
        return lambda eps: directional_variation(f, params, direction, eps,
                                                 budget=budget)
    if name == "spherical-variation":
        return lambda eps: spherical_variation(f, params, eps,
                                               rule=cfg.sphere_rule, budget=budget)
    if name == "besov-constant":
        idx = int(cfg.params.get("kernel_index", 0))
        kernel = cfg.build_kernels(f.dim_in)[idx]
        return lambda eps: besov_constant_at(f, params, kernel, eps, budget=budget)
    if name == "gagliardo-constant":
        m = cfg.build_mollifier(f.dim_in)
        return lambda eps: gagliardo_constant_at(f, m, params, eps, budget=budget)
    raise InputError(f"functional: must be one of {FUNCTIONALS}, got {name!r}")


def _cmd_print_defaults(args) -> int:
    kinds = [args.kind] if args.kind else list(EXPERIMENT_KINDS)
    out = {k: default_config(k).to_dict() for k in kinds}
    print(json.dumps(out if args.kind is None else out[args.kind],
                     sort_keys=True, indent=2))
    return 0


def _cmd_constants(args) -> int:
    dims = args.dim if args.dim else [1, 2, 3]
    q_list = args.q if args.q else [1.0, 2.0]
    tables = [dimensional_constants(n, tuple(q_list)) for n in dims]
    header = f"{'N':>2} {'sphere':>12} {'moment1':>14} {'C_N':>14} {'nc_residual':>12}"
    print(header)
    for t in tables:
        res = f"{t.nc_residual:.3e}" if t.nc_residual is not None else "-"
        print(f"{t.n:>2} {t.sphere_measure:>12.8f} {t.moment1:>14.10f} "
              f"{t.c_n:>14.10f} {res:>12}")
    payload = json.dumps([t.to_dict() for t in tables], sort_keys=True, indent=2,
                         default=_json_default)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "constants.json"), "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return 0


def _cmd_kernel_check(args) -> int:
    cfg = _load_config(args.config)
    grid = cfg.build_eps_grid()
    kernel_kwargs = {}
    if args.family == "logarithmic":
        kernel_kwargs["omega"] = args.omega
    if args.family == "sigma_approx":
        kernel_kwargs["sigma_ratio"] = args.sigma_ratio
    k = RadialKernelFamily(args.family, args.dim, **kernel_kwargs)
    rows = audit_rows(k, _kernel_eps_list(k, grid), deltas=tuple(cfg.deltas),
                      alphas=tuple(cfg.alphas))
    header = list(rows[0].keys())
    table = [[r[h] for h in header] for r in rows]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"kernel_audit_{k.kind}_N{args.dim}.csv")
        _write_csv(path, header, table)
        print(path)
    else:
        print(",".join(header))
        for row in table:
            print(",".join(_fmt(v) for v in row))
    return 0


def _cmd_seminorm(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    fn = _functional_closure(args.functional, cfg)
    out = fn(args.epsilon)
    record = {"functional": args.functional, "params": cfg.params,
              "epsilon": args.epsilon, "value": out.value,
              "error": out.error_estimate, "provenance": out.provenance}
    print(json.dumps(record, sort_keys=True, default=_json_default))
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    fn = _functional_closure(args.functional, cfg)
    which = "gagliardo_grid" if args.functional == "gagliardo-constant" else "eps_grid"
    sweep = epsilon_sweep(fn, cfg.build_eps_grid(which), threads=args.threads,
                          functional_id=args.functional)
    rows = [(r.eps, r.value, r.error, "" if r.ok else r.note) for r in sweep.rows]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"sweep_{args.functional}.csv")
        _write_csv(path, ["epsilon", "value", "error", "flag"], rows)
        print(path)
    else:
        print("epsilon,value,error,flag")
        for row in rows:
            print(",".join(_fmt(v) for v in row))
    return 0


def _cmd_experiment(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = args.out or "out"
    report = run(cfg, out_dir, threads=args.threads)
    for verdict in report.verdicts:
        status = "PASS" if verdict["pass"] else "FAIL"
        print(f"{status} {verdict['chain']}: worst_violation="
              f"{verdict['worst_violation']:.6g} tolerance={verdict['tolerance']:.6g}")
    print(f"summary: {os.path.join(out_dir, 'summary.json')}")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besovlab",
                                 description="nonlocal-seminorm limit laboratory")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker threads for sweep rows (outputs are invariant)")
    ap.add_argument("--seed", type=int, default=None, help="override config seed")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("print-defaults", help="print default experiment configs")
    p.add_argument("--kind", choices=EXPERIMENT_KINDS, default=None)
    p.set_defaults(fn=_cmd_print_defaults)

    p = sub.add_parser("constants", help="dimensional constants table")
    p.add_argument("--dim", type=int, action="append", choices=(1, 2, 3))
    p.add_argument("--q", type=float, action="append")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("kernel-check", help="CSV audit of one kernel family")
    p.add_argument("--family", required=True,
                   choices=("trivial", "logarithmic", "sigma_approx"))
    p.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--omega", type=float, default=0.5)
    p.add_argument("--sigma-ratio", dest="sigma_ratio", type=float, default=0.5)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_kernel_check)

    p = sub.add_parser("seminorm", help="evaluate one functional at one epsilon")
    p.add_argument("--functional", required=True, choices=FUNCTIONALS)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(fn=_cmd_seminorm)

    p = sub.add_parser("sweep", help="epsilon sweep of one functional (CSV)")
    p.add_argument("--functional", required=True, choices=FUNCTIONALS)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("experiment", help="run a configured experiment")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BesovLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
