"""Command line front end: ``torres inspect|jk|mp|bside|verify config.json``.

Reports go to stdout as JSON, diagnostics to stderr.  Exit codes: 0 pass,
1 mismatch, 2 invalid input (including domain refusal), 3 unverified
numeric side.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import aside, bside, configuration as cfgmod, residues
from .errors import (ConsistencyError, InvalidConfiguration, NearSingularError, TorresError)
from .jobs import JobConfig, dumps, format_complex, format_rational, generate_z, load_config

EXIT_PASS, EXIT_MISMATCH, EXIT_INVALID, EXIT_UNVERIFIED = 0, 1, 2, 3


def _labels(sigma) -> list:
    return [i + 1 for i in sigma]


def _vec(v) -> list:
    return [format_rational(x) for x in v]


def _chamber(cfg: JobConfig):
    A = cfg.configuration()
    cfgmod.require_valid(A)
    return A, cfgmod.chamber_of(A, cfg.xi0)


def _lambda_basis(cfg: JobConfig, A) -> tuple:
    if cfg.lambda_basis is None:
        return bside.default_lambda_basis(A.r)
    return tuple(tuple(l) for l in cfg.lambda_basis)


def _settings(cfg: JobConfig, args) -> bside.HomotopySettings:
    return bside.HomotopySettings(seed=cfg.seed if args.seed is None else args.seed,
                                  threads=max(1, args.threads))


def cmd_inspect(cfg: JobConfig, args) -> tuple[dict, int]:
    A = cfg.configuration()
    diag = cfgmod.validate(A)
    report: dict = {
        "name": cfg.name,
        "r": A.r,
        "n": A.n,
        "validate": {"projective": diag.projective, "spanning": diag.spanning,
                     "lattice_generating": diag.lattice_generating, "kappa": list(diag.kappa)},
    }
    cfgmod.require_valid(A)
    gale = cfgmod.gale_dual(A)
    C = cfgmod.chamber_of(A, cfg.xi0)
    report["gale_dual"] = [list(b) for b in gale.betas]
    report["basis_index_sets"] = [_labels(s) for s in cfgmod.basis_index_sets(A)]
    report["chamber"] = {"xi0": _vec(C.xi0), "bind": sorted(_labels(s) for s in C.bind)}
    report["flags"] = [
        {"lines": [[_vec(row) for row in stage] for stage in F.key],
         "kappas": [list(k) for k in F.kappas], "gamma": [_vec(g) for g in F.gamma],
         "nu": F.nu, "dF": F.dF, "m": _vec(F.m)}
        for F in cfgmod.enumerate_flags(A)
    ]
    data = cfgmod.dual_cone_data(C)
    report["dual_cone"] = {"generators": [list(g) for g in data.generators],
                           "chamber_rays": [list(g) for g in data.chamber_rays]}
    try:
        report["positive_basis"] = [list(l) for l in cfgmod.c_positive_basis(C)]
    except TorresError as exc:
        report["positive_basis"] = None
        print(f"warning: {exc}", file=sys.stderr)
    return report, EXIT_PASS


def cmd_jk(cfg: JobConfig, args) -> tuple[dict, int]:
    A, C = _chamber(cfg)
    if args.basic:
        sigma = tuple(int(x) - 1 for x in args.basic.split(","))
        if any(not 0 <= i < A.n for i in sigma):
            raise InvalidConfiguration(f"--basic indices must lie in 1..{A.n}")
        phi = residues.basic_fraction(A, sigma)
    else:
        phi = cfg.jk_fraction()
    if phi.nvars != A.r:
        raise InvalidConfiguration(f"fraction must be in {A.r} variables")
    try:
        value = residues.jk(C, phi, method=args.method)
    except ConsistencyError as exc:
        return {"method": args.method, "error": str(exc)}, EXIT_MISMATCH
    return {"method": args.method, "value": format_rational(value)}, EXIT_PASS


def _series_report(series) -> dict:
    return {
        "basis": [list(b) for b in series.basis],
        "bound": series.bound,
        "terms": [{"lambda": list(t.index.lam), "degree": t.index.degree,
                   "value": format_rational(t.value)} for t in series.terms],
        "partial_sum": format_complex(series.partial_sum),
        "tail_estimate": series.tail_estimate,
    }


def cmd_mp(cfg: JobConfig, args) -> tuple[dict, int]:
    A, C = _chamber(cfg)
    P = cfg.polynomial()
    if args.lam is not None:
        lam = tuple(int(x) for x in args.lam.split(","))
        value = aside.mp_number(P, lam, A, C, method=args.method_mp)
        return {"lambda": list(lam), "value": format_rational(value)}, EXIT_PASS
    z = generate_z(cfg)
    bound = cfg.bounds.series_bound if args.bound is None else args.bound
    series = aside.mp_series(P, A, C, z, bound, method=args.method_mp)
    report = _series_report(series)
    report["z"] = [format_complex(x) for x in z]
    report["domain"] = _domain(A, C, z, cfg, args)
    return report, EXIT_PASS


def _domain(A, C, z, cfg: JobConfig, args) -> dict:
    tau = cfg.bounds.tau_min if args.tau_min is None else args.tau_min
    d = aside.convergence_check(A, C, z, tau)
    return {"verdict": d["verdict"], "xi": list(d["xi"]), "regularity": d["regularity"],
            "tau_min": tau}


def _bside_report(res: bside.BSideResult) -> dict:
    return {
        "value": format_complex(res.value),
        "expected_count": res.expected_count,
        "found_count": res.found_count,
        "verified": res.verified,
        "points": [{"u": [format_complex(x) for x in p.u], "residual": p.residual,
                    "relative_residual": p.relative_residual, "flag": p.flag_index,
                    "steps": p.steps, "origin": p.origin} for p in res.points],
        "diagnostics": {"xi": list(res.diagnostics["xi"]),
                        "regularity": res.diagnostics["regularity"],
                        "flags": res.diagnostics["flags"],
                        "path_failures": res.diagnostics["path_failures"],
                        "multistart": res.diagnostics["multistart"]},
    }


def cmd_bside(cfg: JobConfig, args) -> tuple[dict, int]:
    A = cfg.configuration()
    cfgmod.require_valid(A)
    z = generate_z(cfg)
    Lam = _lambda_basis(cfg, A)
    res = bside.toric_residue_sum(cfg.polynomial(), A, Lam, z, _settings(cfg, args))
    report = _bside_report(res)
    report["z"] = [format_complex(x) for x in z]
    return report, EXIT_PASS if res.verified else EXIT_UNVERIFIED


def cmd_verify(cfg: JobConfig, args) -> tuple[dict, int]:
    A, C = _chamber(cfg)
    z = generate_z(cfg)
    domain = _domain(A, C, z, cfg, args)
    report: dict = {"name": cfg.name, "z": [format_complex(x) for x in z], "domain": domain}
    if domain["verdict"] != "inside" and not args.force:
        report["refused"] = f"domain verdict is {domain['verdict']}; use --force to override"
        return report, EXIT_INVALID
    tol = cfg.bounds.tol if args.tol is None else args.tol
    bound = cfg.bounds.series_bound if args.bound is None else args.bound
    P = cfg.polynomial()
    series = aside.mp_series(P, A, C, z, bound, method=args.method_mp)
    res = bside.toric_residue_sum(P, A, _lambda_basis(cfg, A), z, _settings(cfg, args))
    diff = abs(series.partial_sum - res.value)
    passed = bool(diff <= tol + series.tail_estimate)
    report["aside"] = _series_report(series)
    report["bside"] = _bside_report(res)
    report["difference"] = diff
    report["tolerance"] = tol
    report["pass"] = passed
    if not res.verified:
        return report, EXIT_UNVERIFIED
    return report, EXIT_PASS if passed else EXIT_MISMATCH


COMMANDS = {"inspect": cmd_inspect, "jk": cmd_jk, "mp": cmd_mp, "bside": cmd_bside,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torres", description="Toric residue mirror checks.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("config", help="job configuration (JSON)")
    p.add_argument("--lambda", dest="lam", help="lattice point a,b,... for a single MP number")
    p.add_argument("--series", action="store_true", help="compute the generating series (mp)")
    p.add_argument("--bound", type=int, help="maximal <kappa, lambda> in the series")
    p.add_argument("--tau-min", dest="tau_min", type=float, help="regularity threshold for the domain check")
    p.add_argument("--tol", type=float, help="tolerance for the A/B comparison")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--method", default="crosscheck", choices=["basic", "flags", "crosscheck"],
                   help="JK algorithm for the jk command")
    p.add_argument("--mp-method", dest="method_mp", default="flags",
                   choices=["basic", "flags", "crosscheck"], help="JK algorithm for MP numbers")
    p.add_argument("--basic", help="use the basic fraction of the 1-based index set i,j,...")
    p.add_argument("--threads", type=int, default=1, help="worker threads for path tracking")
    p.add_argument("--force", action="store_true", help="verify even outside the domain")
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        report, code = COMMANDS[args.command](cfg, args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NearSingularError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNVERIFIED
    except TorresError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
