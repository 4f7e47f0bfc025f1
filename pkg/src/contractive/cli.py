"""Command-line front end.

Exit codes: 0 success, 1 numerical-contract violation, 2 usage error.
Diagnostics go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import bounds, checks, norms, search
from .errors import AccuracyError, ContractiveError, DomainError, SpecParseError
from .funcspace import SpaceParams, parse_spec, target_space

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE = 0, 1, 2
CONTRACT_TOL = 1e-6
HS_TOL = 1e-6


class UsageError(Exception):
    pass


def _diag(kind: str, message: str, **extra) -> None:
    print(json.dumps({"level": "error", "kind": kind, "message": message, **extra}, sort_keys=True),
          file=sys.stderr)


def _load_function(args):
    if bool(args.spec) == bool(args.spec_file):
        raise UsageError("give exactly one of --spec and --spec-file")
    text = args.spec if args.spec else Path(args.spec_file).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError("$", f"invalid JSON: {exc.msg} at position {exc.pos}") from None
    return parse_spec(doc)


def _num(x, precision):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.{precision}g}"
    return str(x)


def _emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    """Write ``payload`` as json, ``rows`` as csv, or a readable listing."""
    prec = args.precision
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"
    elif args.format == "csv":
        rows = rows if rows is not None else [payload]
        buf = io.StringIO()
        cols = list(rows[0].keys()) if rows else []
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_num(r.get(c), prec) for c in cols])
        text = buf.getvalue()
    else:
        lines = []
        if rows is not None:
            for r in rows:
                lines.append("  ".join(f"{k}={_num(v, prec)}" for k, v in r.items()))
            for k, v in payload.items():
                if not isinstance(v, (list, dict)):
                    lines.append(f"{k}: {_num(v, prec)}")
        else:
            for k, v in payload.items():
                lines.append(f"{k}: {_num(v, prec) if not isinstance(v, (list, dict)) else json.dumps(v)}")
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _grid_kw(args) -> dict:
    kw = {}
    if args.nrad is not None:
        kw["n_rad"] = args.nrad
    if args.nangles is not None:
        kw["n_angles"] = args.nangles
    return kw


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required for this subcommand")


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(args) -> int:
    _require(args, "alpha", "p")
    f = _load_function(args)
    alpha, p = args.alpha, args.p
    space = target_space(alpha, p) if args.space == "target" else SpaceParams(alpha, p)
    methods = ["coefficient", "quadrature", "hardy_stein"] if args.method == "all" else [args.method.replace("-", "_")]
    reports = []
    if "coefficient" in methods:
        reports.append(norms.a2_coeff_norm(f, alpha))
    if "quadrature" in methods:
        reports.append(norms.space_norm(f, space, **_grid_kw(args)))
    if "hardy_stein" in methods and args.space == "target" and p > 2:
        reports.append(norms.hs_norm(f, alpha, p, **_grid_kw(args)))
    records = [r.to_record() for r in reports]
    payload = {"reports": records}
    violation = any((r.refinement_delta or 0.0) > CONTRACT_TOL for r in reports)
    by_space = {}
    for r in reports:
        by_space.setdefault((r.space.alpha, r.space.p), []).append(r)
    deltas = {}
    for group in by_space.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                d = abs(group[i].value - group[j].value) / max(group[j].value, 1e-300)
                deltas[f"{group[i].method}-{group[j].method}"] = d
                violation |= d > CONTRACT_TOL
    payload["cross_deltas"] = deltas
    rows = list(records)
    for k, v in deltas.items():
        rows.append({"value": v, "alpha": None, "p": None, "method": f"delta:{k}",
                     "grid_signature": "", "refinement_delta": None})
    _emit(args, payload, rows)
    return EXIT_CONTRACT if violation else EXIT_OK


def cmd_functional(args) -> int:
    _require(args, "alpha", "p")
    f = _load_function(args)
    kw = _grid_kw(args)
    F = norms.functional_F_report(f, args.alpha, args.p, **kw)
    G = norms.functional_G_report(f, args.alpha, args.p, **kw)
    rows = [
        {"functional": "F", "value": F.value, "grid_signature": "x".join(map(str, F.grid_signature)),
         "refinement_delta": F.refinement_delta},
        {"functional": "G", "value": G.value, "grid_signature": "x".join(map(str, G.grid_signature)),
         "refinement_delta": G.refinement_delta},
    ]
    _emit(args, {"alpha": args.alpha, "p": args.p, "functionals": rows}, rows)
    bad = max(F.refinement_delta, G.refinement_delta) > CONTRACT_TOL
    return EXIT_CONTRACT if bad else EXIT_OK


def cmd_hardy_stein(args) -> int:
    _require(args, "p")
    f = _load_function(args)
    radii = [float(x) for x in args.radii.split(",")]
    rows = []
    for r in radii:
        kw = {"n_angles": args.nangles} if args.nangles else {}
        lhs, rhs = norms.hardy_stein_sides(f, args.p, r, **kw)
        rows.append({"r": r, "lhs": lhs, "rhs": rhs, "residual": lhs - rhs})
    _emit(args, {"p": args.p, "rows": rows}, rows)
    return EXIT_CONTRACT if any(abs(r["residual"]) > HS_TOL for r in rows) else EXIT_OK


def cmd_bounds(args) -> int:
    pts = bounds.bound_curve(args.pmin, args.pmax, args.step)
    if args.format == "csv":
        text = bounds.bound_curve_csv(pts, args.precision)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    k_hi = bounds.interval_index(args.pmax)
    maxima = [{"k": k, "p": bounds.c_max_location(k), "C": bounds.c_bound(bounds.c_max_location(k)).c_value}
              for k in range(2, k_hi + 1)]
    payload = {
        "uniform_bound": bounds.uniform_bound(),
        "best_known_constant": bounds.best_known_constant(),
        "maxima": maxima,
    }
    if args.format == "json":
        payload["curve"] = [{"p": q.p, "k": q.k, "C": q.c_value} for q in pts]
        _emit(args, payload)
    else:
        _emit(args, payload, maxima)
    return EXIT_OK


def cmd_ratio(args) -> int:
    _require(args, "alpha", "p")
    f = _load_function(args)
    kw = _grid_kw(args)
    ratio = norms.inclusion_ratio(f, args.alpha, args.p, **kw)
    ceiling = bounds.c_bound(args.p).c_value
    payload = {"alpha": args.alpha, "p": args.p, "inclusion_ratio": ratio, "C": ceiling}
    beta = args.beta if args.beta is not None else (args.alpha if args.alpha > bounds.BAYART_THRESHOLD else None)
    if beta is not None:
        payload["beta"] = beta
        payload["bayart_step_ratio"] = bounds.bayart_step_ratio(f, args.p, beta, **kw)
    _emit(args, payload)
    bad = ratio > ceiling * (1.0 + CONTRACT_TOL)
    return EXIT_CONTRACT if bad else EXIT_OK


def _search_config(args, **over) -> search.SearchConfig:
    kw = dict(alpha=args.alpha, p=args.p, degree=args.degree, vanish=args.vanish, objective=args.objective,
              restarts=args.restarts, max_iters=args.max_iters, rng_seed=args.seed)
    if args.nrad is not None:
        kw["n_rad"] = args.nrad
    if args.nangles is not None:
        kw["n_angles"] = args.nangles
    kw.update(over)
    return search.SearchConfig(**kw)


def cmd_search(args) -> int:
    _require(args, "alpha", "p")
    if args.sweep:
        ms = [int(x) for x in args.sweep.split(",")]
        base = _search_config(args, vanish=None)
        cfg_kw = {k: getattr(base, k) for k in ("objective", "restarts", "max_iters", "rng_seed", "n_rad", "n_angles")}
        cells = search.vanishing_sweep(args.alpha, args.p, args.degree, ms, **cfg_kw)
        rows = [{"m": c.m, "best_value": c.best_value, "degenerate": c.degenerate, "error": c.error} for c in cells]
        payload = {"alpha": args.alpha, "p": args.p, "degree": args.degree, "cells": rows,
                   "spread": search.sweep_spread(cells)}
        _emit(args, payload, rows)
        bad = any(c.result is not None and c.result.ceiling_margin < 0 for c in cells)
        return EXIT_CONTRACT if bad else EXIT_OK
    cfg = _search_config(args)
    res = search.search_extremal(cfg, n_refine=args.n_refine)
    doc = search.to_document(res, cfg)
    if args.format == "json":
        _emit(args, doc)
    else:
        summary = {k: doc[k] for k in ("best_value", "ceiling", "ceiling_margin", "constraint_residual",
                                       "iterations_used", "restarts_used", "refinement_delta",
                                       "n_refinement_delta", "candidate_counterexample")}
        _emit(args, summary, [summary] if args.format == "csv" else None)
    bad = res.ceiling_margin < 0 or res.constraint_residual >= 1e-10
    return EXIT_CONTRACT if bad else EXIT_OK


def cmd_verify(args) -> int:
    selected = checks.REGISTRY
    if args.kind != "all":
        selected = [c for c in selected if c.kind == args.kind]
    if args.only:
        keys = set(args.only.split(","))
        unknown = keys - {c.key for c in checks.REGISTRY}
        if unknown:
            raise UsageError(f"unknown check keys: {sorted(unknown)}")
        selected = [c for c in selected if c.key in keys]
    rows = []
    for c in selected:
        try:
            r = checks.run_check(c)
        except ContractiveError as exc:
            r = checks.CheckResult(f"{c.key} {c.title}", False, -math.inf, f"{type(exc).__name__}: {exc}")
        rows.append({"check": r.name, "status": "PASS" if r.passed else "FAIL", "margin": r.margin,
                     "detail": r.detail})
        if args.format == "human" and not args.out:
            print(r.line(), flush=True)
    if args.format != "human" or args.out:
        _emit(args, {"checks": rows, "passed": all(r["status"] == "PASS" for r in rows)}, rows)
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_CONTRACT


# ---------------------------------------------------------------------------


def _optional_int(s: str):
    return None if s.lower() in ("none", "") else int(s)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float)
    common.add_argument("--p", type=float)
    common.add_argument("--spec", help="inline JSON function spec")
    common.add_argument("--spec-file", help="path to a UTF-8 JSON function spec")
    common.add_argument("--nrad", type=int)
    common.add_argument("--nangles", type=int)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--precision", type=int, default=12, help="significant digits (csv/human)")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="contractive", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="norms of a function by each method")
    p.add_argument("--method", choices=("all", "coefficient", "quadrature", "hardy-stein"), default="all")
    p.add_argument("--space", choices=("target", "direct"), default="target",
                   help="target: A^p_{p(alpha+2)/2-2}; direct: A^p_alpha (H^p when alpha=-1)")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("functional", parents=[common], help="F_p and G_p")
    p.set_defaults(func=cmd_functional)

    p = sub.add_parser("hardy-stein", parents=[common], help="Hardy-Stein residuals")
    p.add_argument("--radii", default="0.3,0.6,0.9")
    p.set_defaults(func=cmd_hardy_stein)

    p = sub.add_parser("bounds", parents=[common], help="C(p) curve, maximizers, uniform bound")
    p.add_argument("--pmin", type=float, default=2.01)
    p.add_argument("--pmax", type=float, default=10.0)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ratio", parents=[common], help="inclusion and step ratios")
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("search", parents=[common], help="extremal search on the coefficient sphere")
    p.add_argument("--degree", type=int, default=16)
    p.add_argument("--vanish", type=_optional_int, default=None)
    p.add_argument("--sweep", help="comma-separated vanishing orders for a sweep")
    p.add_argument("--objective", choices=search.OBJECTIVES, default="target_norm")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--n-refine", action="store_true", help="also search at degree 2N")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="run acceptance criteria and invariants")
    p.add_argument("--only", help="comma-separated check keys, e.g. C1,C3")
    p.add_argument("--kind", choices=("all", "criterion", "invariant"), default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except SpecParseError as exc:
        _diag("spec", exc.message, path=exc.path)
        return EXIT_USAGE
    except (UsageError, DomainError, OSError) as exc:
        _diag("usage", str(exc))
        return EXIT_USAGE
    except AccuracyError as exc:
        _diag("accuracy", str(exc))
        return EXIT_CONTRACT
    except ContractiveError as exc:
        _diag(type(exc).__name__, str(exc))
        return EXIT_CONTRACT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
