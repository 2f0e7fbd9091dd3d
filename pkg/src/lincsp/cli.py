"""Command-line interface.

Exit codes: 0 success / satisfiable, 10 unsatisfiable, 20 budget
exhausted, 2 usage or input errors, 1 a failed ``check``.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .bounds import bound_ml, linear_bounds, linear_upper_exact, psz_size
from .core import check_l_disjoint, frequent_variables
from .errors import LincspError, ParseError, PreconditionError, SearchFailed
from .experiments import experiment_min_linear_2cnf
from .formats import load, serialize, to_dimacs
from .generator import GenParams, search_unsat
from .solver import (
    DEFAULT_MAX_RESAMPLES,
    DEFAULT_NODE_BUDGET,
    Status,
    lll_condition,
    max_frequent_allowed,
    oracle_solve,
    resample_solve,
    search_space_log2,
    solve_sparse_frequent,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSAT, EXIT_BUDGET = 0, 1, 2, 10, 20
SEED_ENV = "LINCSP_SEED"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"lincsp: {SEED_ENV} must be an integer, got {raw!r}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _kv(**items) -> str:
    return "\n".join(f"{k}={v}" for k, v in items.items())


# -- subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    params = GenParams(
        k=args.k, d=args.d, ell=args.l, n=args.n, m=args.m, seed=args.seed,
        trials=args.trials, verify=args.verify.replace("-", "_"), overshoot=args.overshoot)
    try:
        res = search_unsat(params)
    except SearchFailed as exc:
        print(f"lincsp gen: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    comments = [
        f"k={params.k} d={params.d} ell={params.ell} n={res.n} m={res.m} seed={params.seed}",
        f"trial={res.trials} verify={params.verify} verified={'yes' if res.verified else 'no'}",
        f"log_expected_sat={res.expected.log_exact:.6f}",
    ]
    _write(serialize(res.csp, comments), args.out)
    print(_kv(n=res.n, m=res.m, trials=res.trials, verified=int(res.verified),
              expected_sat=f"{res.expected.exact:.6g}",
              expected_sat_upper=f"{res.expected.upper:.6g}"), file=sys.stderr)
    return EXIT_OK


def _auto_method(csp, ell) -> str:
    if csp.k == 2 and csp.d == 2:
        return "oracle"
    if lll_condition(csp).holds:
        return "resample"
    if 2 <= ell <= csp.k and check_l_disjoint(csp, ell)[0] and \
            len(frequent_variables(csp, ell)) <= max_frequent_allowed(csp.k, csp.d, ell):
        return "sparse-frequent"
    if search_space_log2(csp) <= 40:
        return "oracle"
    return "resample"


def cmd_solve(args) -> int:
    csp = load(_read(args.file))
    method = args.method if args.method != "auto" else _auto_method(csp, args.l)
    if method == "resample":
        out = resample_solve(csp, args.seed, args.budget or DEFAULT_MAX_RESAMPLES)
    elif method == "sparse-frequent":
        out = solve_sparse_frequent(csp, args.l, args.seed, args.budget or DEFAULT_MAX_RESAMPLES)
    else:
        out = oracle_solve(csp, args.budget or DEFAULT_NODE_BUDGET)
    print(f"c method={method} resamples={out.resamples} nodes={out.nodes}")
    if out.status is Status.SATISFIED:
        print("s SATISFIABLE")
        print("v " + " ".join(f"{v}:{b}" for v, b in sorted(out.assignment.items())))
        return EXIT_OK
    if out.status is Status.UNSATISFIABLE:
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    print("s UNKNOWN")
    return EXIT_BUDGET


def cmd_check(args) -> int:
    csp = load(_read(args.file))
    ok, witness = check_l_disjoint(csp, args.l)
    if ok:
        print(f"{args.l}-disjoint: yes")
        print(_kv(disjoint=1, ell=args.l))
        return EXIT_OK
    i, j = witness
    shared = sorted(csp[i].vbl & csp[j].vbl)
    print(f"{args.l}-disjoint: no (constraints {i} and {j} share variables {shared})")
    print(_kv(disjoint=0, ell=args.l, witness=f"{i},{j}"))
    return EXIT_FAIL


def cmd_bounds(args) -> int:
    rep = bound_ml(args.k, args.d, args.l)
    rows = [
        ("lower", f"{rep.lower:.6g}"),
        ("upper", f"{rep.upper:.6g} {rep.upper_note}"),
        ("frequent_threshold", f"{rep.frequent_threshold:.6g}"),
        ("max_frequent", f"{rep.max_frequent:.6g}"),
    ]
    kv = {"k": args.k, "d": args.d, "ell": args.l, "lower": repr(rep.lower),
          "upper": repr(rep.upper), "log_lower": repr(rep.log_lower),
          "log_upper": repr(rep.log_upper), "frequent_threshold": repr(rep.frequent_threshold),
          "max_frequent": repr(rep.max_frequent)}
    if args.linear or (args.d == 2 and args.l == 2):
        lin = linear_bounds(args.k)
        upper = linear_upper_exact(args.k) if args.k <= 400 else lin.upper
        rows += [("linear_lower", f"{lin.lower:.6g}"), ("linear_upper", f"{upper:.6g}"
                 if not isinstance(upper, int) else str(upper))]
        kv.update(linear_lower=repr(lin.lower), linear_upper=upper,
                  linear_upper_ln2=repr(lin.upper_ln2))
    if args.psz:
        if args.k <= 5:
            p = psz_size(args.k)
            shown = str(p.exact) if p.exact is not None else f"2^{p.log2}"
            if p.log2 > 10**6:
                shown = f"2^(2059 + 2^2059)"
            rows.append(("psz_size", shown))
            kv["psz_log2"] = p.log2 if p.log2 < 10**6 else "2059+2^2059"
        else:
            rows.append(("psz_size", "beyond 2^(2^2059)"))
    width = max(len(name) for name, _ in rows)
    print(f"bounds for k={args.k} d={args.d} ell={args.l}")
    for name, val in rows:
        print(f"  {name.ljust(width)}  {val}")
    print(_kv(**kv))
    return EXIT_OK


def cmd_convert(args) -> int:
    csp = load(_read(args.file))
    _write(to_dimacs(csp) if args.to == "dimacs" else serialize(csp), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    rep = experiment_min_linear_2cnf(args.max_clauses)
    print(rep.summary())
    print(_kv(max_clauses=rep.max_clauses, connected=rep.connected_checked,
              checked=rep.total_checked, all_satisfiable=int(rep.all_satisfiable)))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lincsp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    g = sub.add_parser("gen", help="generate a verified unsatisfiable instance")
    g.add_argument("-k", type=int, default=2)
    g.add_argument("-d", type=int, default=2)
    g.add_argument("-l", type=int, default=2, help="ell (disjointness)")
    g.add_argument("--n", type=int, default=None, help="vertices (default: automatic)")
    g.add_argument("--m", type=int, default=None, help="constraints (default: automatic)")
    g.add_argument("--seed", type=int, default=seed)
    g.add_argument("--trials", type=int, default=200)
    g.add_argument("--verify", choices=["oracle", "two-sat", "none"], default="two-sat")
    g.add_argument("--overshoot", type=float, default=1.0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--method", choices=["resample", "oracle", "sparse-frequent", "auto"],
                   default="auto")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--budget", type=int, default=None,
                   help="resample steps, or search nodes for the oracle")
    s.add_argument("-l", type=int, default=2, help="ell for sparse-frequent")
    s.add_argument("file")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="ell-disjointness verdict")
    c.add_argument("-l", type=int, required=True)
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bounds", help="evaluate the size bounds")
    b.add_argument("-k", type=int, required=True)
    b.add_argument("-d", type=int, default=2)
    b.add_argument("-l", type=int, default=2)
    b.add_argument("--linear", action="store_true")
    b.add_argument("--psz", action="store_true")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("convert", help="convert between the csp and DIMACS formats")
    v.add_argument("--to", choices=["dimacs", "csp"], required=True)
    v.add_argument("--out", default=None)
    v.add_argument("file")
    v.set_defaults(func=cmd_convert)

    e = sub.add_parser("experiment", help="packaged experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    mc = esub.add_parser("min2cnf", help="all linear 2-CNFs up to N clauses")
    mc.add_argument("--max-clauses", type=int, default=5)
    mc.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, PreconditionError) as exc:
        print(f"lincsp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LincspError as exc:
        print(f"lincsp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"lincsp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
