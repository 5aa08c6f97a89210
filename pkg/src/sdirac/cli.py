"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import HAT, Catalog, default_catalog
from .parser import ParseError, parse_poly, parse_weyl
from .solver import (
    PARITIES,
    GradedSector,
    InvariantBreach,
    kernel_at,
    kernel_symbolic,
    lambda_text,
    sector_basis,
    sector_report,
)
from .verify import SUITES, dirac_hat, run_all, run_suite, solve_intertwining
from .weyl import VarSpace, VarSpaceMismatch, apply, commutator, fourier

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _vars(text):
    try:
        return VarSpace(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _nat(text):
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return n


def _mapping(text):
    pairs = []
    for item in text.split(","):
        src, sep, dst = item.strip().partition(":")
        if not sep or not src or not dst:
            raise argparse.ArgumentTypeError(f"bad map entry {item!r}; use old:new")
        pairs.append((src, dst))
    return pairs


def _override(text):
    name, sep, expr = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("override must look like NAME=EXPR")
    return name.strip(), expr


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdirac", description="Exact Weyl-algebra computations for the symplectic Dirac operator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="re-verify the operator identities")
    v.add_argument("--suite", choices=["all", *SUITES], default="all")
    v.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    v.add_argument("--engine-cases", type=_nat, default=50, help="randomized cases per engine law")
    v.add_argument("--override", type=_override, action="append", default=[], metavar="NAME=EXPR",
                   help="replace a catalog constant before verifying (negative controls)")

    c = sub.add_parser("comm", help="commutator [A, B]")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--vars", type=_vars, default=VarSpace("x,y,q"))

    a = sub.add_parser("apply", help="apply an operator to a polynomial")
    a.add_argument("expr")
    a.add_argument("poly")
    a.add_argument("--vars", type=_vars, default=VarSpace("x,y,q"))
    a.add_argument("--lambda", dest="lam", type=_fraction, help="substitute a rational value for lambda")

    f = sub.add_parser("fourier", help="algebraic Fourier transform v -> -d_w, d_v -> w")
    f.add_argument("expr")
    f.add_argument("--map", type=_mapping, default=[("xh", "x"), ("yh", "y")])
    f.add_argument("--vars", type=_vars, help="variables of EXPR (default: mapped names then q)")

    s = sub.add_parser("singular", help="joint kernel of the nilradical on graded sectors")
    s.add_argument("--degree", type=_nat, required=True)
    s.add_argument("--qmax", type=_nat, required=True)
    s.add_argument("--parity", choices=PARITIES, default="both")
    s.add_argument("--lambda", dest="lam", type=_fraction)
    s.add_argument("--upto", action="store_true", help="scan every degree from 0 to --degree")
    s.add_argument("--fiber", choices=["sigma", "sigmastar"], default="sigma")
    s.add_argument("--format", choices=["text", "json"], default="text")

    i = sub.add_parser("intertwine", help="solve for weights intertwined by an operator")
    i.add_argument("--fiber", choices=["sigma", "sigmastar"], default="sigmastar")
    i.add_argument("--operator", help="operator over xh,yh,q (default: the symplectic Dirac operator)")
    i.add_argument("--format", choices=["text", "json"], default="text")

    k = sub.add_parser("catalog", help="list catalog names or print one element")
    k.add_argument("name", nargs="?")
    return p


def _cmd_verify(args, out):
    cat = default_catalog()
    if args.override:
        overrides = {}
        for name, expr in args.override:
            if name not in cat:
                raise UsageError(f"unknown catalog name {name!r}")
            if not hasattr(cat[name], "space"):
                raise UsageError(f"{name} is a matrix constant and cannot be overridden")
            overrides[name] = parse_weyl(expr, cat[name].space)
        cat = Catalog(overrides)
    if args.suite == "all":
        rep = run_all(cat, engine_cases=args.engine_cases)
    else:
        rep = run_suite(args.suite, cat, engine_cases=args.engine_cases)
    payload = json.dumps(rep.to_dict(), indent=2)
    if args.json == "-":
        out.write(payload + "\n")
    else:
        for chk in rep.checks:
            line = f"{chk.status.upper():4}  {chk.name}"
            if chk.status == "fail":
                line += f"  residual: {chk.residual}"
            out.write(line + "\n")
        for note in rep.notes:
            out.write(f"note  {note}\n")
        out.write(f"{rep.passed} passed, {rep.failed} failed\n")
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(payload + "\n")
    return EXIT_OK if rep.failed == 0 else EXIT_FAIL


def _cmd_comm(args, out):
    out.write(commutator(parse_weyl(args.a, args.vars), parse_weyl(args.b, args.vars)).text() + "\n")
    return EXIT_OK


def _cmd_apply(args, out):
    w = parse_weyl(args.expr, args.vars)
    res = apply(w, parse_poly(args.poly, args.vars))
    if args.lam is not None:
        from .weyl import substitute_lambda

        res = substitute_lambda(res, args.lam)
    out.write(res.text() + "\n")
    return EXIT_OK


def _cmd_fourier(args, out):
    base = [s for s, _ in args.map]
    dual = [d for _, d in args.map]
    space = args.vars or VarSpace(",".join(base + (["q"] if "q" not in base + dual else [])))
    w = parse_weyl(args.expr, space)
    out.write(fourier(w, base, dual).text() + "\n")
    return EXIT_OK


def _singular_table(args):
    fib = default_catalog().fiber(args.fiber)
    degrees = range(args.degree + 1) if args.upto else [args.degree]
    parities = ["even", "odd"] if args.parity == "both" and args.upto else [args.parity]
    rows = []
    for n in degrees:
        for parity in parities:
            s = GradedSector(n, args.qmax, parity)
            if args.lam is None:
                rows.append(sector_report(kernel_symbolic(s, fib)))
            else:
                kern = kernel_at(args.lam, s, fib)
                rows.append({"n": n, "parity": parity, "qmax": args.qmax, "dim": len(sector_basis(s)),
                             "lambda": lambda_text(args.lam), "kernel_dim": len(kern),
                             "basis": [b.text() for b in kern]})
    return rows


def _cmd_singular(args, out):
    rows = _singular_table(args)
    if args.format == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return EXIT_OK
    for r in rows:
        head = f"n={r['n']} parity={r['parity']} qmax={r['qmax']} dim={r['dim']}"
        if "lambda" in r:
            out.write(f"{head} lambda={r['lambda']} kernel_dim={r['kernel_dim']}\n")
            for b in r["basis"]:
                out.write(f"    {b}\n")
            continue
        out.write(f"{head} generic_dim={r['generic_dim']}\n")
        for c in r["critical"]:
            out.write(f"  critical lambda={c['lambda']} dim={c['dim']}\n")
            for b in c["basis"]:
                out.write(f"    {b}\n")
        for t in r["unresolved_factors"]:
            out.write(f"  unresolved factor: {t}\n")
    return EXIT_OK


def _cmd_intertwine(args, out):
    cat = default_catalog()
    d = parse_weyl(args.operator, HAT) if args.operator else dirac_hat(cat)
    sol = solve_intertwining(d, cat.fiber(args.fiber))
    shift = Fraction(3, 2)
    data = {"operator": d.text(), "fiber": args.fiber, "kind": sol.kind,
            "point": None if sol.point is None else [p.text() for p in sol.point],
            "directions": [[a.text(), b.text()] for a, b in sol.directions]}
    if sol.kind == "point":
        l1, l2 = (p.constant().re for p in sol.point)
        data["rho_shifted"] = [lambda_text(l1 + shift), lambda_text(l2 + shift)]
    if args.format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
        return EXIT_OK
    out.write(f"operator: {data['operator']}\nfiber: {args.fiber}\nsolution: {sol.kind}\n")
    if sol.point is not None:
        out.write(f"  {sol.text()}\n")
    if "rho_shifted" in data:
        out.write(f"  lambda + rho: ({data['rho_shifted'][0]}, {data['rho_shifted'][1]})\n")
    return EXIT_OK


def _cmd_catalog(args, out):
    cat = default_catalog()
    if args.name is None:
        for name in cat:
            out.write(name + "\n")
        return EXIT_OK
    if args.name not in cat:
        raise UsageError(f"unknown catalog name {args.name!r}")
    out.write(cat[args.name].text() + "\n")
    return EXIT_OK


COMMANDS = {"verify": _cmd_verify, "comm": _cmd_comm, "apply": _cmd_apply, "fourier": _cmd_fourier,
            "singular": _cmd_singular, "intertwine": _cmd_intertwine, "catalog": _cmd_catalog}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (ParseError, VarSpaceMismatch) as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except InvariantBreach as exc:
        err.write(f"internal invariant breach: {exc}\n")
        return EXIT_BREACH
    except SystemExit as exc:
        # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
