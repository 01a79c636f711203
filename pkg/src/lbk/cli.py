"""Command-line interface: ``lbk <command> [options]``.

Series are read from ``--input FILE`` (``-`` for stdin), from ``--expr``, or
from stdin.  Commands taking two operands expect them separated by ``;``.
Exit status: 0 success, 1 failed verification, 2 usage or input error,
3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import algebra, flows, hopf, subst, verify
from .grammar import ParseError, parse_endomorphism_text, parse_forest, split_inputs
from .poly import format_rational
from .prelie import PolynomialVectorField
from .series import Context, OrderMismatch, PreconditionError, Series, format_series, format_tensor
from .trees import (
    CapacityError,
    enumerate_nonplanar_trees,
    forest_grade,
    forest_key,
    forest_str,
)

EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _context(args) -> Context:
    colors = tuple(c.strip() for c in args.colors.split(",") if c.strip())
    return Context(colors, args.order)


def _read_text(args) -> str:
    if getattr(args, "expr", None) is not None:
        return args.expr
    path = getattr(args, "input", None)
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _inputs(args, ctx: Context) -> list[Series]:
    parts = [p for p in split_inputs(_read_text(args)) if p] or [""]
    return [ctx.parse(p) for p in parts]


def _series_json(s: Series) -> dict:
    return {
        "order": s.ctx.order,
        "colors": list(s.ctx.colors),
        "terms": [
            {"coeff": str(c) if not hasattr(c, "numerator") else format_rational(c),
             "forest": forest_str(f)}
            for f, c in s.items()
        ],
    }


def _tensor_json(t: dict) -> list:
    items = sorted(
        ((k, c) for k, c in t.items() if c != 0),
        key=lambda kc: (forest_key(kc[0][0]), forest_key(kc[0][1])),
    )
    return [
        {"coeff": format_rational(c), "left": forest_str(a), "right": forest_str(b)}
        for (a, b), c in items
    ]


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=1)


def _emit_series(args, results: Sequence[Series]) -> None:
    if args.format == "json":
        payload = [_series_json(s) for s in results]
        print(_dump(payload[0] if len(payload) == 1 else payload))
    else:
        for s in results:
            print(format_series(s))


# ---------------------------------------------------------------------------
# commands


def cmd_trees(args) -> int:
    ctx = _context(args)
    grades = [args.grade] if args.grade is not None else range(1, ctx.order + 1)
    listing: dict = {}
    for n in grades:
        if n > ctx.order:
            raise UsageError(f"grade {n} exceeds --order {ctx.order}")
        if args.kind == "trees":
            items = [str(t) for t in ctx.trees(n)]
        elif args.kind == "forests":
            items = [forest_str(f) for f in ctx.forests(n)]
        else:
            items = [str(t) for t in enumerate_nonplanar_trees(ctx.colors, n)]
        listing[n] = items
    if args.format == "json":
        print(_dump({"kind": args.kind, "grades": {str(n): v for n, v in listing.items()}}))
    else:
        for n, items in listing.items():
            print(f"# grade {n}: {len(items)} {args.kind}")
            for s in items:
                print(s)
    return 0


def cmd_dims(args) -> int:
    ctx = _context(args)
    grades = list(range(1, ctx.order + 1))
    table = {
        "forests": [len(ctx.forests(n)) for n in grades],
        "trees": [len(ctx.trees(n)) for n in grades],
        "nonplanar": [len(enumerate_nonplanar_trees(ctx.colors, n)) for n in grades],
        "lie": hopf.lie_dimensions(ctx),
    }
    if args.format == "json":
        print(_dump({"grades": grades, **table}))
    else:
        for name, values in table.items():
            print(f"{name}: {', '.join(map(str, values))}")
    return 0


def cmd_parse(args) -> int:
    ctx = _context(args)
    _emit_series(args, _inputs(args, ctx))
    return 0


_PRODUCTS: dict[str, Callable] = {
    "conc": algebra.conc_mul,
    "shuffle": algebra.shuffle_mul,
    "gl": algebra.gl_mul,
    "graft": algebra.graft,
}


def cmd_mul(args) -> int:
    ctx = _context(args)
    terms = _inputs(args, ctx)
    if len(terms) < 2:
        raise UsageError("mul needs at least two series separated by ';'")
    out = terms[0]
    for t in terms[1:]:
        out = _PRODUCTS[args.product](out, t)
    _emit_series(args, [out])
    return 0


def cmd_euler(args) -> int:
    ctx = _context(args)
    if args.component is None:
        results = [hopf.euler_idempotent(s) for s in _inputs(args, ctx)]
    else:
        results = [hopf.eulerian_component(s, args.component) for s in _inputs(args, ctx)]
    _emit_series(args, results)
    return 0


def cmd_exp(args) -> int:
    ctx = _context(args)
    fn = {"conc": hopf.exp_conc, "gl": hopf.exp_gl}[args.product]
    _emit_series(args, [fn(s) for s in _inputs(args, ctx)])
    return 0


def cmd_log(args) -> int:
    ctx = _context(args)
    fn = {"conc": hopf.log_conc, "gl": hopf.log_gl}[args.product]
    _emit_series(args, [fn(s) for s in _inputs(args, ctx)])
    return 0


def cmd_lie_basis(args) -> int:
    ctx = _context(args)
    grades = [args.grade] if args.grade is not None else range(1, ctx.order + 1)
    rows = []
    for n in grades:
        if n > ctx.order:
            raise UsageError(f"grade {n} exceeds --order {ctx.order}")
        for l in hopf.lie_basis_elements(ctx, n):
            rows.append((n, l.index, l.label, format_series(l.series(ctx))))
    if args.format == "json":
        print(_dump([
            {"grade": n, "index": i, "bracket": lab, "expansion": exp}
            for n, i, lab, exp in rows
        ]))
    else:
        for n, i, lab, exp in rows:
            print(f"{n}.{i}\t{lab}\t{exp}")
    return 0


_COPRODUCTS = {
    "gl": (hopf.coproduct_gl, "gl"),
    "graft": (hopf.coproduct_graft, "graft"),
    "deconcat": (algebra.deconcat, "conc"),
    "unshuffle": (algebra.unshuffle, "shuffle"),
}


def cmd_coproduct(args) -> int:
    ctx = _context(args)
    fn, product = _COPRODUCTS[args.which]
    if args.grade is not None:
        if args.grade > ctx.order:
            raise UsageError(f"grade {args.grade} exceeds --order {ctx.order}")
        table = hopf.product_matrix(ctx, product, args.grade).transpose()
        if args.format == "text":
            for row in table.to_json()["entries"]:
                print("\t".join(row))
        else:
            print(table.dumps())
        return 0
    results = [fn(s) for s in _inputs(args, ctx)]
    if args.format == "json":
        payload = [_tensor_json(t) for t in results]
        print(_dump(payload[0] if len(payload) == 1 else payload))
    else:
        for t in results:
            print(format_tensor(t))
    return 0


def _flow_op(name: str, args) -> int:
    ctx = _context(args)
    if name in ("phi", "backward-error"):
        fn = flows.field_to_flow if name == "phi" else flows.backward_error
        _emit_series(args, [fn(s) for s in _inputs(args, ctx)])
        return 0
    fn = flows.bch_conc if name == "bch" else flows.sharp
    terms = _inputs(args, ctx)
    if len(terms) < 2:
        raise UsageError(f"{name} needs at least two series separated by ';'")
    out = terms[0]
    for t in terms[1:]:
        out = fn(out, t)
    _emit_series(args, [out])
    return 0


def cmd_flow(args) -> int:
    return _flow_op(args.op, args)


def _endomorphism(ctx: Context, path: str) -> subst.Endomorphism:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    images = parse_endomorphism_text(text, ctx.colors)
    full = {c: Series(ctx, images[c]) if c in images else ctx.leaf(c) for c in ctx.colors}
    return subst.Endomorphism(ctx, full)


def cmd_subst(args) -> int:
    ctx = _context(args)
    if args.action == "apply":
        if not args.endo:
            raise UsageError("subst apply needs --endo FILE")
        a = _endomorphism(ctx, args.endo)
        _emit_series(args, [a(s) for s in _inputs(args, ctx)])
        return 0
    if args.grade is None and args.omega is None:
        raise UsageError("subst universal needs --grade N or --omega FOREST")
    if args.omega is not None:
        omegas = [parse_forest(args.omega, ctx.colors)]
        if forest_grade(omegas[0]) > ctx.order:
            raise UsageError("--omega exceeds --order")
    else:
        if args.grade > ctx.order:
            ctx = ctx.with_order(args.grade)
        omegas = list(ctx.forests(args.grade))
    tables = []
    for omega in omegas:
        if args.one_generator:
            raw = subst.cosubstitution_one_generator(ctx, omega)
            fmt = format_series
        else:
            raw = subst.universal_substitution_forest(ctx, omega)
            fmt = str
        terms = [
            {"coeff": fmt(raw[f]), "target": forest_str(f)}
            for f in sorted(raw, key=forest_key)
        ]
        tables.append({"omega": forest_str(omega), "terms": terms})
    if args.format == "text":
        for t in tables:
            print(f"{t['omega']}:")
            for term in t["terms"]:
                print(f"  ({term['coeff']}) {term['target']}")
    else:
        print(_dump(tables[0] if len(tables) == 1 else tables))
    return 0


def cmd_verify(args) -> int:
    ctx = _context(args)
    if args.check == "flow":
        report = verify.flow_oracle(PolynomialVectorField.parse(args.f), ctx.order, ctx.colors)
        print("grade\talgebraic\texact\tstatus")
    elif args.check == "axioms":
        report = verify.post_lie_axioms(ctx)
    elif args.check == "pbw":
        report = verify.euler_and_pbw(ctx)
    else:
        report = verify.substitution_recursion(ctx, count=args.count, seed=args.seed)
    for line in report.lines:
        print(line)
    print(f"{report.name}: checked {report.checked} cases")
    if report.ok:
        print("PASS")
        return 0
    print(f"counterexample: {report.counterexample}")
    print("FAIL")
    return EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", type=int, default=4, help="truncation order (default 4)")
    p.add_argument("--colors", default="a", help="comma-separated colors (default a)")
    p.add_argument("--format", choices=("text", "json"), help="default text; json for subst universal")
    return p


def _io() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", help="file with series text, '-' for stdin (default stdin)")
    p.add_argument("--expr", "-e", help="series text given inline")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lbk", description="Exact computations in free post-Lie and pre-Lie algebras."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common, io = _common(), _io()

    p = sub.add_parser("trees", parents=[common], help="list trees or forests")
    p.add_argument("--grade", type=int)
    p.add_argument("--kind", choices=("trees", "forests", "nonplanar"), default="trees")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("dims", parents=[common], help="counts per grade")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("parse", parents=[common, io], help="normalize series text")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("mul", parents=[common, io], help="multiply series")
    p.add_argument("--product", choices=tuple(_PRODUCTS), default="conc")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("euler", parents=[common, io], help="Euler idempotent")
    p.add_argument("--component", type=int, help="p-th Eulerian component instead")
    p.set_defaults(func=cmd_euler)

    for name, fn in (("exp", cmd_exp), ("log", cmd_log)):
        p = sub.add_parser(name, parents=[common, io], help=f"{name} for a product")
        p.add_argument("--product", choices=("conc", "gl"), default="conc")
        p.set_defaults(func=fn)

    p = sub.add_parser("lie-basis", parents=[common], help="Lyndon basis of the free Lie algebra")
    p.add_argument("--grade", type=int)
    p.set_defaults(func=cmd_lie_basis)

    p = sub.add_parser("coproduct", parents=[common, io], help="coproducts or their tables")
    p.add_argument("--which", choices=tuple(_COPRODUCTS), default="gl")
    p.add_argument("--grade", type=int, help="emit the full table at this grade")
    p.set_defaults(func=cmd_coproduct)

    for name in ("phi", "bch", "sharp", "backward-error"):
        p = sub.add_parser(name, parents=[common, io])
        p.set_defaults(func=lambda a, n=name: _flow_op(n, a))

    p = sub.add_parser("flow", parents=[common, io], help="flow operations")
    p.add_argument("op", choices=("phi", "bch", "sharp", "backward-error"))
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("subst", parents=[common, io], help="substitution")
    p.add_argument("action", choices=("apply", "universal"))
    p.add_argument("--endo", help="endomorphism file with lines 'color := series'")
    p.add_argument("--grade", type=int)
    p.add_argument("--omega", help="single dual forest for 'universal'")
    p.add_argument("--one-generator", action="store_true")
    p.set_defaults(func=cmd_subst)

    p = sub.add_parser("verify", parents=[common], help="property checks")
    p.add_argument("check", choices=("flow", "axioms", "pbw", "recursion"))
    p.add_argument("--f", default="y^2", help="vector field for 'flow'")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        universal = args.command == "subst" and args.action == "universal"
        args.format = "json" if universal else "text"
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"lbk: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ParseError, PreconditionError, OrderMismatch, ValueError) as exc:
        print(f"lbk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
