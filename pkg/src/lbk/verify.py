"""Property checks shared by the CLI ``verify`` command and the test suite.

Each check walks its cases in increasing size and returns a :class:`Report`.
The first failure found is therefore a smallest counterexample.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .algebra import associator_graft, bracket_conc, graft
from .hopf import (
    euler_basis,
    euler_rank,
    exp_gl,
    lie_dimensions,
    pbw_counts,
    pbw_rank,
)
from .poly import Poly, Y
from .prelie import (
    PolynomialVectorField,
    elementary_differential_eval,
    exact_flow_taylor,
    h_coefficients,
)
from .series import Context
from .subst import (
    cosubstitution,
    evaluate_cosubstitution,
    random_endomorphism,
    substitution_transpose,
)
from .trees import forest_str


@dataclass
class Report:
    name: str
    ok: bool = True
    checked: int = 0
    counterexample: str | None = None
    lines: list[str] = field(default_factory=list)

    def fail(self, message: str) -> Report:
        if self.ok:
            self.ok = False
            self.counterexample = message
        return self


def _tree_triples(ctx: Context, max_grade: int):
    for total in range(3, max_grade + 1):
        for i in range(1, total - 1):
            for j in range(1, total - i):
                k = total - i - j
                yield from product(ctx.trees(i), ctx.trees(j), ctx.trees(k))


def post_lie_axioms(ctx: Context, max_grade: int | None = None) -> Report:
    """x▷[y,z] = [x▷y,z] + [y,x▷z] and [x,y]▷z = a(x,y,z) − a(y,x,z)."""
    top = ctx.order if max_grade is None else max_grade
    rep = Report("post-Lie axioms")
    for tx, ty, tz in _tree_triples(ctx, top):
        x, y, z = (ctx.basis((t,)) for t in (tx, ty, tz))
        rep.checked += 1
        lhs = graft(x, bracket_conc(y, z))
        rhs = bracket_conc(graft(x, y), z) + bracket_conc(y, graft(x, z))
        if lhs != rhs:
            return rep.fail(f"axiom I fails for x={tx}, y={ty}, z={tz}: {lhs} != {rhs}")
        lhs = graft(bracket_conc(x, y), z)
        rhs = associator_graft(x, y, z) - associator_graft(y, x, z)
        if lhs != rhs:
            return rep.fail(f"axiom II fails for x={tx}, y={ty}, z={tz}: {lhs} != {rhs}")
    return rep


def euler_and_pbw(ctx: Context, max_grade: int | None = None) -> Report:
    """Idempotency of e, Lie ranks vs the PBW count, and full rank of ψ."""
    top = ctx.order if max_grade is None else max_grade
    rep = Report("Euler idempotent and PBW")
    for n in range(1, top + 1):
        for w in ctx.forests(n):
            rep.checked += 1
            once = euler_basis(w)
            twice: dict = {}
            for f, c in once.items():
                for g, d in euler_basis(f).items():
                    twice[g] = twice.get(g, 0) + c * d
            twice = {g: c for g, c in twice.items() if c != 0}
            if twice != once:
                return rep.fail(f"e(e(w)) != e(w) for w = {forest_str(w)}")
    ranks = [euler_rank(ctx, n) for n in range(1, top + 1)]
    if ranks != lie_dimensions(ctx, top):
        return rep.fail(f"rank of e {ranks} differs from Lyndon counts {lie_dimensions(ctx, top)}")
    counts = pbw_counts(ranks, top)
    forests = [len(ctx.forests(n)) for n in range(top + 1)]
    rep.lines.append(f"rank e: {ranks}")
    rep.lines.append(f"PBW count: {counts}  forests: {forests}")
    if counts != forests:
        return rep.fail(f"generating-function identity fails: {counts} != {forests}")
    for n in range(1, top + 1):
        r = pbw_rank(ctx, n)
        rep.checked += 1
        if r != forests[n]:
            return rep.fail(f"PBW map has rank {r} < {forests[n]} at grade {n}")
    return rep


def flow_oracle(field_: PolynomialVectorField, order: int, colors=("a",)) -> Report:
    """exp*(h•) under elementary differentials vs the exact-flow Taylor series."""
    ctx = Context(tuple(colors), order)
    algebraic = h_coefficients(
        elementary_differential_eval(exp_gl(ctx.leaf()), field_, Poly.var(Y)), order
    )
    exact = exact_flow_taylor(field_, order)
    rep = Report(f"flow oracle f = {field_.f}")
    for n in range(order + 1):
        rep.checked += 1
        mark = "ok" if algebraic[n] == exact[n] else "MISMATCH"
        rep.lines.append(f"h^{n}\t{algebraic[n]}\t{exact[n]}\t{mark}")
        if algebraic[n] != exact[n]:
            rep.fail(f"h^{n}: algebraic {algebraic[n]} vs exact {exact[n]}")
    return rep


def substitution_recursion(
    ctx: Context, count: int = 3, seed: int = 0, max_grade: int | None = None
) -> Report:
    """Character evaluation of the universal recursion vs the concrete transpose."""
    top = ctx.order if max_grade is None else max_grade
    rep = Report("co-substitution recursion")
    rng = random.Random(seed)
    for trial in range(count):
        a = random_endomorphism(ctx, rng)
        alpha = a.character()
        for omega in ctx.all_forests(top):
            rep.checked += 1
            concrete = substitution_transpose(a, omega)
            universal = evaluate_cosubstitution(cosubstitution(ctx.basis(omega)), ctx, alpha)
            if concrete != universal:
                imgs = ", ".join(f"{c} -> {a.images[c]}" for c in ctx.colors)
                return rep.fail(
                    f"omega = {forest_str(omega)}, endomorphism {imgs}: "
                    f"recursion {universal} vs transpose {concrete}"
                )
    return rep
