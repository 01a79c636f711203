"""Seeded random primitives and series for property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .hopf import lie_basis_elements
from .series import Context, Series

_SMALL = [Fraction(n, d) for n in range(-3, 4) if n for d in (1, 2, 3)]


def random_rational(rng: random.Random) -> Fraction:
    return rng.choice(_SMALL)


def random_primitive(
    ctx: Context, rng: random.Random, density: float = 0.5, max_grade: int | None = None
) -> Series:
    """Random rational combination of Lie basis elements of grade 1..max_grade."""
    top = ctx.order if max_grade is None else max_grade
    out: dict = {}
    for n in range(1, top + 1):
        for l in lie_basis_elements(ctx, n):
            if rng.random() >= density:
                continue
            c = random_rational(rng)
            for f, d in l.expansion:
                out[f] = out.get(f, 0) + c * d
    s = Series._raw(ctx, out)
    if not s:
        return ctx.leaf(rng.choice(ctx.colors)) * random_rational(rng)
    return s


def random_series(ctx: Context, rng: random.Random, density: float = 0.3, constant=None) -> Series:
    out: dict = {}
    for f in ctx.all_forests():
        if rng.random() < density:
            out[f] = random_rational(rng)
    if constant is not None:
        out[()] = constant
    return Series._raw(ctx, out)
