"""Hypothesis strategies for series, primitives and endomorphisms."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from lbk.hopf import lie_basis_elements
from lbk.series import Context, Series

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero_fractions = small_fractions.filter(bool)


def series(ctx: Context, max_size: int = 6, constant: bool = True):
    forests = ctx.all_forests() if constant else [f for f in ctx.all_forests() if f]
    return st.dictionaries(st.sampled_from(forests), small_fractions, max_size=max_size).map(
        lambda d: Series(ctx, d)
    )


def primitives(ctx: Context, max_size: int = 4):
    elements = [l for n in range(1, ctx.order + 1) for l in lie_basis_elements(ctx, n)]

    def build(combo):
        out: dict = {}
        for idx, c in combo.items():
            for f, d in elements[idx].expansion:
                out[f] = out.get(f, 0) + c * d
        return Series(ctx, out)

    return st.dictionaries(
        st.integers(0, len(elements) - 1), nonzero_fractions, min_size=1, max_size=max_size
    ).map(build)


def seeds():
    return st.integers(0, 2**32 - 1).map(random.Random)


def leaf_series(ctx: Context, color: str = "a", coeff=1) -> Series:
    return ctx.leaf(color) * Fraction(coeff)
