"""Truncated graded series over exact coefficient rings, and graded linear maps.

A :class:`Series` is an element of the completed tensor algebra on planar
trees known modulo grade ``order + 1``.  Forests form an orthonormal basis
for :func:`pair`, so every coproduct in this package is literally the
transpose of a product matrix (see :class:`GradedLinearMap`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .poly import Poly, format_rational
from .trees import (
    EMPTY,
    Forest,
    PlanarTree,
    check_capacity,
    check_colors,
    enumerate_forests,
    enumerate_trees,
    forest_grade,
    forest_key,
    forest_str,
)


class OrderMismatch(ValueError):
    """Binary operation on series with different orders or alphabets."""


class PreconditionError(ValueError):
    """An operation's input contract does not hold (e.g. non-primitive input)."""


@dataclass(frozen=True)
class Context:
    """Color alphabet and truncation order shared by a family of series."""

    colors: tuple[str, ...] = ("a",)
    order: int = 4

    def __post_init__(self):
        object.__setattr__(self, "colors", check_colors(self.colors))
        if self.order < 0:
            raise ValueError("order must be non-negative")
        check_capacity(self.order)

    def with_order(self, order: int) -> Context:
        return Context(self.colors, order)

    def forests(self, grade: int) -> tuple[Forest, ...]:
        return enumerate_forests(self.colors, grade)

    def trees(self, grade: int) -> tuple[PlanarTree, ...]:
        return enumerate_trees(self.colors, grade)

    def all_forests(self, max_grade: int | None = None) -> list[Forest]:
        top = self.order if max_grade is None else max_grade
        return [f for n in range(top + 1) for f in self.forests(n)]

    def zero(self) -> Series:
        return Series(self, {})

    def one(self) -> Series:
        return Series(self, {EMPTY: 1})

    def basis(self, f: Forest, coeff=1) -> Series:
        return Series(self, {f: coeff})

    def leaf(self, color: str | None = None) -> Series:
        color = self.colors[0] if color is None else color
        if color not in self.colors:
            raise ValueError(f"unknown color {color!r}")
        return Series(self, {(PlanarTree(color),): 1})

    def parse(self, text: str) -> Series:
        from .grammar import parse_series

        return parse_series(text, self)


def _coerce(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class Series:
    """Sparse map forest -> nonzero coefficient, all forests of grade <= order."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[Forest, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for f, c in items:
            if c == 0:
                continue
            if forest_grade(f) > ctx.order:
                raise ValueError(
                    f"forest {forest_str(f)} has grade above order {ctx.order}"
                )
            for t in f:
                _check_tree_colors(t, ctx.colors)
            clean[f] = _coerce(c)
        self.ctx = ctx
        self.terms = clean

    @classmethod
    def _raw(cls, ctx: Context, terms: dict) -> Series:
        """Trusted constructor: drops zeros, assumes grades already truncated."""
        s = object.__new__(cls)
        s.ctx = ctx
        s.terms = {f: c for f, c in terms.items() if c != 0}
        return s

    @property
    def order(self) -> int:
        return self.ctx.order

    def _check(self, other: Series) -> None:
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if self.ctx != other.ctx:
            raise OrderMismatch(
                f"context mismatch: {self.ctx} vs {other.ctx}"
            )

    def __add__(self, other: Series) -> Series:
        self._check(other)
        out = dict(self.terms)
        for f, c in other.terms.items():
            out[f] = out[f] + c if f in out else c
        return Series._raw(self.ctx, out)

    def __sub__(self, other: Series) -> Series:
        return self + (-other)

    def __neg__(self) -> Series:
        return Series._raw(self.ctx, {f: -c for f, c in self.terms.items()})

    def __mul__(self, scalar) -> Series:
        if isinstance(scalar, Series):
            raise TypeError("use conc_mul/gl_mul/shuffle_mul for series products")
        scalar = _coerce(scalar)
        return Series._raw(self.ctx, {f: c * scalar for f, c in self.terms.items()})

    def __rmul__(self, scalar) -> Series:
        if isinstance(scalar, Series):
            raise TypeError("use conc_mul/gl_mul/shuffle_mul for series products")
        scalar = _coerce(scalar)
        return Series._raw(self.ctx, {f: scalar * c for f, c in self.terms.items()})

    def __truediv__(self, scalar) -> Series:
        return self * (Fraction(1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    __hash__ = None

    def __getitem__(self, f: Forest):
        return self.terms.get(f, Fraction(0))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> list[tuple[Forest, object]]:
        return sorted(self.terms.items(), key=lambda fc: forest_key(fc[0]))

    def constant(self):
        return self.terms.get(EMPTY, Fraction(0))

    def grade_part(self, n: int) -> Series:
        return Series._raw(
            self.ctx, {f: c for f, c in self.terms.items() if forest_grade(f) == n}
        )

    def truncate(self, n: int) -> Series:
        """Drop every term of grade above ``n`` (keeps the context)."""
        return Series._raw(
            self.ctx, {f: c for f, c in self.terms.items() if forest_grade(f) <= n}
        )

    def reorder(self, ctx: Context) -> Series:
        """Same terms viewed in another context (truncating if the order shrinks)."""
        return Series._raw(
            ctx, {f: c for f, c in self.terms.items() if forest_grade(f) <= ctx.order}
        )

    def min_grade(self) -> int | None:
        return min((forest_grade(f) for f in self.terms), default=None)

    def map_coefficients(self, fn: Callable) -> Series:
        return Series._raw(self.ctx, {f: fn(c) for f, c in self.terms.items()})

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"Series({format_series(self)!r}, order={self.ctx.order})"


def _check_tree_colors(t: PlanarTree, colors: tuple[str, ...]) -> None:
    stack = [t]
    while stack:
        s = stack.pop()
        if s.root not in colors:
            raise ValueError(f"unknown color {s.root!r}")
        stack.extend(s.children)


def format_coefficient(c) -> str:
    if isinstance(c, Poly):
        return f"({c})"
    return format_rational(c)


def format_series(s: Series) -> str:
    """Canonical print: lowest terms, sorted by (grade, forest string)."""
    items = s.items()
    if not items:
        return "0"
    parts = []
    for i, (f, c) in enumerate(items):
        if isinstance(c, Poly):
            body = f"({c})*{forest_str(f)}" if f else f"({c})"
            parts.append(body if i == 0 else " + " + body)
            continue
        neg = c < 0
        mag = -c if neg else c
        if not f:
            body = format_rational(mag)
        elif mag == 1:
            body = forest_str(f)
        else:
            body = f"{format_rational(mag)}*{forest_str(f)}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def pair(u: Series, w: Series):
    """Bilinear pairing with forests orthonormal."""
    u._check(w)
    small, big = (u, w) if len(u.terms) <= len(w.terms) else (w, u)
    total = Fraction(0)
    for f, c in small.terms.items():
        d = big.terms.get(f)
        if d is not None:
            total = total + c * d
    return total


# ---------------------------------------------------------------------------
# tensors: dict[(Forest, Forest)] -> coefficient


def pair_tensor(tensor: Mapping, u: Series, v: Series):
    """<T, u (x) v> for a tensor given as a mapping of forest pairs."""
    total = Fraction(0)
    for (f1, f2), c in tensor.items():
        a = u.terms.get(f1)
        if a is None:
            continue
        b = v.terms.get(f2)
        if b is None:
            continue
        total = total + c * a * b
    return total


def format_tensor(tensor: Mapping) -> str:
    items = sorted(
        ((k, c) for k, c in tensor.items() if c != 0),
        key=lambda kc: (forest_key(kc[0][0]), forest_key(kc[0][1])),
    )
    if not items:
        return "0"
    parts = []
    for i, ((f1, f2), c) in enumerate(items):
        neg = c < 0
        mag = -c if neg else c
        body = f"{forest_str(f1)} ⊗ {forest_str(f2)}"
        if mag != 1:
            body = f"{format_rational(mag)}*{body}"
        parts.append(("-" if neg else "") + body if i == 0 else (" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# graded linear maps


def _is_pair(label) -> bool:
    return (
        isinstance(label, tuple)
        and len(label) == 2
        and isinstance(label[0], tuple)
        and isinstance(label[1], tuple)
    )


def _label_str(label) -> str:
    if _is_pair(label):
        return f"{forest_str(label[0])} ⊗ {forest_str(label[1])}"
    return forest_str(label)


def _label_key(label):
    if _is_pair(label):
        return (1, forest_key(label[0]), forest_key(label[1]))
    return (0, forest_key(label))


@dataclass
class GradedLinearMap:
    """Sparse matrix block between two graded pieces.

    ``entries[(row, col)]`` is the coefficient of basis element ``row`` of the
    codomain in the image of basis element ``col`` of the domain.  Labels are
    forests, or pairs of forests for tensor-square pieces; a grade is an int,
    or a ``(p, q)`` pair for a bi-graded tensor block.
    """

    domain_grade: int | tuple[int, int]
    codomain_grade: int | tuple[int, int]
    entries: dict

    def transpose(self) -> GradedLinearMap:
        return GradedLinearMap(
            self.codomain_grade,
            self.domain_grade,
            {(col, row): c for (row, col), c in self.entries.items()},
        )

    def apply(self, vector: Mapping[Hashable, object]) -> dict:
        out: dict = {}
        for (row, col), c in self.entries.items():
            x = vector.get(col)
            if x is None:
                continue
            out[row] = out.get(row, 0) + c * x
        return {k: v for k, v in out.items() if v != 0}

    def compose(self, other: GradedLinearMap) -> GradedLinearMap:
        """``self ∘ other``."""
        by_row: dict = {}
        for (mid, col), c in other.entries.items():
            by_row.setdefault(mid, []).append((col, c))
        out: dict = {}
        for (row, mid), c in self.entries.items():
            for col, d in by_row.get(mid, ()):
                out[(row, col)] = out.get((row, col), 0) + c * d
        return GradedLinearMap(
            other.domain_grade,
            self.codomain_grade,
            {k: v for k, v in out.items() if v != 0},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedLinearMap):
            return NotImplemented
        return (
            self.domain_grade == other.domain_grade
            and self.codomain_grade == other.codomain_grade
            and {k: v for k, v in self.entries.items() if v != 0}
            == {k: v for k, v in other.entries.items() if v != 0}
        )

    def to_json(self) -> dict:
        rows = sorted(
            self.entries.items(),
            key=lambda kv: (_label_key(kv[0][0]), _label_key(kv[0][1])),
        )
        grade = lambda g: list(g) if isinstance(g, tuple) else g
        return {
            "domain_grade": grade(self.domain_grade),
            "codomain_grade": grade(self.codomain_grade),
            "entries": [
                [_label_str(r), _label_str(c), format_rational(v)]
                for (r, c), v in rows
                if v != 0
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=1)


def identity_map(ctx: Context, grade: int) -> GradedLinearMap:
    return GradedLinearMap(grade, grade, {(f, f): Fraction(1) for f in ctx.forests(grade)})


def linear_map_from_basis(
    ctx: Context, grade: int, fn: Callable[[Forest], Mapping[Forest, object]]
) -> GradedLinearMap:
    entries = {}
    for col in ctx.forests(grade):
        for row, c in fn(col).items():
            if c != 0:
                entries[(row, col)] = c
    return GradedLinearMap(grade, grade, entries)


# ---------------------------------------------------------------------------
# exact linear algebra


def rank(rows: Iterable[Mapping[Hashable, object]]) -> int:
    """Rank over Q of a family of sparse vectors (exact elimination)."""
    pivots: dict = {}  # pivot column -> normalized row
    r = 0
    for row in rows:
        v = {k: Fraction(c) for k, c in row.items() if c != 0}
        while v:
            col = min(v, key=_sort_key)
            p = pivots.get(col)
            if p is None:
                lead = v[col]
                pivots[col] = {k: c / lead for k, c in v.items()}
                r += 1
                break
            factor = v[col]
            for k, c in p.items():
                nv = v.get(k, 0) - factor * c
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
    return r


def _sort_key(label):
    try:
        return _label_key(label)
    except Exception:  # non-forest labels
        return (2, repr(label))
