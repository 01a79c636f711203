"""Colored planar and non-planar rooted trees, forests and their enumeration.

Trees are hash-consed: constructing a tree that already exists returns the
existing instance, so equality is identity and hashing is O(1).  A forest is
a plain tuple of planar trees (the empty tuple is the unit of concatenation).
"""
from __future__ import annotations

import os
import re
import warnings
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_MAX_ORDER = 8
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class CapacityError(ValueError):
    """Requested grade exceeds the configured maximum truncation order."""


def max_order() -> int:
    raw = os.environ.get("LBK_MAX_ORDER")
    if not raw:
        return DEFAULT_MAX_ORDER
    value = int(raw)
    if value > DEFAULT_MAX_ORDER:
        warnings.warn(
            f"LBK_MAX_ORDER={value} exceeds the default cap {DEFAULT_MAX_ORDER}; "
            "product tables may take a long time to build",
            stacklevel=2,
        )
    return value


def check_capacity(grade: int) -> None:
    cap = max_order()
    if grade > cap:
        raise CapacityError(f"grade {grade} exceeds maximum order {cap}")


def check_colors(colors: Sequence[str]) -> tuple[str, ...]:
    colors = tuple(colors)
    if not colors:
        raise ValueError("color alphabet must be non-empty")
    for c in colors:
        if not _IDENT.match(c):
            raise ValueError(f"invalid color name {c!r}")
    if len(set(colors)) != len(colors):
        raise ValueError("duplicate color in alphabet")
    return colors


class PlanarTree:
    """Ordered rooted tree with colored vertices, interned."""

    __slots__ = ("root", "children", "grade", "_hash", "_str")
    _table: dict = {}

    def __new__(cls, root: str, children: Iterable[PlanarTree] = ()):
        children = tuple(children)
        key = (root, children)
        t = cls._table.get(key)
        if t is not None:
            return t
        t = object.__new__(cls)
        object.__setattr__(t, "root", root)
        object.__setattr__(t, "children", children)
        object.__setattr__(t, "grade", 1 + sum(c.grade for c in children))
        object.__setattr__(t, "_hash", hash(key))
        object.__setattr__(
            t, "_str", root + "[" + " ".join(c._str for c in children) + "]"
        )
        return cls._table.setdefault(key, t)

    def __setattr__(self, name, value):
        raise AttributeError("PlanarTree is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (PlanarTree, (self.root, self.children))

    def __str__(self) -> str:
        return self._str

    def __repr__(self) -> str:
        return f"PlanarTree({self._str!r})"

    def vertices(self) -> int:
        return self.grade


class NonPlanarTree:
    """Rooted tree whose children form a multiset (kept canonically sorted)."""

    __slots__ = ("root", "children", "grade", "_hash", "_str")
    _table: dict = {}

    def __new__(cls, root: str, children: Iterable[NonPlanarTree] = ()):
        children = tuple(sorted(children, key=tree_key))
        key = (root, children)
        t = cls._table.get(key)
        if t is not None:
            return t
        t = object.__new__(cls)
        object.__setattr__(t, "root", root)
        object.__setattr__(t, "children", children)
        object.__setattr__(t, "grade", 1 + sum(c.grade for c in children))
        object.__setattr__(t, "_hash", hash(("np",) + key))
        object.__setattr__(
            t, "_str", root + "[" + " ".join(c._str for c in children) + "]"
        )
        return cls._table.setdefault(key, t)

    def __setattr__(self, name, value):
        raise AttributeError("NonPlanarTree is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (NonPlanarTree, (self.root, self.children))

    def __str__(self) -> str:
        return self._str

    def __repr__(self) -> str:
        return f"NonPlanarTree({self._str!r})"


Forest = tuple  # tuple[PlanarTree, ...]
EMPTY: Forest = ()


def tree_key(t) -> tuple[int, str]:
    return (t.grade, t._str)


def forest_grade(f: Forest) -> int:
    return sum(t.grade for t in f)


def forest_str(f: Forest) -> str:
    return " ".join(t._str for t in f) if f else "1"


def forest_key(f: Forest) -> tuple:
    """Canonical forest order: grade, then grade of first tree, then string."""
    return (forest_grade(f), f[0].grade if f else 0, forest_str(f))


def leaf(color: str) -> PlanarTree:
    return PlanarTree(color)


def b_plus(color: str, forest: Forest) -> PlanarTree:
    """Attach a new root of the given color below a forest."""
    return PlanarTree(color, forest)


@lru_cache(maxsize=None)
def _trees(colors: tuple[str, ...], n: int) -> tuple[PlanarTree, ...]:
    if n < 1:
        return ()
    out = [PlanarTree(c, f) for c in colors for f in _forests(colors, n - 1)]
    out.sort(key=tree_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(colors: tuple[str, ...], n: int) -> tuple[Forest, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for k in range(1, n + 1):
        for t in _trees(colors, k):
            for rest in _forests(colors, n - k):
                out.append((t,) + rest)
    out.sort(key=forest_key)
    return tuple(out)


def enumerate_trees(colors: Sequence[str], grade: int) -> tuple[PlanarTree, ...]:
    check_capacity(grade)
    return _trees(check_colors(colors), grade)


def enumerate_forests(colors: Sequence[str], grade: int) -> tuple[Forest, ...]:
    """Every forest with exactly ``grade`` vertices, in canonical order."""
    if grade < 0:
        raise ValueError("grade must be non-negative")
    check_capacity(grade)
    return _forests(check_colors(colors), grade)


@lru_cache(maxsize=None)
def abelianize(t: PlanarTree) -> NonPlanarTree:
    return NonPlanarTree(t.root, (abelianize(c) for c in t.children))


def abelianize_forest(f: Forest) -> tuple[NonPlanarTree, ...]:
    """Multiset of abelianized trees, as a canonically sorted tuple."""
    return tuple(sorted((abelianize(t) for t in f), key=tree_key))


def enumerate_nonplanar_trees(colors: Sequence[str], grade: int) -> tuple[NonPlanarTree, ...]:
    seen = {abelianize(t) for t in enumerate_trees(colors, grade)}
    return tuple(sorted(seen, key=tree_key))


def from_nested(obj) -> PlanarTree:
    """Build a tree from ``(color, [children...])`` nesting; handy in tests."""
    color, children = obj
    return PlanarTree(color, (from_nested(c) for c in children))
