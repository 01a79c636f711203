"""Products and coproducts on the tensor algebra of planar forests.

Basis-level kernels map forests to ``dict[Forest, int]`` and are memoized in
process-wide tables.  Every kernel is homogeneous of degree zero in the
grading, so truncation of a series product is just skipping pairs whose
grades add up past the order.

Grafting ``A ▷ B`` on forests follows

* ``t ▷ s`` for trees: attach ``t`` by a new leftmost edge at every vertex of ``s``;
* ``t ▷ (B1 B2 ... Bk)`` for a tree ``t``: derivation over the trees of ``B``;
* ``(x A) ▷ B = x ▷ (A ▷ B) - (x ▷ A) ▷ B`` for a tree ``x``;
* ``1 ▷ B = B`` and ``A ▷ 1 = 0`` for non-empty ``A``.
"""
from __future__ import annotations

from collections.abc import Callable
from itertools import combinations

from .series import OrderMismatch, PreconditionError, Series
from .trees import EMPTY, Forest, PlanarTree, forest_grade

Kernel = Callable[[Forest, Forest], dict]

_graft_memo: dict = {}
_gl_memo: dict = {}
_shuffle_memo: dict = {}
_unshuffle_memo: dict = {}
_tree_graft_memo: dict = {}


def _acc(out: dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# basis kernels


def conc_basis(a: Forest, b: Forest) -> dict:
    return {a + b: 1}


def shuffle_basis(a: Forest, b: Forest) -> dict:
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    key = (a, b)
    hit = _shuffle_memo.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    for w, c in shuffle_basis(a[1:], b).items():
        _acc(out, (a[0],) + w, c)
    for w, c in shuffle_basis(a, b[1:]).items():
        _acc(out, (b[0],) + w, c)
    return _shuffle_memo.setdefault(key, out)


def deconcat_basis(w: Forest) -> dict:
    return {(w[:i], w[i:]): 1 for i in range(len(w) + 1)}


def unshuffle_basis(w: Forest) -> dict:
    """All splits of the word into complementary subwords."""
    hit = _unshuffle_memo.get(w)
    if hit is not None:
        return hit
    n = len(w)
    out: dict = {}
    idx = range(n)
    for k in range(n + 1):
        for left in combinations(idx, k):
            ls = set(left)
            key = (tuple(w[i] for i in left), tuple(w[i] for i in idx if i not in ls))
            out[key] = out.get(key, 0) + 1
    return _unshuffle_memo.setdefault(w, out)


def graft_tree_tree(t: PlanarTree, s: PlanarTree) -> dict:
    """``t ▷ s``: new leftmost edge from each vertex of ``s`` to the root of ``t``."""
    key = (t, s)
    hit = _tree_graft_memo.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    _acc(out, PlanarTree(s.root, (t,) + s.children), 1)
    for i, child in enumerate(s.children):
        for g, c in graft_tree_tree(t, child).items():
            _acc(out, PlanarTree(s.root, s.children[:i] + (g,) + s.children[i + 1 :]), c)
    return _tree_graft_memo.setdefault(key, out)


def _graft_tree_forest(t: PlanarTree, b: Forest) -> dict:
    out: dict = {}
    for i, s in enumerate(b):
        for g, c in graft_tree_tree(t, s).items():
            _acc(out, b[:i] + (g,) + b[i + 1 :], c)
    return out


def graft_basis(a: Forest, b: Forest) -> dict:
    if not a:
        return {b: 1}
    if not b:
        return {}
    key = (a, b)
    hit = _graft_memo.get(key)
    if hit is not None:
        return hit
    if len(a) == 1:
        out = _graft_tree_forest(a[0], b)
    else:
        x, rest = a[0], a[1:]
        out = {}
        for f, c in graft_basis(rest, b).items():
            for g, d in _graft_tree_forest(x, f).items():
                _acc(out, g, c * d)
        for f, c in _graft_tree_forest(x, rest).items():
            for g, d in graft_basis(f, b).items():
                _acc(out, g, -c * d)
    return _graft_memo.setdefault(key, out)


def gl_basis(a: Forest, b: Forest) -> dict:
    """Grossman–Larson product ``A * B = sum A(1) (A(2) ▷ B)``."""
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    key = (a, b)
    hit = _gl_memo.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    for (a1, a2), m in unshuffle_basis(a).items():
        for g, c in graft_basis(a2, b).items():
            _acc(out, a1 + g, m * c)
    return _gl_memo.setdefault(key, out)


def clear_memos() -> None:
    for table in (_graft_memo, _gl_memo, _shuffle_memo, _unshuffle_memo, _tree_graft_memo):
        table.clear()


# ---------------------------------------------------------------------------
# series level


def _by_grade(u: Series) -> dict[int, list]:
    out: dict[int, list] = {}
    for f, c in u.terms.items():
        out.setdefault(forest_grade(f), []).append((f, c))
    return out


def bilinear(u: Series, v: Series, kernel: Kernel) -> Series:
    """Extend a homogeneous basis kernel bilinearly, truncating at the order."""
    u._check(v)
    order = u.ctx.order
    ug, vg = _by_grade(u), _by_grade(v)
    out: dict = {}
    for p, uterms in ug.items():
        for q, vterms in vg.items():
            if p + q > order:
                continue
            for f, c in uterms:
                for g, d in vterms:
                    cd = c * d
                    for h, m in kernel(f, g).items():
                        if h in out:
                            out[h] = out[h] + cd * m
                        else:
                            out[h] = cd * m
    return Series._raw(u.ctx, out)


def conc_mul(u: Series, v: Series) -> Series:
    return bilinear(u, v, conc_basis)


def shuffle_mul(u: Series, v: Series) -> Series:
    return bilinear(u, v, shuffle_basis)


def graft(u: Series, v: Series) -> Series:
    return bilinear(u, v, graft_basis)


def gl_mul(u: Series, v: Series) -> Series:
    return bilinear(u, v, gl_basis)


def _coproduct(w: Series, kernel) -> dict:
    out: dict = {}
    for f, c in w.terms.items():
        for key, m in kernel(f).items():
            if key in out:
                out[key] = out[key] + c * m
            else:
                out[key] = c * m
    return {k: v for k, v in out.items() if v != 0}


def deconcat(w: Series) -> dict:
    """Deconcatenation coproduct as a mapping ``(left, right) -> coefficient``."""
    return _coproduct(w, deconcat_basis)


def unshuffle(w: Series) -> dict:
    return _coproduct(w, unshuffle_basis)


def is_primitive(x: Series) -> bool:
    """True iff unshuffle(x) = x ⊗ 1 + 1 ⊗ x."""
    if x.constant() != 0:
        return False
    out: dict = {}
    for f, c in x.terms.items():
        if len(f) < 2:
            continue
        for (l, r), m in unshuffle_basis(f).items():
            if l and r:
                out[(l, r)] = out.get((l, r), 0) + c * m
    return all(v == 0 for v in out.values())


def require_primitive(x: Series, name: str = "argument") -> None:
    if not is_primitive(x):
        raise PreconditionError(f"{name} is not primitive (not in the Lie algebra)")


def bracket_conc(x: Series, y: Series) -> Series:
    """``[x, y] = x•y - y•x``."""
    return conc_mul(x, y) - conc_mul(y, x)


def double_bracket(x: Series, y: Series) -> Series:
    """``⟦x, y⟧ = x ▷ y - y ▷ x + [x, y]`` on primitives."""
    x._check(y)
    require_primitive(x, "x")
    require_primitive(y, "y")
    return graft(x, y) - graft(y, x) + bracket_conc(x, y)


def associator_graft(x: Series, y: Series, z: Series) -> Series:
    """``a_▷(x, y, z) = x ▷ (y ▷ z) - (x ▷ y) ▷ z``."""
    return graft(x, graft(y, z)) - graft(graft(x, y), z)


__all__ = [
    "OrderMismatch",
    "bilinear",
    "conc_mul",
    "shuffle_mul",
    "graft",
    "gl_mul",
    "deconcat",
    "unshuffle",
    "bracket_conc",
    "double_bracket",
    "associator_graft",
    "is_primitive",
    "require_primitive",
    "conc_basis",
    "shuffle_basis",
    "graft_basis",
    "gl_basis",
    "graft_tree_tree",
    "deconcat_basis",
    "unshuffle_basis",
    "EMPTY",
]
