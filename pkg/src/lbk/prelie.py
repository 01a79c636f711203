"""Free pre-Lie side (non-planar trees) and the scalar polynomial ODE oracle.

Pre-Lie series are sparse maps from multisets of non-planar trees (sorted
tuples) to rationals.  Grafting here is defined directly: each tree of the
left multiset picks any vertex of the right forest to hang from.  It does
not reuse the planar recursion, so projecting planar results gives an
independent check.

The ODE oracle works with one scalar autonomous equation y' = f(y) with f a
polynomial.  Trees become elementary differentials of f.  A multiset of k
trees acts on an observable as its k-th derivative times those k
differentials.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Mapping

from .poly import H, Poly, Y
from .series import PreconditionError, Series
from .trees import NonPlanarTree, abelianize_forest, tree_key

MForest = tuple  # sorted tuple[NonPlanarTree, ...]


def _mgrade(f: MForest) -> int:
    return sum(t.grade for t in f)


def _msort(trees) -> MForest:
    return tuple(sorted(trees, key=tree_key))


def _mstr(f: MForest) -> str:
    return " ".join(str(t) for t in f) if f else "1"


@dataclass
class PreLieSeries:
    """Truncated combination of multiset forests of non-planar trees."""

    order: int
    terms: dict

    def __post_init__(self):
        self.terms = {f: Fraction(c) for f, c in self.terms.items() if c != 0}
        for f in self.terms:
            if _mgrade(f) > self.order:
                raise ValueError("term above truncation order")

    def _check(self, other: PreLieSeries) -> None:
        if self.order != other.order:
            raise ValueError("order mismatch")

    def __add__(self, other: PreLieSeries) -> PreLieSeries:
        self._check(other)
        out = dict(self.terms)
        for f, c in other.terms.items():
            out[f] = out.get(f, 0) + c
        return PreLieSeries(self.order, out)

    def __sub__(self, other: PreLieSeries) -> PreLieSeries:
        return self + other * -1

    def __mul__(self, scalar) -> PreLieSeries:
        return PreLieSeries(self.order, {f: c * scalar for f, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreLieSeries):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __getitem__(self, f: MForest) -> Fraction:
        return self.terms.get(f, Fraction(0))

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __str__(self) -> str:
        items = sorted(self.terms.items(), key=lambda fc: (_mgrade(fc[0]), _mstr(fc[0])))
        if not items:
            return "0"
        parts = []
        for i, (f, c) in enumerate(items):
            mag = abs(c)
            body = _mstr(f) if mag == 1 and f else (
                str(mag) if not f else f"{mag}*{_mstr(f)}"
            )
            sign = "-" if c < 0 else "+"
            parts.append(("-" if c < 0 else "") + body if i == 0 else f" {sign} {body}")
        return "".join(parts)


def project_abelian(u: Series) -> PreLieSeries:
    """Algebra map: planar word of trees -> multiset of abelianized trees."""
    out: dict = {}
    for f, c in u.terms.items():
        key = abelianize_forest(f)
        out[key] = out.get(key, 0) + c
    return PreLieSeries(u.ctx.order, out)


# ---------------------------------------------------------------------------
# pre-Lie / Grossman–Larson operations


def _vertex_paths(t: NonPlanarTree, prefix=()):
    yield prefix
    for i, c in enumerate(t.children):
        yield from _vertex_paths(c, prefix + (i,))


def _attach(t: NonPlanarTree, path: tuple, grafts: list) -> NonPlanarTree:
    """Hang the trees ``grafts`` (each tagged with its target path) onto ``t``."""
    here = [g for p, g in grafts if p == path]
    children = []
    for i, c in enumerate(t.children):
        sub = [(p, g) for p, g in grafts if len(p) > len(path) and p[len(path)] == i
               and p[: len(path)] == path]
        children.append(_attach(c, path + (i,), sub) if sub else c)
    return NonPlanarTree(t.root, children + here)


def prelie_graft_basis(a: MForest, b: MForest) -> dict:
    """A ▷ B: every tree of A is attached to some vertex of the forest B."""
    if not a:
        return {b: 1}
    if not b:
        return {}
    targets = [(j, p) for j, s in enumerate(b) for p in _vertex_paths(s)]
    out: dict = {}
    for choice in product(targets, repeat=len(a)):
        new = []
        for j, s in enumerate(b):
            grafts = [(p, a[i]) for i, (jj, p) in enumerate(choice) if jj == j]
            new.append(_attach(s, (), grafts) if grafts else s)
        key = _msort(new)
        out[key] = out.get(key, 0) + 1
    return out


def _munshuffle(a: MForest):
    n = len(a)
    for k in range(n + 1):
        for left in combinations(range(n), k):
            ls = set(left)
            yield tuple(a[i] for i in left), tuple(a[i] for i in range(n) if i not in ls)


def prelie_gl_basis(a: MForest, b: MForest) -> dict:
    out: dict = {}
    for a1, a2 in _munshuffle(a):
        for g, c in prelie_graft_basis(a2, b).items():
            key = _msort(a1 + g)
            out[key] = out.get(key, 0) + c
    return out


def _bilinear(u: PreLieSeries, v: PreLieSeries, kernel) -> PreLieSeries:
    u._check(v)
    out: dict = {}
    for f, c in u.terms.items():
        for g, d in v.terms.items():
            if _mgrade(f) + _mgrade(g) > u.order:
                continue
            for h, m in kernel(f, g).items():
                out[h] = out.get(h, 0) + c * d * m
    return PreLieSeries(u.order, out)


def prelie_graft(u: PreLieSeries, v: PreLieSeries) -> PreLieSeries:
    return _bilinear(u, v, prelie_graft_basis)


def prelie_gl(u: PreLieSeries, v: PreLieSeries) -> PreLieSeries:
    return _bilinear(u, v, prelie_gl_basis)


def sym_mul(u: PreLieSeries, v: PreLieSeries) -> PreLieSeries:
    return _bilinear(u, v, lambda f, g: {_msort(f + g): 1})


def prelie_exp(x: PreLieSeries) -> PreLieSeries:
    """Exponential for the commutative product of Sym."""
    if x.constant() != 0:
        raise PreconditionError("exp needs a series without constant term")
    one = PreLieSeries(x.order, {(): 1})
    result, power = one, one
    for k in range(1, x.order + 1):
        power = sym_mul(power, x) * Fraction(1, k)
        result = result + power
    return result


def _require_trees(x: PreLieSeries, name: str) -> None:
    if any(len(f) != 1 for f in x.terms):
        raise PreconditionError(f"{name} must be a combination of single trees")


def pre_lie_sharp(x: PreLieSeries, y: PreLieSeries) -> PreLieSeries:
    """x ♯ y = x + exp(x) ▷ y in the pre-Lie setting."""
    _require_trees(x, "x")
    _require_trees(y, "y")
    return x + prelie_graft(prelie_exp(x), y)


# ---------------------------------------------------------------------------
# substitution on non-planar trees


def prelie_substitute(images: Mapping[str, PreLieSeries], u: PreLieSeries) -> PreLieSeries:
    """ā★u with t = B+^c(ω) ↦ (ā★ω) ▷ ā(c), multiplicative on multisets."""
    memo: dict = {}
    one = PreLieSeries(u.order, {(): 1})

    def on_tree(t: NonPlanarTree) -> PreLieSeries:
        hit = memo.get(t)
        if hit is None:
            hit = prelie_graft(on_forest(t.children), images[t.root])
            memo[t] = hit
        return hit

    def on_forest(f) -> PreLieSeries:
        out = one
        for t in f:
            out = sym_mul(out, on_tree(t))
        return out

    out = PreLieSeries(u.order, {})
    for f, c in u.terms.items():
        out = out + on_forest(f) * c
    return out


# ---------------------------------------------------------------------------
# scalar ODE oracle


@dataclass(frozen=True)
class PolynomialVectorField:
    """Right-hand side f(y) of a scalar ODE y' = f(y)."""

    f: Poly
    max_degree: int = 16

    def __post_init__(self):
        if self.f.variables() - {Y}:
            raise ValueError("vector field must be a polynomial in y only")
        if self.f.degree() > self.max_degree:
            raise ValueError("vector field degree exceeds configured bound")

    @classmethod
    def parse(cls, text: str) -> PolynomialVectorField:
        from .grammar import parse_polynomial

        return cls(parse_polynomial(text))

    def derivative(self, k: int) -> Poly:
        out = self.f
        for _ in range(k):
            out = out.diff(Y)
        return out


def elementary_differential(t, field: PolynomialVectorField, memo=None) -> Poly:
    """F(leaf) = f and F([t1..tk]) = f^(k) F(t1)...F(tk); colors are ignored."""
    memo = {} if memo is None else memo
    hit = memo.get(t)
    if hit is not None:
        return hit
    out = field.derivative(len(t.children))
    for c in t.children:
        out = out * elementary_differential(c, field, memo)
    memo[t] = out
    return out


def _forest_operator(f, field: PolynomialVectorField, phi: Poly, memo) -> Poly:
    d = phi
    for _ in range(len(f)):
        d = d.diff(Y)
    for t in f:
        d = d * elementary_differential(t, field, memo)
    return d


def elementary_differential_eval(
    u: Series | PreLieSeries, field: PolynomialVectorField, phi: Poly | None = None
) -> Poly:
    """Sum over forests of coefficient * h^grade * (differential operator)φ."""
    phi = Poly.var(Y) if phi is None else phi
    memo: dict = {}
    out = Poly()
    for f, c in u.terms.items():
        grade = sum(t.grade for t in f)
        term = _forest_operator(f, field, phi, memo) * Poly.var(H) ** grade
        out = out + term * c
    return out


def exact_flow_taylor(field: PolynomialVectorField, order: int) -> list[Poly]:
    """Taylor coefficients y_n of the exact flow, from y_{n+1} = (f d/dy) y_n / (n+1)."""
    if order < 1:
        raise PreconditionError("order must be at least 1")
    coeffs = [Poly.var(Y)]
    current = Poly.var(Y)
    for n in range(1, order + 1):
        current = current.diff(Y) * field.f
        coeffs.append(current * Fraction(1, factorial(n)))
    return coeffs


def h_coefficients(p: Poly, order: int) -> list[Poly]:
    """Split a polynomial in y and h into its h^0..h^order coefficients."""
    out = [Poly() for _ in range(order + 1)]
    for m, c in p.terms.items():
        powers = dict(m)
        n = powers.pop(H, 0)
        if n <= order:
            out[n] = out[n] + Poly({tuple(sorted(powers.items())): c})
    return out
