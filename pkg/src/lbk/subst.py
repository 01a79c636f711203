"""Post-Lie endomorphisms, substitution and the universal co-substitution.

An endomorphism is fixed by the primitive image of each color.  It acts on
a tree ``B+^c(ω) = ω ▷ c`` by ``a★t = (a★ω) ▷ a(c)``, multiplicatively on
forests and linearly on series.

The universal substitution takes its coefficients in the polynomial ring K
with one variable ``a_c(l)`` per color c and Lie basis element l.  Its
transpose on dual forests is computed with the two-stage recursion::

    U^T(ω)  = sum_{Δ•(ω)}  U^T(ω1) · Ū^T(ω2)
    Ū^T(ω)  = sum_{Δ▷(ω)}  U^T(ω(1)) ↷ U^t(ω(2))

where ``↷`` puts a root of color c below a dual forest and ``U^t`` reads the
``a_c(l)`` coordinates of a dual forest through the transposed Euler map.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .algebra import conc_mul, graft, is_primitive
from .hopf import (
    LieElement,
    euler_dual,
    euler_transpose,
    graft_coproduct_basis,
    lie_basis_elements,
    lie_coordinates,
    shuffle_mul,
)
from .poly import Poly, Var
from .series import Context, OrderMismatch, PreconditionError, Series
from .trees import EMPTY, Forest, PlanarTree, forest_grade


@dataclass(frozen=True)
class Endomorphism:
    ctx: Context
    images: Mapping[str, Series]

    def __post_init__(self):
        if set(self.images) != set(self.ctx.colors):
            missing = set(self.ctx.colors) - set(self.images)
            extra = set(self.images) - set(self.ctx.colors)
            raise PreconditionError(f"bad color set: missing {missing}, extra {extra}")
        for c, img in self.images.items():
            if img.ctx != self.ctx:
                raise OrderMismatch(f"image of {c!r} lives in {img.ctx}")
            if img.constant() != 0:
                raise PreconditionError(f"image of {c!r} has a constant term")
            if not is_primitive(img):
                raise PreconditionError(f"image of {c!r} is not primitive")

    @classmethod
    def identity(cls, ctx: Context) -> Endomorphism:
        return cls(ctx, {c: ctx.leaf(c) for c in ctx.colors})

    @classmethod
    def scaling(cls, ctx: Context, factor) -> Endomorphism:
        return cls(ctx, {c: ctx.leaf(c) * factor for c in ctx.colors})

    def __call__(self, u: Series) -> Series:
        return apply_endomorphism(self, u)

    def compose(self, other: Endomorphism) -> Endomorphism:
        """``self ∘ other``: first substitute ``other``, then ``self``."""
        return Endomorphism(
            self.ctx, {c: apply_endomorphism(self, img) for c, img in other.images.items()}
        )

    def character(self) -> dict[Var, Fraction]:
        """Values of the coordinate functions a_c(l) at this endomorphism."""
        out: dict[Var, Fraction] = {}
        for c in self.ctx.colors:
            coords = lie_coordinates(self.images[c])
            for n in range(1, self.ctx.order + 1):
                for l in lie_basis_elements(self.ctx, n):
                    out[variable(self.ctx, c, l)] = coords.get((n, l.index), Fraction(0))
        return out


def apply_endomorphism(a: Endomorphism, u: Series) -> Series:
    """The substitution action a★u."""
    if u.ctx != a.ctx:
        raise OrderMismatch(f"endomorphism order {a.ctx} vs series {u.ctx}")
    ctx = a.ctx
    tree_memo: dict[PlanarTree, Series] = {}
    forest_memo: dict[Forest, Series] = {EMPTY: ctx.one()}

    def on_forest(f: Forest) -> Series:
        hit = forest_memo.get(f)
        if hit is None:
            hit = conc_mul(on_forest(f[:-1]), on_tree(f[-1]))
            forest_memo[f] = hit
        return hit

    def on_tree(t: PlanarTree) -> Series:
        hit = tree_memo.get(t)
        if hit is None:
            hit = graft(on_forest(t.children), a.images[t.root])
            tree_memo[t] = hit
        return hit

    out = ctx.zero()
    for f, c in u.terms.items():
        out = out + on_forest(f) * c
    return out


def substitution_transpose(a: Endomorphism, omega: Forest) -> Series:
    """(a★)^T on a dual forest: sum over f of <a★f, ω> f."""
    ctx = a.ctx
    n = forest_grade(omega)
    out = {}
    for m in range(0, n + 1):
        for f in ctx.forests(m):
            c = apply_endomorphism(a, ctx.basis(f))[omega]
            if c != 0:
                out[f] = c
    return Series._raw(ctx, out)


def random_endomorphism(ctx: Context, rng: random.Random, density: float = 0.6) -> Endomorphism:
    from .randomgen import random_primitive

    images = {}
    for c in ctx.colors:
        img = random_primitive(ctx, rng, density=density)
        img = img + ctx.leaf(c) * rng.choice([1, 2, -1, Fraction(1, 2)])
        images[c] = img
    return Endomorphism(ctx, images)


# ---------------------------------------------------------------------------
# universal coefficients


def variable(ctx: Context, color: str, element: LieElement) -> Var:
    ci = ctx.colors.index(color)
    return Var((2, ci, element.grade, element.index), f"a_{color}({element.label})")


def variables(ctx: Context) -> list[Var]:
    return [
        variable(ctx, c, l)
        for c in ctx.colors
        for n in range(1, ctx.order + 1)
        for l in lie_basis_elements(ctx, n)
    ]


@dataclass(frozen=True)
class UniversalCoefficients:
    """The ring K = Q[a_c(l)] for a given alphabet and truncation order."""

    ctx: Context

    def variables(self) -> list[Var]:
        return variables(self.ctx)

    def universal_image(self, color: str) -> Series:
        """U(c) = sum_l a_c(l) l, a series with coefficients in K."""
        out: dict = {}
        for n in range(1, self.ctx.order + 1):
            for l in lie_basis_elements(self.ctx, n):
                v = Poly.var(variable(self.ctx, color, l))
                for f, c in l.expansion:
                    out[f] = out[f] + v * c if f in out else v * c
        return Series._raw(self.ctx, out)

    def specialize(self, values: Mapping[Forest, Poly], alpha: Mapping[Var, Fraction]) -> Series:
        return Series._raw(self.ctx, {f: p.evaluate(alpha) for f, p in values.items()})


def ut_projection(ctx: Context, omega: Series | Forest) -> dict[str, Poly]:
    """U^t: K-valued color functional of a dual forest.

    Projects ω onto the Lie duals with the transposed Euler map, then reads
    off the coefficient of each Lie basis element as the variable a_c(l).
    """
    w = ctx.basis(omega) if isinstance(omega, tuple) else omega
    projected = euler_transpose(w)
    out: dict[str, Poly] = {}
    if not projected:
        return out
    for n in sorted({forest_grade(f) for f in projected.terms}):
        if n == 0:
            continue
        for l in lie_basis_elements(ctx, n):
            val = Fraction(0)
            for f, c in l.expansion:
                d = projected.terms.get(f)
                if d is not None:
                    val += c * d
            if val != 0:
                for color in ctx.colors:
                    p = Poly.var(variable(ctx, color, l)) * val
                    out[color] = out[color] + p if color in out else p
    return out


class _Recursion:
    """Memoized two-stage recursion, generic in the coefficient algebra."""

    def __init__(self, ctx: Context, one, ut: Callable[[Forest], dict]):
        self.ctx = ctx
        self.one = one
        self.ut = ut
        self.forest_memo: dict = {}
        self.tree_memo: dict = {}

    def forest(self, omega: Forest) -> dict:
        hit = self.forest_memo.get(omega)
        if hit is not None:
            return hit
        if not omega:
            out = {EMPTY: self.one}
        else:
            out = {}
            for i in range(len(omega)):
                right = self.tree(omega[i:])
                if not right:
                    continue
                left = self.forest(omega[:i])
                for f1, c1 in left.items():
                    for f2, c2 in right.items():
                        _acc(out, f1 + f2, c1 * c2)
        self.forest_memo[omega] = out
        return out

    def tree(self, omega: Forest) -> dict:
        hit = self.tree_memo.get(omega)
        if hit is not None:
            return hit
        out: dict = {}
        if omega:
            for (w1, w2), m in graft_coproduct_basis(omega, self.ctx.colors):
                if not w2:
                    continue
                ut = self.ut(w2)
                if not ut:
                    continue
                for f, c in self.forest(w1).items():
                    for color, p in ut.items():
                        _acc(out, (PlanarTree(color, f),), c * p * m)
        self.tree_memo[omega] = out
        return out


def _acc(out: dict, key, value) -> None:
    if key in out:
        v = out[key] + value
        if v == 0:
            del out[key]
        else:
            out[key] = v
    elif value != 0:
        out[key] = value


_recursions: dict = {}


def _universal(ctx: Context) -> _Recursion:
    rec = _recursions.get(ctx)
    if rec is None:
        rec = _Recursion(ctx, Poly.const(1), lambda w: ut_projection(ctx, w))
        rec = _recursions.setdefault(ctx, rec)
    return rec


def _require_grade(ctx: Context, omega: Forest) -> None:
    if forest_grade(omega) > ctx.order:
        raise PreconditionError(f"dual forest grade exceeds order {ctx.order}")


def universal_substitution_forest(ctx: Context, omega: Forest) -> dict[Forest, Poly]:
    """U^T_★(ω): K-linear combination of dual forests."""
    _require_grade(ctx, omega)
    return dict(_universal(ctx).forest(omega))


def universal_substitution_tree(ctx: Context, omega: Forest) -> dict[Forest, Poly]:
    """Ū^T_★(ω): the part of U^T_★(ω) supported on single dual trees."""
    _require_grade(ctx, omega)
    return dict(_universal(ctx).tree(omega))


def cosubstitution(u_dual: Series) -> dict[Forest, Poly]:
    """Δ★ on a dual series, as ``target forest -> K coefficient``."""
    ctx = u_dual.ctx
    rec = _universal(ctx)
    out: dict = {}
    for w, c in u_dual.terms.items():
        for f, p in rec.forest(w).items():
            _acc(out, f, p * c)
    return out


def evaluate_cosubstitution(terms: Mapping[Forest, Poly], ctx: Context, alpha) -> Series:
    return Series._raw(ctx, {f: p.evaluate(alpha) for f, p in terms.items()})


def universal_apply(ctx: Context, u: Series) -> Series:
    """U★u with polynomial coefficients, by direct substitution of U(c)."""
    K = UniversalCoefficients(ctx)
    images = {c: K.universal_image(c) for c in ctx.colors}
    tree_memo: dict = {}
    forest_memo: dict = {EMPTY: ctx.one()}

    def on_forest(f):
        hit = forest_memo.get(f)
        if hit is None:
            hit = conc_mul(on_forest(f[:-1]), on_tree(f[-1]))
            forest_memo[f] = hit
        return hit

    def on_tree(t):
        hit = tree_memo.get(t)
        if hit is None:
            hit = graft(on_forest(t.children), images[t.root])
            tree_memo[t] = hit
        return hit

    out = ctx.zero()
    for f, c in u.terms.items():
        out = out + on_forest(f) * c
    return Series._raw(
        ctx, {f: c if isinstance(c, Poly) else Poly.const(c) for f, c in out.terms.items()}
    )


# ---------------------------------------------------------------------------
# one generator: coefficients in the shuffle algebra T°


def to_shuffle_algebra(ctx: Context, p: Poly) -> Series:
    """Image of a K-polynomial in T°, sending a_•(l) to the Euler dual of l."""
    if len(ctx.colors) != 1:
        raise PreconditionError("the shuffle-algebra picture needs a single color")
    by_var = {
        variable(ctx, ctx.colors[0], l): euler_dual(ctx, l)
        for n in range(1, ctx.order + 1)
        for l in lie_basis_elements(ctx, n)
    }
    out = ctx.zero()
    for m, c in p.terms.items():
        term = ctx.one()
        for v, e in m:
            for _ in range(e):
                term = shuffle_mul(term, by_var[v])
        out = out + term * c
    return out


class _ShuffleCoeff:
    """Wrapper so T° elements multiply by shuffle inside the generic recursion."""

    __slots__ = ("s",)

    def __init__(self, s: Series):
        self.s = s

    def __mul__(self, other):
        if isinstance(other, _ShuffleCoeff):
            return _ShuffleCoeff(shuffle_mul(self.s, other.s))
        return _ShuffleCoeff(self.s * other)

    __rmul__ = __mul__

    def __add__(self, other):
        return _ShuffleCoeff(self.s + other.s)

    def __eq__(self, other):
        if isinstance(other, _ShuffleCoeff):
            return self.s == other.s
        if other == 0:
            return not self.s
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r


_one_gen: dict = {}


def cosubstitution_one_generator(ctx: Context, omega: Forest) -> dict[Forest, Series]:
    """Δ★(ω) for one color with the E-leg in the shuffle algebra T°.

    Same recursion as :func:`universal_substitution_forest`, but the
    coefficient products are shuffles and U^t(ω) is the Euler projection π(ω).
    """
    if len(ctx.colors) != 1:
        raise PreconditionError("one-generator co-substitution needs a single color")
    _require_grade(ctx, omega)
    rec = _one_gen.get(ctx)
    if rec is None:
        color = ctx.colors[0]

        def ut(w: Forest) -> dict:
            pi = euler_transpose(ctx.basis(w))
            return {color: _ShuffleCoeff(pi)} if pi else {}

        rec = _one_gen.setdefault(ctx, _Recursion(ctx, _ShuffleCoeff(ctx.one()), ut))
    return {f: c.s for f, c in rec.forest(omega).items()}
