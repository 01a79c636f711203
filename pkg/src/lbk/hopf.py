"""Convolution machinery on the (concatenation, unshuffle) Hopf algebra.

Covers the Eulerian idempotent and its convolution powers, exp/log for the
concatenation and Grossman–Larson products, a Lyndon basis of the free Lie
algebra on planar trees, the PBW map on the dual side, the transposed
coproducts Δ_* and Δ_▷, and characters.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Iterable, Sequence

from .algebra import (
    bracket_conc,
    conc_mul,
    gl_basis,
    gl_mul,
    graft_basis,
    is_primitive,
    shuffle_mul,
)
from .series import Context, GradedLinearMap, PreconditionError, Series, rank
from .trees import EMPTY, Forest, forest_grade, forest_str, tree_key

# ---------------------------------------------------------------------------
# Eulerian idempotent


def _subsets(n: int):
    idx = range(n)
    for k in range(1, n + 1):
        for s in combinations(idx, k):
            ss = set(s)
            yield s, tuple(i for i in idx if i not in ss)


@lru_cache(maxsize=None)
def _conv_powers(w: Forest) -> tuple[dict, ...]:
    """``J^{⋆k}(w)`` for k = 0..len(w), J the augmentation projection.

    The k-th power is a sum over ordered partitions of the letter positions
    into k non-empty blocks, each block read as a subword, concatenated.
    """
    n = len(w)
    if n == 0:
        return ({EMPTY: 1},)
    powers: list[dict] = [{} for _ in range(n + 1)]
    for s, rest in _subsets(n):
        head = tuple(w[i] for i in s)
        tail = tuple(w[i] for i in rest)
        sub = _conv_powers(tail)
        for k in range(1, n + 1):
            if k - 1 >= len(sub):
                break
            for f, c in sub[k - 1].items():
                key = head + f
                powers[k][key] = powers[k].get(key, 0) + c
    return tuple(powers)


@lru_cache(maxsize=None)
def euler_basis(w: Forest) -> dict:
    """e(w) = sum_k (-1)^{k+1}/k J^{⋆k}(w) on a single forest."""
    out: dict = {}
    powers = _conv_powers(w)
    for k in range(1, len(powers)):
        sign = Fraction(1 if k % 2 else -1, k)
        for f, c in powers[k].items():
            out[f] = out.get(f, 0) + sign * c
    return {f: c for f, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def _euler_component_basis(w: Forest, p: int) -> dict:
    """(e^{⋆p})(w), without the 1/p! normalization."""
    if p == 0:
        return {EMPTY: Fraction(1)} if not w else {}
    out: dict = {}
    for s, rest in _subsets(len(w)):
        head = euler_basis(tuple(w[i] for i in s))
        if not head:
            continue
        tail = _euler_component_basis(tuple(w[i] for i in rest), p - 1)
        for f, c in head.items():
            for g, d in tail.items():
                out[f + g] = out.get(f + g, 0) + c * d
    return {f: c for f, c in out.items() if c != 0}


def _apply_linear(w: Series, fn: Callable[[Forest], dict]) -> Series:
    out: dict = {}
    for f, c in w.terms.items():
        for g, d in fn(f).items():
            out[g] = out.get(g, 0) + c * d
    return Series._raw(w.ctx, out)


def euler_idempotent(w: Series) -> Series:
    return _apply_linear(w, euler_basis)


def eulerian_component(w: Series, p: int) -> Series:
    """``e^{⋆p}/p!`` applied to ``w``."""
    if p < 0 or p > w.ctx.order:
        raise PreconditionError(f"component index {p} outside 0..{w.ctx.order}")
    scale = Fraction(1, factorial(p))
    return _apply_linear(
        w, lambda f: {g: c * scale for g, c in _euler_component_basis(f, p).items()}
    )


def euler_matrix(ctx: Context, grade: int) -> GradedLinearMap:
    entries = {}
    for f in ctx.forests(grade):
        for g, c in euler_basis(f).items():
            entries[(g, f)] = c
    return GradedLinearMap(grade, grade, entries)


def euler_transpose(w: Series) -> Series:
    """Transpose of e: <e(u), w> = <u, e^T(w)>."""
    ctx = w.ctx
    out: dict = {}
    grades = {forest_grade(f) for f in w.terms}
    for n in grades:
        for f in ctx.forests(n):
            val = 0
            for g, c in euler_basis(f).items():
                d = w.terms.get(g)
                if d is not None:
                    val = val + c * d
            if val != 0:
                out[f] = val
    return Series._raw(ctx, out)


# ---------------------------------------------------------------------------
# exp / log


def _exp(x: Series, mul: Callable[[Series, Series], Series]) -> Series:
    if x.constant() != 0:
        raise PreconditionError("exp needs a series without constant term")
    ctx = x.ctx
    result = ctx.one()
    power = ctx.one()
    for k in range(1, ctx.order + 1):
        power = mul(power, x) * Fraction(1, k)
        if not power:
            break
        result = result + power
    return result


def _log(s: Series, mul: Callable[[Series, Series], Series]) -> Series:
    if s.constant() != 1:
        raise PreconditionError("log needs a series with constant term 1")
    ctx = s.ctx
    y = s - ctx.one()
    result = ctx.zero()
    power = ctx.one()
    for k in range(1, ctx.order + 1):
        power = mul(power, y)
        if not power:
            break
        result = result + power * Fraction(1 if k % 2 else -1, k)
    return result


def exp_conc(x: Series) -> Series:
    return _exp(x, conc_mul)


def log_conc(s: Series) -> Series:
    return _log(s, conc_mul)


def exp_gl(x: Series) -> Series:
    return _exp(x, gl_mul)


def log_gl(s: Series) -> Series:
    return _log(s, gl_mul)


def exp_shuffle(x: Series) -> Series:
    return _exp(x, shuffle_mul)


# ---------------------------------------------------------------------------
# Lyndon basis over the tree alphabet


def _letter_key(t):
    return tree_key(t)


def _word_key(w: Forest) -> tuple:
    return tuple(_letter_key(t) for t in w)


def is_lyndon(w: Forest) -> bool:
    if not w:
        return False
    k = _word_key(w)
    return all(k < k[i:] for i in range(1, len(k)))


def standard_factorization(w: Forest) -> tuple[Forest, Forest]:
    """w = u v with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("letters have no standard factorization")


@dataclass(frozen=True)
class LieElement:
    """A basis element of the free Lie algebra: Lyndon word plus its bracketing."""

    word: Forest
    grade: int
    index: int
    label: str
    expansion: tuple  # sorted ((forest, coefficient), ...)

    def series(self, ctx: Context) -> Series:
        return Series._raw(ctx, dict(self.expansion))


def _bracket_label(w: Forest) -> str:
    if len(w) == 1:
        return forest_str(w)
    u, v = standard_factorization(w)
    return f"[{_bracket_label(u)},{_bracket_label(v)}]"


@lru_cache(maxsize=None)
def _bracket_expansion(w: Forest) -> dict:
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    pu, pv = _bracket_expansion(u), _bracket_expansion(v)
    out: dict = {}
    for f, c in pu.items():
        for g, d in pv.items():
            out[f + g] = out.get(f + g, 0) + c * d
            out[g + f] = out.get(g + f, 0) - c * d
    return {f: c for f, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def _lie_basis(colors: tuple[str, ...], grade: int) -> tuple[LieElement, ...]:
    from .trees import enumerate_forests

    words = [w for w in enumerate_forests(colors, grade) if is_lyndon(w)]
    words.sort(key=_word_key)
    return tuple(
        LieElement(
            w,
            grade,
            i,
            _bracket_label(w),
            tuple(sorted(_bracket_expansion(w).items(), key=lambda fc: _word_key(fc[0]))),
        )
        for i, w in enumerate(words)
    )


def lie_basis_elements(ctx: Context, grade: int) -> tuple[LieElement, ...]:
    if grade < 1 or grade > ctx.order:
        raise PreconditionError(f"grade {grade} outside 1..{ctx.order}")
    return _lie_basis(ctx.colors, grade)


def lie_basis(ctx: Context, grade: int) -> list[Series]:
    """Lyndon-bracket basis of the free Lie algebra in the given grade."""
    return [l.series(ctx) for l in lie_basis_elements(ctx, grade)]


def lie_coordinates(x: Series) -> dict[tuple[int, int], Fraction]:
    """Coordinates of a Lie element on the Lyndon basis, keyed by (grade, index).

    Uses triangularity: the bracketing of a Lyndon word w is w plus
    lexicographically larger words.
    """
    ctx = x.ctx
    out: dict = {}
    grades = sorted({forest_grade(f) for f in x.terms})
    for n in grades:
        if n == 0:
            raise PreconditionError("Lie elements have no constant term")
        residual = {f: c for f, c in x.terms.items() if forest_grade(f) == n}
        for l in _lie_basis(ctx.colors, n):
            c = residual.get(l.word, 0)
            if c == 0:
                continue
            out[(n, l.index)] = c
            for f, d in l.expansion:
                v = residual.get(f, 0) - c * d
                if v == 0:
                    residual.pop(f, None)
                else:
                    residual[f] = v
        if residual:
            raise PreconditionError("series is not in the free Lie algebra")
    return out


def lie_dimensions(ctx: Context, max_grade: int | None = None) -> list[int]:
    top = ctx.order if max_grade is None else max_grade
    return [len(_lie_basis(ctx.colors, n)) for n in range(1, top + 1)]


def euler_rank(ctx: Context, grade: int) -> int:
    rows = [euler_basis(f) for f in ctx.forests(grade)]
    return rank(rows)


def pbw_counts(dims: Sequence[int], top: int) -> list[int]:
    """Coefficients of prod_k (1 - x^k)^{-d_k} up to x^top."""
    coeffs = [0] * (top + 1)
    coeffs[0] = 1
    for k, d in enumerate(dims, start=1):
        if k > top:
            break
        for _ in range(d):
            # multiply by 1/(1 - x^k)
            for n in range(k, top + 1):
                coeffs[n] += coeffs[n - k]
    return coeffs


# ---------------------------------------------------------------------------
# PBW map on the dual side


def euler_dual(ctx: Context, element: LieElement) -> Series:
    """Dual of a Lie basis element lifted to forests through the Euler map.

    The lift pairs with a forest w as the coordinate of e(w) on ``element``.
    """
    return Series._raw(ctx, dict(_euler_dual(ctx.colors, element.grade, element.index)))


@lru_cache(maxsize=None)
def _euler_dual(colors: tuple[str, ...], grade: int, index: int) -> tuple:
    ctx = Context(colors, grade)
    out = []
    for f in ctx.forests(grade):
        e = euler_basis(f)
        if not e:
            continue
        coords = lie_coordinates(Series._raw(ctx, e))
        c = coords.get((grade, index), 0)
        if c != 0:
            out.append((f, c))
    return tuple(out)


def pbw_iso(ctx: Context, multiset: Iterable[LieElement]) -> Series:
    """Shuffle product of the Euler-embedded duals of the given Lie elements."""
    out = ctx.one()
    for l in multiset:
        if l.grade > ctx.order:
            raise PreconditionError("multiset exceeds the truncation order")
        out = shuffle_mul(out, euler_dual(ctx, l))
    return out


def lie_multisets(ctx: Context, grade: int) -> list[tuple[LieElement, ...]]:
    """All multisets of Lie basis elements with total grade ``grade``."""
    elements = [l for n in range(1, grade + 1) for l in lie_basis_elements(ctx, n)]
    out: list = []

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(elements)):
            l = elements[i]
            if l.grade <= remaining:
                acc.append(l)
                rec(i, remaining - l.grade, acc)
                acc.pop()

    rec(0, grade, [])
    return out


def pbw_rank(ctx: Context, grade: int) -> int:
    return rank(pbw_iso(ctx, m).terms for m in lie_multisets(ctx, grade))


# ---------------------------------------------------------------------------
# dual coproducts as transposes of product matrices


@lru_cache(maxsize=None)
def _product_table(colors: tuple[str, ...], kind: str, grade: int) -> GradedLinearMap:
    kernel = {"gl": gl_basis, "graft": graft_basis}[kind]
    from .trees import enumerate_forests

    entries: dict = {}
    for p in range(grade + 1):
        for u in enumerate_forests(colors, p):
            for v in enumerate_forests(colors, grade - p):
                for w, c in kernel(u, v).items():
                    entries[(w, (u, v))] = Fraction(c)
    return GradedLinearMap(grade, grade, entries)


def product_matrix(ctx: Context, kind: str, grade: int) -> GradedLinearMap:
    """Matrix of a bilinear product from the tensor square, total grade ``grade``."""
    if kind == "conc":
        entries = {}
        for p in range(grade + 1):
            for u in ctx.forests(p):
                for v in ctx.forests(grade - p):
                    entries[(u + v, (u, v))] = Fraction(1)
        return GradedLinearMap(grade, grade, entries)
    if kind == "shuffle":
        from .algebra import shuffle_basis

        entries = {}
        for p in range(grade + 1):
            for u in ctx.forests(p):
                for v in ctx.forests(grade - p):
                    for w, c in shuffle_basis(u, v).items():
                        entries[(w, (u, v))] = Fraction(c)
        return GradedLinearMap(grade, grade, entries)
    return _product_table(ctx.colors, kind, grade)


def _transpose_coproduct(w: Series, kind: str) -> dict:
    ctx = w.ctx
    out: dict = {}
    grades = {forest_grade(f) for f in w.terms}
    for n in grades:
        table = product_matrix(ctx, kind, n).transpose()
        for (pair_, f), c in table.entries.items():
            d = w.terms.get(f)
            if d is not None:
                out[pair_] = out.get(pair_, 0) + c * d
    return {k: v for k, v in out.items() if v != 0}


def coproduct_gl(w: Series) -> dict:
    """Δ_*: transpose of the Grossman–Larson product."""
    return _transpose_coproduct(w, "gl")


def coproduct_graft(w: Series) -> dict:
    """Δ_▷: transpose of grafting."""
    return _transpose_coproduct(w, "graft")


@lru_cache(maxsize=None)
def graft_coproduct_basis(w: Forest, colors: tuple[str, ...]) -> tuple:
    """Δ_▷ of a single dual forest as ``((left, right), coefficient)`` pairs."""
    table = _product_table(colors, "graft", forest_grade(w))
    return tuple(
        (pair_, c) for (row, pair_), c in table.entries.items() if row == w
    )


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    """Shuffle-multiplicative functional on dual forests, stored as its values."""

    values: Series

    def __call__(self, w: Series | Forest):
        if isinstance(w, Series):
            from .series import pair

            return pair(self.values, w)
        return self.values[w]

    def is_multiplicative(self, max_grade: int | None = None) -> bool:
        ctx = self.values.ctx
        top = ctx.order if max_grade is None else max_grade
        if self.values.constant() != 1:
            return False
        for p in range(1, top + 1):
            for q in range(p, top - p + 1):
                for u in ctx.forests(p):
                    for v in ctx.forests(q):
                        prod = shuffle_mul(ctx.basis(u), ctx.basis(v))
                        if self(prod) != self.values[u] * self.values[v]:
                            return False
        return True

    def convolve(self, other: Character, coproduct: Callable[[Series], dict]) -> Character:
        """(χ ⋆ ψ)(w) = sum χ(w1) ψ(w2) over the given coproduct of w."""
        ctx = self.values.ctx
        out = {}
        for f in ctx.all_forests():
            val = 0
            for (a, b), c in coproduct(ctx.basis(f)).items():
                val = val + c * self.values[a] * other.values[b]
            if val != 0:
                out[f] = val
        return Character(Series._raw(ctx, out))


@dataclass(frozen=True)
class InfinitesimalCharacter:
    """Derivation-like functional: vanishes on the unit and on shuffle products."""

    values: Series

    def __call__(self, w: Series | Forest):
        if isinstance(w, Series):
            from .series import pair

            return pair(self.values, w)
        return self.values[w]


def char_from_lie(ell: Series) -> Character:
    """χ(w) = <exp•(ℓ), w> for a primitive ℓ."""
    if not is_primitive(ell):
        raise PreconditionError("char_from_lie needs a primitive series")
    return Character(exp_conc(ell))


def infinitesimal_from_lie(ell: Series) -> InfinitesimalCharacter:
    if not is_primitive(ell):
        raise PreconditionError("infinitesimal character needs a primitive series")
    return InfinitesimalCharacter(ell)


def lie_from_char(chi: Character) -> Series:
    if chi.values.constant() != 1:
        raise PreconditionError("character must send the empty forest to 1")
    ell = log_conc(chi.values)
    if not is_primitive(ell):
        raise PreconditionError("functional is not shuffle-multiplicative")
    return ell
