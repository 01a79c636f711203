from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given

from lbk.algebra import conc_mul, deconcat, gl_mul, graft, shuffle_mul, unshuffle
from lbk.flows import sharp
from lbk.grammar import parse_forest
from lbk.hopf import (
    Character,
    char_from_lie,
    coproduct_gl,
    coproduct_graft,
    euler_dual,
    euler_idempotent,
    euler_matrix,
    euler_rank,
    euler_transpose,
    eulerian_component,
    exp_conc,
    exp_gl,
    exp_shuffle,
    is_lyndon,
    lie_basis,
    lie_basis_elements,
    lie_coordinates,
    lie_dimensions,
    lie_from_char,
    lie_multisets,
    log_conc,
    log_gl,
    pbw_counts,
    pbw_iso,
    pbw_rank,
)
from lbk.series import Context, PreconditionError, pair, pair_tensor
from lbk.trees import enumerate_forests

from strategies import primitives, series

CTX = Context(("a",), 4)
P = CTX.parse


def F(text):
    return parse_forest(text)


# Euler idempotent


def test_euler_on_trees_is_identity():
    for n in range(1, 5):
        for t in CTX.trees(n):
            assert euler_idempotent(CTX.basis((t,))) == CTX.basis((t,))


def test_euler_examples():
    assert euler_idempotent(P("a[] a[]")) == CTX.zero()
    assert euler_idempotent(P("a[] a[a[]]")) == P("1/2*a[] a[a[]] - 1/2*a[a[]] a[]")


@pytest.mark.parametrize("n", range(1, 6))
def test_euler_is_idempotent(n):
    ctx = Context(("a",), n)
    e = euler_matrix(ctx, n)
    assert e.compose(e) == e


def test_euler_image_is_primitive():
    ctx = Context(("a",), 5)
    for w in ctx.all_forests():
        if w:
            img = euler_idempotent(ctx.basis(w))
            expected = {(f, ()): c for f, c in img.terms.items()}
            for f, c in img.terms.items():
                expected[((), f)] = expected.get(((), f), 0) + c
            assert unshuffle(img) == expected


def test_eulerian_components():
    t = P("a[a[]]")
    assert eulerian_component(t, 1) == t
    assert eulerian_component(P("a[] a[]"), 2) == P("a[] a[]")


@given(series(Context(("a",), 5)))
def test_eulerian_components_sum_to_identity(w):
    total = w.ctx.zero()
    for p in range(w.ctx.order + 1):
        total = total + eulerian_component(w, p)
    assert total == w


# exp / log


def test_exp_log_basics():
    assert exp_conc(CTX.zero()) == CTX.one()
    assert log_conc(CTX.one()) == CTX.zero()
    assert exp_gl(CTX.zero()) == CTX.one()


def test_exp_gl_order_two():
    ctx = Context(("a",), 2)
    assert exp_gl(ctx.leaf()) == ctx.parse("1 + a[] + 1/2*a[] a[] + 1/2*a[a[]]")


def test_log_exp_order_six():
    ctx = Context(("a",), 6)
    x = ctx.parse("a[] + a[a[]]")
    assert log_conc(exp_conc(x)) == x
    assert log_gl(exp_gl(ctx.leaf())) == ctx.leaf()


def test_exp_is_grouplike():
    g = exp_conc(CTX.leaf())
    expected = {}
    for f, c in g.terms.items():
        for h, d in g.terms.items():
            if len(f) + len(h) <= 4:
                expected[(f, h)] = c * d
    assert unshuffle(g) == expected


def test_exp_precondition():
    with pytest.raises(PreconditionError):
        exp_conc(P("1 + a[]"))
    with pytest.raises(PreconditionError):
        log_conc(P("2 + a[]"))


def test_exp_shuffle_of_leaf():
    # exp_sh(a) = sum_k k!/k! a^k = sum_k a...a
    assert exp_shuffle(CTX.leaf()) == P("1 + a[] + a[] a[] + a[] a[] a[] + a[] a[] a[] a[]")


@given(primitives(Context(("a",), 5)))
def test_log_exp_round_trip(x):
    assert log_conc(exp_conc(x)) == x
    assert log_gl(exp_gl(x)) == x


# Lie basis


def test_lie_basis_small_grades():
    assert lie_basis(CTX, 1) == [P("a[]")]
    assert lie_basis(CTX, 2) == [P("a[a[]]")]
    g3 = {str(l.series(CTX)) for l in lie_basis_elements(CTX, 3)}
    assert len(g3) == 3
    labels = {l.label for l in lie_basis_elements(CTX, 3)}
    assert labels == {"[a[],a[a[]]]", "a[a[] a[]]", "a[a[a[]]]"}


def test_lie_dimensions_match_euler_rank():
    ctx = Context(("a",), 5)
    dims = lie_dimensions(ctx)
    assert dims == [1, 1, 3, 8, 25]
    assert [euler_rank(ctx, n) for n in range(1, 6)] == dims


def test_lyndon():
    a, b = F("a[]")[0], F("a[a[]]")[0]
    assert is_lyndon((a, b))
    assert not is_lyndon((b, a))
    assert not is_lyndon((a, a))


def test_lie_coordinates():
    ctx = Context(("a",), 4)
    x = lie_basis(ctx, 3)[0] * 3 + lie_basis(ctx, 1)[0] * Fraction(1, 2)
    coords = lie_coordinates(x)
    assert coords == {(3, 0): 3, (1, 0): Fraction(1, 2)}
    with pytest.raises(PreconditionError):
        lie_coordinates(P("a[] a[]"))


@given(primitives(Context(("a", "b"), 4)))
def test_lie_coordinates_reconstruct(x):
    out = x.ctx.zero()
    for (n, i), c in lie_coordinates(x).items():
        out = out + lie_basis(x.ctx, n)[i] * c
    assert out == x


# PBW


def test_generating_function_identity_order_six():
    ctx = Context(("a",), 6)
    dims = [euler_rank(ctx, n) for n in range(1, 7)]
    assert pbw_counts(dims, 6) == [len(enumerate_forests(("a",), n)) for n in range(7)]


def test_pbw_singleton_is_euler_dual():
    for l in lie_basis_elements(CTX, 3):
        assert pbw_iso(CTX, [l]) == euler_dual(CTX, l)


def test_pbw_rank_grade_three():
    assert pbw_rank(CTX, 3) == 5


@pytest.mark.parametrize("n", range(1, 6))
def test_pbw_full_rank(n):
    ctx = Context(("a",), n)
    assert pbw_rank(ctx, n) == len(ctx.forests(n))


def test_pbw_is_multiplicative():
    ctx = Context(("a",), 5)
    ms = [m for n in range(1, 3) for m in lie_multisets(ctx, n)]
    for m1 in ms:
        for m2 in ms:
            assert shuffle_mul(pbw_iso(ctx, m1), pbw_iso(ctx, m2)) == pbw_iso(ctx, m1 + m2)


# dual coproducts


def test_gl_coproduct_examples():
    assert coproduct_gl(P("a[]")) == {(F("a[]"), ()): 1, ((), F("a[]")): 1}
    assert coproduct_gl(P("a[a[]]"))[(F("a[]"), F("a[]"))] == 1


def test_graft_coproduct_examples():
    assert coproduct_graft(P("a[]")) == {((), F("a[]")): 1}
    assert coproduct_graft(P("a[a[]]"))[(F("a[]"), F("a[]"))] == 1


@pytest.mark.parametrize("co,mul", [(coproduct_gl, gl_mul), (coproduct_graft, graft)], ids=["gl", "graft"])
def test_dual_coproducts(co, mul):
    ctx = Context(("a",), 4)
    for n in range(5):
        for w in ctx.forests(n):
            dw = co(ctx.basis(w))
            for p in range(n + 1):
                for u in ctx.forests(p):
                    for v in ctx.forests(n - p):
                        U, V = ctx.basis(u), ctx.basis(v)
                        assert pair_tensor(dw, U, V) == pair(ctx.basis(w), mul(U, V))


# characters


def test_character_of_leaf():
    chi = char_from_lie(CTX.leaf())
    for n in range(5):
        for w in CTX.forests(n):
            leaves = all(t.grade == 1 for t in w)
            assert chi(w) == (Fraction(1, factorial(len(w))) if leaves else 0)
    assert chi.is_multiplicative()


def test_zero_gives_counit():
    chi = char_from_lie(CTX.zero())
    assert chi.values == CTX.one()


def test_char_convolution_is_bch():
    ctx = Context(("a", "b"), 4)
    a, b = ctx.leaf("a"), ctx.parse("b[] + 1/2*a[b[]]")
    conv = char_from_lie(a).convolve(char_from_lie(b), deconcat)
    assert conv.values == conc_mul(exp_conc(a), exp_conc(b))


def test_char_convolution_is_sharp():
    ctx = Context(("a",), 4)
    x, y = ctx.parse("a[] + a[a[]]"), ctx.parse("-1/2*a[]")
    conv = char_from_lie(x).convolve(char_from_lie(y), coproduct_gl)
    assert conv == char_from_lie(sharp(x, y))


@given(primitives(Context(("a",), 5)))
def test_character_round_trip(ell):
    chi = char_from_lie(ell)
    assert lie_from_char(chi) == ell


def test_non_character_rejected():
    with pytest.raises(PreconditionError):
        lie_from_char(Character(P("1 + a[] a[]")))


def test_euler_transpose_kills_products():
    assert euler_transpose(P("a[] a[]")) == CTX.zero()
