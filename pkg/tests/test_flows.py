import pytest
from hypothesis import given

from lbk.algebra import graft, is_primitive
from lbk.flows import (
    RouteDisagreement,
    backward_error,
    bch_conc,
    bch_gl,
    bch_inverse,
    field_to_flow,
    sharp,
    sharp_by_definition,
    sharp_by_translation,
    sharp_inverse,
)
from lbk.prelie import project_abelian
from lbk.series import Context, PreconditionError

from strategies import primitives

CTX = Context(("a",), 4)


def test_phi_examples():
    assert field_to_flow(CTX.zero()) == CTX.zero()
    ctx = Context(("a",), 2)
    assert field_to_flow(ctx.leaf()) == ctx.parse("a[] + 1/2*a[a[]]")


def test_phi_order_three():
    ctx = Context(("a",), 3)
    assert field_to_flow(ctx.leaf()) == ctx.parse(
        "a[] + 1/2*a[a[]] + 1/12*a[] a[a[]] - 1/12*a[a[]] a[]"
        " + 1/6*a[a[] a[]] + 1/6*a[a[a[]]]"
    )


def test_backward_error_example():
    ctx = Context(("a",), 2)
    assert backward_error(ctx.leaf()) == ctx.parse("a[] - 1/2*a[a[]]")


@given(primitives(Context(("a",), 5)))
def test_phi_is_primitive_and_invertible(x):
    y = field_to_flow(x)
    assert is_primitive(y)
    assert backward_error(y) == x
    assert field_to_flow(backward_error(x)) == x


def test_bch_examples():
    ctx = Context(("a", "b"), 2)
    a, b = ctx.leaf("a"), ctx.leaf("b")
    assert bch_conc(a, ctx.zero()) == a
    assert bch_conc(a, b) == ctx.parse("a[] + b[] + 1/2*a[] b[] - 1/2*b[] a[]")


def test_bch_third_order():
    ctx = Context(("a", "b"), 3)
    z = bch_conc(ctx.leaf("a"), ctx.leaf("b"))
    # 1/12 [a,[a,b]] + 1/12 [b,[b,a]]
    expected = ctx.parse(
        "a[] + b[] + 1/2*a[] b[] - 1/2*b[] a[]"
        " + 1/12*a[] a[] b[] - 1/6*a[] b[] a[] + 1/12*b[] a[] a[]"
        " + 1/12*b[] b[] a[] - 1/6*b[] a[] b[] + 1/12*a[] b[] b[]"
    )
    assert z == expected


def test_sharp_units():
    x = CTX.parse("a[] + 1/2*a[a[]]")
    assert sharp(CTX.zero(), x) == x
    assert sharp(x, CTX.zero()) == x


def test_sharp_leaf_leaf_order_three():
    ctx = Context(("a",), 3)
    a = ctx.leaf()
    result = sharp(a, a)
    assert result == ctx.parse(
        "2*a[] + a[a[]] + 1/2*a[] a[a[]] - 1/2*a[a[]] a[] + 1/2*a[a[] a[]]"
    )
    # non-planar shadow: the bracket term disappears
    assert project_abelian(result) == project_abelian(
        ctx.parse("2*a[] + a[a[]] + 1/2*a[a[] a[]]")
    )


def test_sharp_is_flow_composition():
    ctx = Context(("a",), 5)
    a = ctx.leaf()
    assert sharp(field_to_flow(a), field_to_flow(a)) == field_to_flow(a * 2)


def test_sharp_route_check(monkeypatch):
    import lbk.flows as flows

    monkeypatch.setattr(flows, "sharp_by_definition", lambda x, y: x)
    with pytest.raises(RouteDisagreement):
        flows.sharp(CTX.leaf(), CTX.leaf())
    monkeypatch.setenv("LBK_PROFILE", "release")
    assert flows.sharp(CTX.leaf(), CTX.zero()) == CTX.leaf()


def test_precondition_non_primitive():
    with pytest.raises(PreconditionError):
        sharp(CTX.parse("a[] a[]"), CTX.leaf())
    with pytest.raises(PreconditionError):
        field_to_flow(CTX.parse("1 + a[]"))


@given(primitives(Context(("a",), 5)), primitives(Context(("a",), 5)))
def test_two_routes_agree(x, y):
    assert sharp_by_definition(x, y) == sharp_by_translation(x, y)


@given(primitives(CTX), primitives(CTX), primitives(CTX))
def test_sharp_is_a_group_law(x, y, z):
    assert sharp(sharp(x, y), z) == sharp(x, sharp(y, z))
    inv = sharp_inverse(x)
    assert sharp(x, inv) == CTX.zero()
    assert sharp(inv, x) == CTX.zero()


@given(primitives(CTX), primitives(CTX), primitives(CTX))
def test_bch_is_a_group_law(x, y, z):
    assert bch_conc(bch_conc(x, y), z) == bch_conc(x, bch_conc(y, z))
    assert bch_conc(x, bch_inverse(x)) == CTX.zero()


@given(primitives(CTX), primitives(CTX))
def test_sharp_matches_gl_bch_under_phi(x, y):
    # Φ turns the BCH law of * into ♯
    assert sharp(field_to_flow(x), field_to_flow(y)) == field_to_flow(bch_gl(x, y))


@given(primitives(CTX), primitives(CTX))
def test_sharp_translation_formula(x, y):
    from lbk.hopf import exp_conc

    assert sharp(x, y) == bch_conc(x, graft(exp_conc(x), y))
