from fractions import Fraction

import pytest
from hypothesis import given

from lbk.algebra import gl_mul, graft
from lbk.flows import field_to_flow, sharp
from lbk.grammar import parse_polynomial, parse_tree
from lbk.hopf import exp_gl
from lbk.poly import H, Poly, Y
from lbk.prelie import (
    PolynomialVectorField,
    PreLieSeries,
    elementary_differential,
    elementary_differential_eval,
    exact_flow_taylor,
    h_coefficients,
    pre_lie_sharp,
    prelie_gl,
    prelie_graft,
    prelie_substitute,
    project_abelian,
)
from lbk.series import Context, PreconditionError
from lbk.subst import random_endomorphism
from lbk.trees import abelianize

from strategies import primitives, seeds, series

CTX = Context(("a",), 4)
P = CTX.parse
y = Poly.var(Y)


def field(text):
    return PolynomialVectorField.parse(text)


def test_projection_of_mirror_trees():
    u = P("a[a[] a[a[]]] - a[a[a[]] a[]]")
    assert project_abelian(u).terms == {}


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 4), (4, 9)])
def test_projected_dimensions(n, count):
    images = set()
    for f in CTX.forests(n):
        images.update(project_abelian(CTX.basis(f)).terms)
    assert len(images) == count


def _pairs(ctx):
    for p in range(ctx.order + 1):
        for q in range(ctx.order + 1 - p):
            for u in ctx.forests(p):
                for v in ctx.forests(q):
                    yield ctx.basis(u), ctx.basis(v)


def test_projection_intertwines_graft_and_gl():
    for u, v in _pairs(CTX):
        assert project_abelian(graft(u, v)) == prelie_graft(project_abelian(u), project_abelian(v))
        assert project_abelian(gl_mul(u, v)) == prelie_gl(project_abelian(u), project_abelian(v))


def test_prelie_sharp():
    z = project_abelian(CTX.zero())
    x = project_abelian(P("a[] + 1/2*a[a[]]"))
    assert pre_lie_sharp(z, x) == x
    a = CTX.leaf()
    assert project_abelian(sharp(a, a)) == pre_lie_sharp(project_abelian(a), project_abelian(a))


def test_prelie_sharp_needs_trees():
    with pytest.raises(PreconditionError):
        pre_lie_sharp(project_abelian(P("a[] a[]")), project_abelian(P("a[]")))


@given(primitives(CTX), primitives(CTX))
def test_projection_intertwines_sharp(x, y_):
    assert project_abelian(sharp(x, y_)) == pre_lie_sharp(project_abelian(x), project_abelian(y_))


@given(seeds(), series(CTX))
def test_substitution_commutes_with_projection(rng, u):
    a = random_endomorphism(CTX, rng)
    images = {c: project_abelian(img) for c, img in a.images.items()}
    assert project_abelian(a(u)) == prelie_substitute(images, project_abelian(u))


def test_abelianized_phi_spot_values():
    ctx = Context(("a",), 3)
    phi = project_abelian(field_to_flow(ctx.leaf()))
    chain2 = (abelianize(parse_tree("a[a[]]")),)
    chain3 = (abelianize(parse_tree("a[a[a[]]]")),)
    cherry = (abelianize(parse_tree("a[a[] a[]]")),)
    assert phi[chain2] == Fraction(1, 2)
    assert phi[chain3] == Fraction(1, 6)
    assert phi[cherry] == Fraction(1, 6)
    assert field_to_flow(ctx.leaf())[(parse_tree("a[a[] a[]]"),)] == Fraction(1, 6)


# scalar ODE oracle


def test_leaf_first_order_term():
    p = elementary_differential_eval(P("a[]"), field("y^2"))
    assert p == y * y * Poly.var(H)


def test_elementary_differentials():
    f = field("y^2")
    assert elementary_differential(parse_tree("a[a[]]"), f) == y**3 * 2
    assert elementary_differential(parse_tree("a[a[] a[]]"), f) == y**4 * 2


def test_exp_gl_of_leaf_for_quadratic_field():
    ctx = Context(("a",), 6)
    p = elementary_differential_eval(exp_gl(ctx.leaf()), field("y^2"))
    expected = Poly()
    for n in range(7):
        expected = expected + Poly.var(H) ** n * y ** (n + 1)
    assert p == expected


@pytest.mark.parametrize("text", ["y^3 - 2*y + 1", "1/2*y^2 + y", "y^4"])
def test_third_order_taylor(text):
    ctx = Context(("a",), 3)
    f = field(text)
    f0, f1, f2 = f.f, f.derivative(1), f.derivative(2)
    h = Poly.var(H)
    expected = (
        y + h * f0 + h**2 * f1 * f0 * Fraction(1, 2)
        + h**3 * (f2 * f0 * f0 + f1 * f1 * f0) * Fraction(1, 6)
    )
    assert elementary_differential_eval(exp_gl(ctx.leaf()), f) == expected


def test_exact_flow_examples():
    assert exact_flow_taylor(field("y^2"), 4) == [y, y**2, y**3, y**4, y**5]
    assert exact_flow_taylor(field("1"), 3) == [y, Poly.const(1), Poly(), Poly()]
    assert exact_flow_taylor(field("y"), 3) == [y, y, y * Fraction(1, 2), y * Fraction(1, 6)]
    with pytest.raises(PreconditionError):
        exact_flow_taylor(field("y"), 0)


@pytest.mark.parametrize("text", ["y^2", "y", "1", "y^2 + 1"])
def test_flow_matches_exact_solution(text):
    ctx = Context(("a",), 6)
    f = field(text)
    got = h_coefficients(elementary_differential_eval(exp_gl(ctx.leaf()), f), 6)
    assert got == exact_flow_taylor(f, 6)


def test_prelie_series_evaluate_like_planar():
    ctx = Context(("a",), 5)
    u = exp_gl(ctx.leaf())
    f = field("y^3 + y")
    assert elementary_differential_eval(project_abelian(u), f) == elementary_differential_eval(u, f)


def test_vector_field_validation():
    with pytest.raises(ValueError):
        PolynomialVectorField(parse_polynomial("y*h", {"y": Y, "h": H}))
    with pytest.raises(ValueError):
        PolynomialVectorField(y**3, max_degree=2)


def test_prelie_series_formatting():
    s = project_abelian(P("1/2*a[a[] a[a[]]] + 1/2*a[a[a[]] a[]] - a[]"))
    assert str(s) == "-a[] + a[a[] a[a[]]]"
    assert isinstance(s, PreLieSeries)
