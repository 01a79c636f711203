"""Fields-to-flows map, BCH products, the composition product ♯ and backward error."""
from __future__ import annotations

import os
from typing import NewType

from .algebra import conc_mul, gl_mul, graft, require_primitive
from .hopf import exp_conc, exp_gl, log_conc, log_gl
from .series import PreconditionError, Series

FieldElement = NewType("FieldElement", Series)
FlowElement = NewType("FlowElement", Series)


class RouteDisagreement(AssertionError):
    """The two routes for ♯ disagree; this signals a bug in the algebra."""


def check_both_routes() -> bool:
    """Debug profile (the default) cross-checks ♯; ``LBK_PROFILE=release`` skips it."""
    return os.environ.get("LBK_PROFILE", "debug").lower() != "release"


def _primitive(x: Series, name: str) -> None:
    if x.constant() != 0:
        raise PreconditionError(f"{name} has a nonzero constant term")
    require_primitive(x, name)


def field_to_flow(x: Series) -> Series:
    """Φ = log• ∘ exp*."""
    _primitive(x, "field")
    return log_conc(exp_gl(x))


def backward_error(b: Series) -> Series:
    """Inverse of Φ: log* ∘ exp•."""
    _primitive(b, "flow")
    return log_gl(exp_conc(b))


def bch_conc(x: Series, y: Series) -> Series:
    """x +• y = log•(exp• x • exp• y)."""
    x._check(y)
    _primitive(x, "x")
    _primitive(y, "y")
    return log_conc(conc_mul(exp_conc(x), exp_conc(y)))


def bch_gl(x: Series, y: Series) -> Series:
    """x +* y = log*(exp* x * exp* y), the BCH product for ⟦,⟧."""
    x._check(y)
    _primitive(x, "x")
    _primitive(y, "y")
    return log_gl(gl_mul(exp_gl(x), exp_gl(y)))


def sharp_by_definition(x: Series, y: Series) -> Series:
    """log•(exp•(x) * exp•(y))."""
    x._check(y)
    _primitive(x, "x")
    _primitive(y, "y")
    return log_conc(gl_mul(exp_conc(x), exp_conc(y)))


def sharp_by_translation(x: Series, y: Series) -> Series:
    """x +• (exp•(x) ▷ y)."""
    x._check(y)
    _primitive(x, "x")
    _primitive(y, "y")
    return bch_conc(x, graft(exp_conc(x), y))


def sharp(x: Series, y: Series) -> Series:
    """Composition product of principal flows."""
    fast = sharp_by_translation(x, y)
    if check_both_routes():
        slow = sharp_by_definition(x, y)
        if slow != fast:
            raise RouteDisagreement(
                f"x ♯ y routes disagree: definition {slow} vs translation {fast}"
            )
    return fast


def sharp_inverse(x: Series) -> Series:
    """Inverse for ♯: log• of the *-inverse exp*(-log*(exp• x))."""
    _primitive(x, "x")
    return log_conc(exp_gl(-log_gl(exp_conc(x))))


def bch_inverse(x: Series) -> Series:
    _primitive(x, "x")
    return -x
