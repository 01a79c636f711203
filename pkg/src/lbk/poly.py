"""Sparse multivariate polynomials over the rationals.

Used as the coefficient ring K of the universal substitution (variables
``a_c(l)``) and for the scalar ODE oracle (variables ``y`` and ``h``).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, NamedTuple


class Var(NamedTuple):
    """A polynomial variable; ``key`` fixes the print and sort order."""

    key: tuple
    name: str

    def __str__(self) -> str:
        return self.name


Monomial = tuple  # tuple[tuple[Var, int], ...], sorted by variable


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for v, e in m2:
        powers[v] = powers.get(v, 0) + e
    return tuple(sorted(powers.items()))


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, v: Var) -> Poly:
        return cls({((v, 1),): 1})

    @staticmethod
    def _lift(other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def coefficient(self, monomial: Monomial = ()) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def evaluate(self, values: Mapping[Var, object]):
        """Substitute every variable; values may be rationals or polynomials."""
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                term = term * values[v] ** e
            total = total + term
        return total

    def substitute(self, values: Mapping[Var, object]) -> Poly:
        """Substitute some variables, leaving the others symbolic."""
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                term = term * (values[v] ** e if v in values else Poly({((v, e),): 1}))
            out = out + term
        return out

    def diff(self, v: Var) -> Poly:
        out: dict = {}
        for m, c in self.terms.items():
            powers = dict(m)
            e = powers.get(v, 0)
            if e == 0:
                continue
            if e == 1:
                del powers[v]
            else:
                powers[v] = e - 1
            mm = tuple(sorted(powers.items()))
            out[mm] = out.get(mm, 0) + c * e
        return Poly(out)

    def _sorted_terms(self):
        def key(item):
            m, _ = item
            return (-sum(e for _, e in m), tuple((v.key, -e) for v, e in m))

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self._sorted_terms()):
            mono = "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in m)
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


Y = Var((0, "y"), "y")
H = Var((1, "h"), "h")
