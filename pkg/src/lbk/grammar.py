"""Recursive-descent parsers for series, scalar polynomials and endomorphism files.

Series grammar::

    series   := [sign] term (("+"|"-") term)*
    term     := [rational "*"] forest | rational
    rational := integer ["/" positive-integer]
    forest   := tree+ | "1"
    tree     := color "[" tree* "]"

A bare rational is a multiple of the empty forest, and ``0`` is the zero series.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, Var, Y
from .trees import PlanarTree


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\[\]+\-*/^();]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip():
                bad = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
            break
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def error(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{message}, found {found}", self.text, t.pos)


class _SeriesParser(_Parser):
    def __init__(self, text: str, colors: tuple[str, ...]):
        super().__init__(text)
        self.colors = colors

    def series(self) -> dict:
        terms: dict = {}
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            coeff, forest = self.term()
            coeff *= sign
            terms[forest] = terms.get(forest, 0) + coeff
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        if self.tok.kind != "eof":
            self.error("expected '+', '-' or end of input")
        return terms

    def rational(self) -> Fraction:
        t = self.advance()
        num = int(t.text)
        if self.accept("/"):
            d = self.tok
            if d.kind != "int" or int(d.text) == 0:
                self.error("expected positive integer denominator")
            self.advance()
            return Fraction(num, int(d.text))
        return Fraction(num)

    def term(self) -> tuple[Fraction, tuple]:
        if self.tok.kind == "int":
            c = self.rational()
            if self.accept("*"):
                return c, self.forest()
            if self.tok.kind == "ident":
                self.error("expected '*' between coefficient and forest")
            # bare rational: a multiple of the empty forest
            return c, ()
        return Fraction(1), self.forest()

    def forest(self) -> tuple:
        if self.tok.kind == "int":
            if self.tok.text != "1":
                self.error("expected a tree or the unit forest '1'")
            self.advance()
            return ()
        trees = []
        while self.tok.kind == "ident":
            trees.append(self.tree())
        if not trees:
            self.error("expected a tree")
        return tuple(trees)

    def tree(self) -> PlanarTree:
        t = self.advance()
        if t.text not in self.colors:
            raise ParseError(f"unknown color {t.text!r}", self.text, t.pos)
        self.expect("[")
        children = []
        while self.tok.kind == "ident":
            children.append(self.tree())
        self.expect("]")
        return PlanarTree(t.text, children)


def parse_terms(text: str, colors) -> dict:
    """Parse series text into a raw ``forest -> Fraction`` mapping."""
    return _SeriesParser(text, tuple(colors)).series()


def parse_series(text: str, ctx):
    from .series import Series
    from .trees import forest_grade, forest_str

    p = _SeriesParser(text, ctx.colors)
    terms = p.series()
    for f in terms:
        if forest_grade(f) > ctx.order:
            raise ParseError(
                f"forest {forest_str(f)} has grade {forest_grade(f)} above "
                f"truncation order {ctx.order}",
                text,
                0,
            )
    return Series(ctx, terms)


def parse_forest(text: str, colors=("a",)) -> tuple:
    p = _SeriesParser(text, tuple(colors))
    f = p.forest()
    if p.tok.kind != "eof":
        p.error("expected end of input")
    return f


def parse_tree(text: str, colors=("a",)) -> PlanarTree:
    f = parse_forest(text, colors)
    if len(f) != 1:
        raise ValueError(f"expected a single tree, got {len(f)}")
    return f[0]


def split_inputs(text: str) -> list[str]:
    """Split ``"u ; v"`` style multi-series input."""
    return [part.strip() for part in text.split(";")]


# ---------------------------------------------------------------------------
# scalar polynomials, e.g. "y^2 + 1"


class _PolyParser(_Parser):
    def __init__(self, text: str, variables: dict[str, Var]):
        super().__init__(text)
        self.vars = variables

    def expr(self) -> Poly:
        if self.accept("-"):
            out = -self.term()
        else:
            self.accept("+")
            out = self.term()
        while True:
            if self.accept("+"):
                out = out + self.term()
            elif self.accept("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> Poly:
        out = self.factor()
        while True:
            if self.accept("*"):
                out = out * self.factor()
            elif self.accept("/"):
                d = self.tok
                if d.kind != "int" or int(d.text) == 0:
                    self.error("expected nonzero integer divisor")
                self.advance()
                out = out * Fraction(1, int(d.text))
            elif self.tok.kind in ("int", "ident") or (
                self.tok.kind == "op" and self.tok.text == "("
            ):
                out = out * self.factor()
            else:
                return out

    def factor(self) -> Poly:
        base = self.atom()
        if self.accept("^"):
            if self.tok.kind != "int":
                self.error("expected integer exponent")
            base = base ** int(self.advance().text)
        return base

    def atom(self) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Poly.const(int(t.text))
        if t.kind == "ident":
            if t.text not in self.vars:
                raise ParseError(f"unknown variable {t.text!r}", self.text, t.pos)
            self.advance()
            return Poly.var(self.vars[t.text])
        if self.accept("("):
            out = self.expr()
            self.expect(")")
            return out
        if self.accept("-"):
            return -self.factor()
        self.error("expected number, variable or '('")


def parse_polynomial(text: str, variables: dict[str, Var] | None = None) -> Poly:
    p = _PolyParser(text, variables or {"y": Y})
    out = p.expr()
    if p.tok.kind != "eof":
        p.error("expected end of input")
    return out


# ---------------------------------------------------------------------------
# endomorphism files: lines "color := series"


def parse_endomorphism_text(text: str, colors) -> dict[str, dict]:
    images: dict[str, dict] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            if ":=" not in body:
                raise ParseError("expected 'color := series'", text, offset)
            name, rhs = body.split(":=", 1)
            name = name.strip()
            if name not in colors:
                raise ParseError(f"unknown color {name!r}", text, offset)
            if name in images:
                raise ParseError(f"duplicate image for color {name!r}", text, offset)
            try:
                images[name] = parse_terms(rhs, colors)
            except ParseError as exc:
                raise ParseError(
                    f"in image of {name!r}: {exc}", text, offset
                ) from exc
        offset += len(line)
    return images
