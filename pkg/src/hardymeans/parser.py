"""Textual grammar for mean expressions.

    mean    := "power(" num ")" | "gini(" num "," num ")"
             | "quasi(" gen ")" | "bajrak(" gen "," gen ")"
             | "dev(" devspec ")" | "gauss(" mean ("," mean)+ ")"
             | "arith" | "geom" | "harm"
    gen     := "id" | "log" | "exp" | "pow:" num
    devspec := "arith" | "pair:" gen "," gen
    num     := decimal literal with optional sign and exponent

Whitespace between tokens is ignored.  ``parse_mean_expr`` after
``format_mean_expr`` is the identity on every expressible tree;
expressions outside the grammar (min, max, sign-flipped power
generators) have no textual form and the printer rejects them.
Positions in diagnostics are 1-based character offsets.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    ARITHMETIC_DEVIATION,
    Bajraktarevic,
    Deviation,
    ArithmeticDeviation,
    PairDeviation,
    EXP,
    Gauss,
    Generator,
    Gini,
    IDENTITY,
    LOG,
    MeanExpr,
    Power,
    QuasiArithmetic,
    power_generator,
)

__all__ = ["ParseError", "parse_mean_expr", "format_mean_expr"]


class ParseError(ValueError):
    """Diagnostic with a 1-based character position and the expected tokens."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {position}{hint}")
        self.position = position
        self.expected = expected


_TOKEN = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]+)"
    r"|(?P<punct>[(),:]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "name" | "punct" | "end"
    text: str
    position: int  # 1-based


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", bad_at)
        for kind in ("num", "name", "punct"):
            value = match.group(kind)
            if value is not None:
                tokens.append(_Token(kind, value, match.start(kind) + 1))
                break
        pos = match.end()
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect_punct(self, text: str) -> _Token:
        token = self.peek()
        if token.kind == "punct" and token.text == text:
            return self.advance()
        found = repr(token.text) if token.kind != "end" else "end of input"
        raise ParseError(f"found {found}", token.position, expected=(repr(text),))

    def number(self) -> float:
        token = self.peek()
        if token.kind != "num":
            found = repr(token.text) if token.kind != "end" else "end of input"
            raise ParseError(f"found {found}", token.position, expected=("number",))
        self.advance()
        return float(token.text)

    def generator(self) -> Generator:
        token = self.peek()
        if token.kind == "name":
            if token.text == "id":
                self.advance()
                return IDENTITY
            if token.text == "log":
                self.advance()
                return LOG
            if token.text == "exp":
                self.advance()
                return EXP
            if token.text == "pow":
                self.advance()
                self.expect_punct(":")
                return power_generator(self.number())
            raise ParseError(
                f"unknown generator {token.text!r}",
                token.position,
                expected=("'id'", "'log'", "'exp'", "'pow:'"),
            )
        found = repr(token.text) if token.kind != "end" else "end of input"
        raise ParseError(f"found {found}", token.position, expected=("generator",))

    def devspec(self):
        token = self.peek()
        if token.kind == "name" and token.text == "arith":
            self.advance()
            return ARITHMETIC_DEVIATION
        if token.kind == "name" and token.text == "pair":
            self.advance()
            self.expect_punct(":")
            f = self.generator()
            self.expect_punct(",")
            g = self.generator()
            return PairDeviation(f, g)
        found = repr(token.text) if token.kind != "end" else "end of input"
        raise ParseError(
            f"found {found}", token.position, expected=("'arith'", "'pair:'")
        )

    def mean(self) -> MeanExpr:
        token = self.peek()
        if token.kind != "name":
            found = repr(token.text) if token.kind != "end" else "end of input"
            raise ParseError(f"found {found}", token.position, expected=("mean",))
        name = token.text
        self.advance()
        if name == "arith":
            return Power(1.0)
        if name == "geom":
            return Power(0.0)
        if name == "harm":
            return Power(-1.0)
        if name == "power":
            self.expect_punct("(")
            p = self.number()
            self.expect_punct(")")
            return Power(p)
        if name == "gini":
            self.expect_punct("(")
            p = self.number()
            self.expect_punct(",")
            q = self.number()
            self.expect_punct(")")
            return Gini(p, q)
        if name == "quasi":
            self.expect_punct("(")
            gen = self.generator()
            self.expect_punct(")")
            return QuasiArithmetic(gen)
        if name == "bajrak":
            self.expect_punct("(")
            f = self.generator()
            self.expect_punct(",")
            g = self.generator()
            self.expect_punct(")")
            return Bajraktarevic(f, g)
        if name == "dev":
            self.expect_punct("(")
            dev = self.devspec()
            self.expect_punct(")")
            return Deviation(dev)
        if name == "gauss":
            self.expect_punct("(")
            children = [self.mean()]
            while True:
                token = self.peek()
                if token.kind == "punct" and token.text == ",":
                    self.advance()
                    children.append(self.mean())
                    continue
                break
            closing = self.peek()
            if len(children) < 2:
                raise ParseError(
                    "'gauss' needs at least two means",
                    closing.position,
                    expected=("','",),
                )
            self.expect_punct(")")
            return Gauss(tuple(children))
        raise ParseError(
            f"unknown mean {name!r}",
            token.position,
            expected=(
                "'power'", "'gini'", "'quasi'", "'bajrak'",
                "'dev'", "'gauss'", "'arith'", "'geom'", "'harm'",
            ),
        )


def parse_mean_expr(text: str) -> MeanExpr:
    """Parse the textual grammar into an expression tree."""
    parser = _Parser(text)
    expr = parser.mean()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(
            f"trailing input {trailing.text!r}", trailing.position, expected=("end",)
        )
    return expr


def _format_number(value: float) -> str:
    value = float(value)
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _format_generator(gen: Generator) -> str:
    if gen.kind == "identity":
        return "id"
    if gen.kind in ("log", "exp"):
        return gen.kind
    if gen.kind == "pow":
        return f"pow:{_format_number(gen.p)}"
    raise ValueError(f"generator {gen.describe()} has no textual form")


def format_mean_expr(expr: MeanExpr) -> str:
    """Print an expression tree in the textual grammar."""
    if isinstance(expr, Power):
        return f"power({_format_number(expr.p)})"
    if isinstance(expr, Gini):
        return f"gini({_format_number(expr.p)},{_format_number(expr.q)})"
    if isinstance(expr, QuasiArithmetic):
        return f"quasi({_format_generator(expr.gen)})"
    if isinstance(expr, Bajraktarevic):
        return f"bajrak({_format_generator(expr.f)},{_format_generator(expr.g)})"
    if isinstance(expr, Deviation):
        if isinstance(expr.dev, ArithmeticDeviation):
            return "dev(arith)"
        if isinstance(expr.dev, PairDeviation):
            return (
                f"dev(pair:{_format_generator(expr.dev.f)},"
                f"{_format_generator(expr.dev.g)})"
            )
        raise ValueError(f"deviation {expr.dev!r} has no textual form")
    if isinstance(expr, Gauss):
        return "gauss(" + ",".join(format_mean_expr(c) for c in expr.children) + ")"
    raise ValueError(f"{expr!r} has no textual form in the grammar")
