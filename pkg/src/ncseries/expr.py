"""Text form of series: tokenizer, recursive-descent parser and small AST.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := ("+" | "-")* power (("*" | "/") power)*
    power  := atom ("^" INT)?
    atom   := NUMBER | NAME | "(" expr ")"

NUMBER is an integer, decimal or exponent literal with an optional ``j``
suffix for imaginary values.  NAME is ``x<digits>`` or one of the names passed
by the caller.  Division is only allowed by a scalar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .errors import NCSeriesError, PreconditionError
from .series import INF, Series


class ParseError(NCSeriesError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?|j\b)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def tokenize(text: str) -> list[Token]:
    out, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
        else:
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("end", "", line, pos - line_start + 1))
    return out


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


class _Parser:
    def __init__(self, text: str, names):
        self.tokens = tokenize(text)
        self.i = 0
        self.names = {name: i + 1 for i, name in enumerate(names)} if names else None
        self.max_index = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self):
        if self.tok.kind == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        negate = False
        while self.tok.kind == "op" and self.tok.text in "+-":
            negate ^= self.tok.text == "-"
            self.i += 1
        node = self.power()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.power())
        return Neg(node) if negate else node

    def power(self):
        node = self.atom()
        if self.eat("^"):
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                self.fail("exponent must be a nonnegative integer")
            self.i += 1
            node = Pow(node, int(tok.text))
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(tok.text)
        if tok.kind == "name":
            self.i += 1
            return Gen(self.generator(tok))
        if self.eat("("):
            node = self.expr()
            if not self.eat(")"):
                self.fail("expected ')'")
            return node
        self.fail("expected a number, a generator or '('" if tok.kind != "end" else "unexpected end of input")

    def generator(self, tok: Token) -> int:
        if self.names is not None:
            if tok.text not in self.names:
                self.fail(f"unknown generator {tok.text!r}", tok)
            index = self.names[tok.text]
        else:
            m = re.fullmatch(r"x([1-9]\d*)", tok.text)
            if not m:
                self.fail(f"unknown generator {tok.text!r}", tok)
            index = int(m.group(1))
        self.max_index = max(self.max_index, index)
        return index


def parse_ast(text: str, names=None):
    """Parse to an AST; returns (ast, largest generator index seen)."""
    p = _Parser(text, names)
    return p.parse(), p.max_index


def _literal_field(text: str) -> str:
    if text.endswith("j"):
        return "complex"
    if any(ch in text for ch in ".eE"):
        return "real"
    return "exact"


def _literals(node):
    if isinstance(node, Num):
        yield node.text
    elif isinstance(node, Neg):
        yield from _literals(node.operand)
    elif isinstance(node, BinOp):
        yield from _literals(node.left)
        yield from _literals(node.right)
    elif isinstance(node, Pow):
        yield from _literals(node.base)


def _number(text: str, field: str):
    if text.endswith("j"):
        if field != "complex":
            raise PreconditionError(f"imaginary literal {text!r} in the {field} field")
        return complex(0, float(text[:-1] or 1))
    if field == "exact":
        return scalars.normalize_exact(Fraction(text))
    return scalars.coerce(float(text), field)


def build(node, n: int, trunc, field: str) -> Series:
    if isinstance(node, Num):
        return Series.constant(_number(node.text, field), n, trunc, field)
    if isinstance(node, Gen):
        return Series.var(node.index, n, trunc, field)
    if isinstance(node, Neg):
        return -build(node.operand, n, trunc, field)
    if isinstance(node, Pow):
        return build(node.base, n, trunc, field) ** node.exponent
    left, right = build(node.left, n, trunc, field), build(node.right, n, trunc, field)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right.degree() not in (None, 0):
        raise ParseError("division by a non-scalar expression")
    c = right.constant_term
    if c == 0:
        raise ParseError("division by zero")
    return left / c


def parse_series(text: str, n: int | None = None, trunc=None, field: str | None = None, names=None) -> Series:
    """Parse an expression into a Series.

    ``n`` defaults to the largest generator index used (or the number of
    names); ``field`` defaults to the smallest field holding every literal;
    without ``trunc`` the result is a polynomial (no truncation).
    """
    ast, max_index = parse_ast(text, names)
    if names:
        max_index = max(max_index, len(names))
    if n is None:
        n = max_index
    elif max_index > n:
        raise ParseError(f"generator x{max_index} outside the alphabet of size {n}")
    if field is None:
        field = scalars.join_all(["exact"] + [_literal_field(t) for t in _literals(ast)])
    else:
        field = scalars.check_field(field)
    trunc = INF if trunc is None else trunc
    return build(ast, n, trunc, field)


def split_expressions(text: str) -> list[str]:
    """One expression per non-blank line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out
