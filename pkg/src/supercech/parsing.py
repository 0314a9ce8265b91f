"""Expression grammar for Grassmann elements.

Accepted syntax::

    expr     :=  term (('+'|'-') term)*
    term     :=  factor (('*'|'/') factor)*
    factor   :=  '-' factor | atom ('^' exponent)?
    atom     :=  integer | name | theta_k | '(' expr ')'
    exponent :=  ['-'] integer | '(' ['-'] integer ')'

Names are even coordinates; ``theta_k`` (k = 1..q) are the odd generators.
Rationals are written as divisions, e.g. ``1/2`` or ``x/3``.  A divisor (and
the base of a negative exponent) must be invertible, i.e. have a single-term
reduced part; this keeps every result a Laurent-polynomial-coefficient
element.
"""

from __future__ import annotations

import re

from .errors import ParseError, SubstitutionError
from .grassmann import GrassmannElement
from .laurent import LaurentPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")
_THETA = re.compile(r"^theta_([0-9]+)$")


class _Tokenizer:
    def __init__(self, text: str, line: int | None = None):
        self.text = text
        self.line = line
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.i = 0

    def _scan(self):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if not m or m.end() == pos:
                if self.text[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {self.text[pos]!r}",
                                 self.line, pos + 1)
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            else:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, col = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}", self.line, col + 1)

    def error(self, message: str):
        _, _, col = self.peek()
        raise ParseError(message, self.line, col + 1)


class ExpressionParser:
    """Parses expressions into :class:`GrassmannElement` values over a fixed
    coordinate context."""

    def __init__(self, vars: tuple[str, ...], odd_rank: int):
        self.vars = tuple(vars)
        self.odd_rank = odd_rank

    def parse(self, text: str, line: int | None = None) -> GrassmannElement:
        tz = _Tokenizer(text, line)
        value = self._expr(tz)
        kind, val, col = tz.peek()
        if kind is not None:
            raise ParseError(f"trailing input starting at {val!r}", line, col + 1)
        return value

    def parse_poly(self, text: str, line: int | None = None) -> LaurentPoly:
        g = self.parse(text, line)
        if g.truncate(1).is_zero():
            return g.body()
        raise ParseError("expected an expression without odd generators", line, 1)

    # ---------------------------------------------------------------- rules

    def _expr(self, tz):
        value = self._term(tz)
        while True:
            kind, val, _ = tz.peek()
            if kind == "op" and val in "+-":
                tz.next()
                rhs = self._term(tz)
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def _term(self, tz):
        value = self._factor(tz)
        while True:
            kind, val, col = tz.peek()
            if kind == "op" and val in "*/":
                tz.next()
                rhs = self._factor(tz)
                if val == "*":
                    value = value * rhs
                else:
                    try:
                        value = value * rhs.power(-1)
                    except SubstitutionError as exc:
                        raise ParseError(f"division by a non-invertible expression ({exc})",
                                         tz.line, col + 1)
            else:
                return value

    def _factor(self, tz):
        kind, val, _ = tz.peek()
        if kind == "op" and val == "-":
            tz.next()
            return -self._factor(tz)
        value = self._atom(tz)
        kind, val, col = tz.peek()
        if kind == "op" and val == "^":
            tz.next()
            e = self._exponent(tz)
            try:
                value = value.power(e)
            except SubstitutionError as exc:
                raise ParseError(f"negative power of a non-invertible expression ({exc})",
                                 tz.line, col + 1)
        return value

    def _exponent(self, tz) -> int:
        kind, val, col = tz.next()
        if kind == "op" and val == "(":
            e = self._exponent(tz)
            tz.expect_op(")")
            return e
        sign = 1
        if kind == "op" and val == "-":
            sign = -1
            kind, val, col = tz.next()
        if kind != "num":
            raise ParseError("expected an integer exponent", tz.line, col + 1)
        return sign * int(val)

    def _atom(self, tz):
        kind, val, col = tz.next()
        if kind == "num":
            return GrassmannElement.const(self.vars, self.odd_rank, int(val))
        if kind == "name":
            m = _THETA.match(val)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= self.odd_rank:
                    raise ParseError(f"theta_{k} out of range 1..{self.odd_rank}",
                                     tz.line, col + 1)
                return GrassmannElement.odd_gen(self.vars, self.odd_rank, k)
            if val not in self.vars:
                raise ParseError(f"unknown coordinate {val!r}", tz.line, col + 1)
            return GrassmannElement.even_var(self.vars, self.odd_rank, val)
        if kind == "op" and val == "(":
            value = self._expr(tz)
            tz.expect_op(")")
            return value
        raise ParseError(f"unexpected token {val!r}", tz.line, col + 1)


def parse_element(text: str, vars: tuple[str, ...], odd_rank: int,
                  line: int | None = None) -> GrassmannElement:
    return ExpressionParser(vars, odd_rank).parse(text, line)


def parse_poly(text: str, vars: tuple[str, ...], line: int | None = None) -> LaurentPoly:
    return ExpressionParser(vars, 0).parse_poly(text, line)
