"""Parser for rational-function expressions in ``s``.

Grammar (usual precedence, ``^`` binds tightest and takes a nonnegative
integer exponent)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT)?
    atom   := INT | "s" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exactalg import RatFunc, S, ZeroDivisorError

__all__ = ["ParseError", "parse_ratfunc"]

_TOKEN = re.compile(r"\s*(?:(\d+)|(s)|(\^|\*\*|[-+*/()]))")


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


@dataclass
class _Tok:
    kind: str  # "int", "s", "op", "end"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("s", "s", start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(_Tok("op", op, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        t = self.take()
        if t.kind != "op" or t.value != op:
            raise ParseError(f"expected {op!r}", self.text, t.pos)

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.peek().pos)

    def parse(self) -> RatFunc:
        if self.peek().kind == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().value!r}")
        return v

    def expr(self) -> RatFunc:
        v = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.take().value
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> RatFunc:
        v = self.unary()
        while self.peek().kind == "op" and self.peek().value in "*/":
            tok = self.take()
            w = self.unary()
            if tok.value == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ParseError("division by zero", self.text, tok.pos)
                v = v / w
        return v

    def unary(self) -> RatFunc:
        t = self.peek()
        if t.kind == "op" and t.value in "+-":
            self.take()
            v = self.unary()
            return -v if t.value == "-" else v
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            self.take()
            t = self.take()
            if t.kind != "int":
                raise ParseError("exponent must be a nonnegative integer", self.text, t.pos)
            k = int(t.value)
            if k and base.is_zero():
                return base
            if base.is_zero():
                raise ParseError("0^0 is undefined", self.text, t.pos)
            return base ** k
        return base

    def atom(self) -> RatFunc:
        t = self.take()
        if t.kind == "int":
            return RatFunc(int(t.value))
        if t.kind == "s":
            return RatFunc(S)
        if t.kind == "op" and t.value == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError("expected a number, 's' or '('", self.text, t.pos)


def parse_ratfunc(text: str) -> RatFunc:
    """Parse ``text`` into a canonical :class:`RatFunc`.

    >>> str(parse_ratfunc("(s^2-1)/((s+1)*(s+2))"))
    '(s - 1)/(s + 2)'
    """
    try:
        return _Parser(text).parse()
    except ZeroDivisorError as exc:
        raise ParseError(str(exc), text, 0) from exc
