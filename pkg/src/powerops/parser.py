"""Expressions over E^0, E^0[alpha]/(w), E^0[a]/(beta relation) and Gamma.

Grammar (``*`` may be left implicit between factors)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/")? unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?
    atom   := integer | symbol | "(" expr ")"

Symbols: h, delta (= h - 26), alpha, a, Q0..Qp, depending on the context.
"""

import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|(Q\d+|delta|alpha|[A-Za-z]\w*)|(\*\*|[-+*/^()]))")
_KNOWN_WORDS = ("delta", "alpha", "h", "a")


class Context:
    """Where parsed values live.

    kind is "hseries", "alpha", "a" or "gamma"; ``ring`` is the E^0 ring.
    """

    def __init__(self, kind, ring, data=None, algebra=None):
        if kind not in ("hseries", "alpha", "a", "gamma"):
            raise ValueError(f"unknown parsing context {kind!r}")
        if kind == "alpha" and data is None:
            raise ValueError("the alpha context needs a model")
        if kind == "gamma" and algebra is None:
            raise ValueError("the gamma context needs a Dyer-Lashof algebra")
        self.kind = kind
        self.ring = algebra.ring if kind == "gamma" else ring
        self.data = data
        self.algebra = algebra
        if kind == "alpha":
            self._ext = data.ext(ring)
        elif kind == "a":
            from .modforms import beta_ring
            self._ext = beta_ring(ring)

    def scalar(self, c):
        if self.kind == "gamma":
            return self.algebra.element({(): c})
        base = self.ring(c) if not hasattr(c, "ring") else c
        if self.kind in ("alpha", "a"):
            return self._ext(base)
        return base

    def symbol(self, name, pos, text):
        h = self.ring.gen()
        if name == "h":
            return self.scalar(h)
        if name == "delta":
            return self.scalar(h - 26)
        if name == "alpha":
            if self.kind != "alpha":
                raise ParseError("alpha is only available in the alpha context", pos, text)
            return self._ext.gen()
        if name == "a":
            if self.kind != "a":
                raise ParseError("a is only available in the a context", pos, text)
            return self._ext.gen()
        if name.startswith("Q") and name[1:].isdigit():
            if self.kind != "gamma":
                raise ParseError(f"{name} is only available in the gamma context", pos, text)
            i = int(name[1:])
            if i > self.algebra.p:
                raise ParseError(f"generator {name} out of range 0..{self.algebra.p}", pos, text)
            return self.algebra.gen(i)
        raise ParseError(f"unknown symbol {name!r}", pos, text)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        num, word, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), start))
        elif word is not None:
            tokens.extend(_split_word(word, start, text))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def _split_word(word, start, text):
    """Break juxtaposed symbols such as Q1Q0 or ha into single symbols."""
    out = []
    i = 0
    while i < len(word):
        m = re.match(r"Q\d+", word[i:])
        if m:
            out.append(("sym", m.group(), start + i))
            i += m.end()
            continue
        for known in _KNOWN_WORDS:
            if word.startswith(known, i):
                out.append(("sym", known, start + i))
                i += len(known)
                break
        else:
            if word[i].isdigit():
                m = re.match(r"\d+", word[i:])
                out.append(("num", int(m.group()), start + i))
                i += m.end()
                continue
            raise ParseError(f"unknown symbol {word[i:]!r}", start + i, text)
    return out


class _Parser:
    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = _combine(value, rhs, op, self.ctx)
        return value

    def _starts_factor(self):
        kind, v, _ = self.peek()
        return kind in ("num", "sym") or (kind == "op" and v == "(")

    def term(self):
        value = self.unary()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in ("*", "/"):
                tok = self.take()
                rhs = self.unary()
                if v == "/":
                    value = self._divide(value, rhs, tok)
                else:
                    value = _combine(value, rhs, "*", self.ctx)
            elif self._starts_factor():
                value = _combine(value, self.unary(), "*", self.ctx)
            else:
                return value

    def _divide(self, value, rhs, tok):
        if isinstance(rhs, Fraction):
            if rhs == 0:
                raise self.error("division by zero", tok)
            return value / rhs if isinstance(value, Fraction) else _lift(value, self.ctx) * (1 / rhs)
        if self.ctx.kind == "hseries":
            try:
                return _lift(value, self.ctx) / rhs
            except ZeroDivisionError as exc:
                raise self.error(f"cannot divide: {exc}", tok) from None
        raise self.error("only division by numbers is supported here", tok)

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in ("+", "-"):
            self.take()
            value = self.unary()
            return value if v == "+" else -value
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            tok = self.take()
            exponent = self.unary()
            if not isinstance(exponent, Fraction) or exponent.denominator != 1:
                raise self.error("exponent must be an integer", tok)
            n = int(exponent)
            if isinstance(base, Fraction):
                return base ** n
            if n < 0 and self.ctx.kind != "hseries":
                raise self.error("negative powers are only supported for h-series", tok)
            try:
                return base ** n
            except ZeroDivisionError as exc:
                raise self.error(f"cannot invert: {exc}", tok) from None
        return base

    def atom(self):
        tok = self.take()
        kind, v, pos = tok
        if kind == "num":
            return Fraction(v)
        if kind == "sym":
            return self.ctx.symbol(v, pos, self.text)
        if kind == "op" and v == "(":
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return value
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {v!r}", tok)


def _lift(value, ctx):
    return ctx.scalar(value) if isinstance(value, Fraction) else value


def _combine(a, b, op, ctx):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return {"+": a + b, "-": a - b, "*": a * b}[op]
    a, b = _lift(a, ctx), _lift(b, ctx)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    return a * b


def parse_expression(text, ctx):
    """Evaluate ``text`` in the context; numbers become ring elements."""
    value = _Parser(text, ctx).parse()
    return _lift(value, ctx)


def parse_tokens(text, ctx):
    """A Gamma word as a formal token list (scalars and generators), unreduced.

    Accepts products only, e.g. "Q2*h*Q0" or "Q1 (h+1) Q0".
    """
    if ctx.kind != "gamma":
        raise ValueError("formal words need the gamma context")
    out = []
    scalar_ctx = Context("hseries", ctx.ring)
    depth = 0
    buf = []
    for part in re.split(r"(\(|\)|\*|\s+)", text):
        if not part or part.isspace():
            continue
        if part == "(":
            depth += 1
            buf.append(part)
            continue
        if part == ")":
            depth -= 1
            buf.append(part)
            if depth == 0:
                out.append(("c", parse_expression("".join(buf), scalar_ctx)))
                buf = []
            continue
        if depth:
            buf.append(part)
            continue
        if part == "*":
            continue
        for kind, v, pos in tokenize(part)[:-1]:
            if kind == "sym" and v.startswith("Q"):
                out.append(("Q", int(v[1:])))
            else:
                out.append(("c", parse_expression(str(v), scalar_ctx)))
    if depth:
        raise ParseError("unbalanced parentheses", len(text), text)
    return out
