"""
Recursive-descent parser for exponential-polynomial expressions.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | IMAG | 'i' | 'pi' | 'e' | zN | NAME
            | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := exp | sqrt | log | ln

Division is by constants only, powers of non-constants must be
non-negative integers, exp() arguments (and exponents over a constant
base, so e^(z1+z2) works) must be polynomials, sqrt() and log() take
constants. Named symbols are substituted as complex constants.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Mapping

from app.core.exppoly import ExpPoly, ep_add, ep_mul, ep_scale
from app.core.polyalg import Poly
from app.utils.error_handler import ExprSyntaxError, NonPolynomialExponent, UnboundSymbol

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?(?![A-Za-z0-9_]))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

FUNCTIONS = ("exp", "sqrt", "log", "ln")
RESERVED = ("i", "pi", "e") + FUNCTIONS


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


def _constant_value(e: ExpPoly) -> complex | None:
    """The value of a constant ExpPoly, None when it depends on z."""
    if not e.terms:
        return 0j
    if len(e.terms) == 1:
        t = e.terms[0]
        if t.expo.is_zero and t.coeff.is_constant:
            return t.coeff.constant_term * math.exp(t.log_scale)
    return None


def _as_poly(e: ExpPoly) -> Poly | None:
    """The polynomial an exponent-free ExpPoly equals, None otherwise."""
    if not e.terms:
        return Poly.zero(e.dim)
    if len(e.terms) == 1 and e.terms[0].expo.is_zero:
        t = e.terms[0]
        return t.coeff * math.exp(t.log_scale) if t.log_scale else t.coeff
    return None


class Parser:
    def __init__(self, text: str, dim: int, symbols: Mapping[str, complex] | None = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.dim = dim
        self.symbols = dict(symbols or {})

    # -- token helpers --------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Token | None = None) -> ExprSyntaxError:
        token = token or self.current
        return ExprSyntaxError(message, token.line, token.col)

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.pos += 1
            return True
        return False

    def _expect(self, text: str):
        if not self._accept(text):
            found = self.current.text or "end of input"
            raise self._error(f"expected '{text}', found '{found}'")

    # -- grammar --------------------------------------------------------

    def parse(self) -> ExpPoly:
        if self.current.kind == "end":
            raise self._error("empty expression")
        result = self.expr()
        if self.current.kind != "end":
            raise self._error(f"unexpected '{self.current.text}'")
        return result

    def expr(self) -> ExpPoly:
        result = self.term()
        while True:
            if self._accept("+"):
                result = ep_add(result, self.term())
            elif self._accept("-"):
                result = ep_add(result, ep_scale(self.term(), -1))
            else:
                return result

    def term(self) -> ExpPoly:
        result = self.unary()
        while True:
            if self._accept("*"):
                result = ep_mul(result, self.unary())
            elif self.current.kind == "op" and self.current.text == "/":
                token = self.current
                self.pos += 1
                divisor = _constant_value(self.unary())
                if divisor is None:
                    raise self._error("division by a non-constant expression", token)
                if divisor == 0:
                    raise self._error("division by zero", token)
                result = ep_scale(result, 1 / divisor)
            else:
                return result

    def unary(self) -> ExpPoly:
        if self._accept("-"):
            return ep_scale(self.unary(), -1)
        if self._accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> ExpPoly:
        base = self.atom()
        if not (self.current.kind == "op" and self.current.text == "^"):
            return base
        token = self.current
        self.pos += 1
        power = self.unary()
        exponent = _constant_value(power)
        base_value = _constant_value(base)
        if exponent is None:
            # b^P(z) = exp(log(b)·P(z)) for a constant base b
            poly = _as_poly(power)
            if base_value is None or base_value == 0:
                raise self._error("a non-constant exponent needs a nonzero constant base", token)
            if poly is None:
                raise NonPolynomialExponent(
                    f"exponent at line {token.line}, column {token.col} is not a polynomial",
                    line=token.line, col=token.col,
                )
            return ExpPoly.exp(poly * cmath.log(base_value))
        if base_value is not None:
            if base_value == 0 and exponent.real <= 0:
                raise self._error("zero raised to a non-positive power", token)
            return ExpPoly.constant(self.dim, base_value ** exponent if base_value else 0)
        n = exponent.real
        if exponent.imag != 0 or n < 0 or not float(n).is_integer():
            raise self._error("non-constant base needs a non-negative integer power", token)
        result = ExpPoly.constant(self.dim, 1)
        for _ in range(int(n)):
            result = ep_mul(result, base)
        return result

    def atom(self) -> ExpPoly:
        token = self.current
        if token.kind == "number":
            self.pos += 1
            if token.text.endswith("i"):
                return ExpPoly.constant(self.dim, 1j * float(token.text[:-1]))
            return ExpPoly.constant(self.dim, float(token.text))
        if token.kind == "name":
            self.pos += 1
            return self._name(token)
        if self._accept("("):
            inner = self.expr()
            self._expect(")")
            return inner
        found = token.text or "end of input"
        raise self._error(f"unexpected '{found}'")

    def _name(self, token: Token) -> ExpPoly:
        name = token.text
        if name in FUNCTIONS:
            self._expect("(")
            arg = self.expr()
            self._expect(")")
            return self._call(name, arg, token)
        if name == "i":
            return ExpPoly.constant(self.dim, 1j)
        if name == "pi":
            return ExpPoly.constant(self.dim, math.pi)
        if name == "e":
            return ExpPoly.constant(self.dim, math.e)
        m = re.fullmatch(r"z(\d+)", name)
        if m and name not in self.symbols:
            j = int(m.group(1))
            if not 1 <= j <= self.dim:
                raise self._error(f"variable {name} outside z1..z{self.dim}", token)
            return ExpPoly.from_poly(Poly.variable(self.dim, j))
        if name in self.symbols:
            return ExpPoly.constant(self.dim, self.symbols[name])
        raise UnboundSymbol(name)

    def _call(self, name: str, arg: ExpPoly, token: Token) -> ExpPoly:
        if name == "exp":
            poly = _as_poly(arg)
            if poly is None:
                raise NonPolynomialExponent(
                    f"exp() argument at line {token.line}, column {token.col} is not a polynomial",
                    line=token.line, col=token.col,
                )
            return ExpPoly.exp(poly)
        value = _constant_value(arg)
        if value is None:
            raise self._error(f"{name}() takes a constant argument", token)
        if name == "sqrt":
            return ExpPoly.constant(self.dim, cmath.sqrt(value))
        if value == 0:
            raise self._error("log(0) is undefined", token)
        return ExpPoly.constant(self.dim, cmath.log(value))


def parse_expr(text: str, dim: int, symbols: Mapping[str, complex] | None = None) -> ExpPoly:
    return Parser(text, dim, symbols).parse()


def parse_poly(text: str, dim: int, symbols: Mapping[str, complex] | None = None) -> Poly:
    """Parse an exponential-free expression into a Poly."""
    result = parse_expr(text, dim, symbols)
    poly = _as_poly(result)
    if poly is None:
        raise NonPolynomialExponent(f"'{text}' is not a polynomial")
    return poly


def parse_constant(text, symbols: Mapping[str, complex] | None = None) -> complex:
    """Parse a constant expression; plain numbers pass through."""
    if isinstance(text, (int, float, complex)) and not isinstance(text, bool):
        return complex(text)
    value = _constant_value(parse_expr(str(text), 0, symbols))
    if value is None:
        raise ExprSyntaxError(f"'{text}' is not a constant", 1, 1)
    return value
