"""
Polynomial expression parser.

Grammar (juxtaposition is not allowed, products need ``*``):

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | NAME | "(" expr ")"

NUMBER is an integer or a rational literal ``p/q``. Names must already be declared.
"""

import re
from fractions import Fraction
from typing import List, NamedTuple, Sequence

from eqloop.algebra.monomials import (
    FreePolynomial,
    add_polynomials,
    generator_monomial,
    multiply_polynomials,
    power_polynomial,
    unit_monomial,
)
from eqloop.exceptions import ParseError

_TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


class Token(NamedTuple):
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 1, column_offset: int = 0) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_PATTERN.match(text, position)
        if not match:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise ParseError(f"unexpected character {text[offset]!r}", line, column_offset + offset + 1)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), column_offset + match.start(kind) + 1))
        position = match.end()
    tokens.append(Token("end", "", column_offset + len(text) + 1))
    return tokens


class ExpressionParser:
    """Recursive-descent parser producing free polynomials over declared generators"""

    def __init__(self, names: Sequence[str], degrees: Sequence[int], line: int = 1, column_offset: int = 0):
        self.names = list(names)
        self.degrees = list(degrees)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.line = line
        self.column_offset = column_offset
        self._tokens: List[Token] = []
        self._position = 0

    def parse(self, text: str) -> FreePolynomial:
        self._tokens = tokenize(text, self.line, self.column_offset)
        self._position = 0
        if self._peek().kind == "end":
            raise ParseError("empty expression", self.line, self._peek().column)
        result = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise ParseError(f"unexpected token {token.text!r} (use '*' for products)", self.line, token.column)
        return result

    def _peek(self) -> Token:
        return self._tokens[self._position]

    def _advance(self) -> Token:
        token = self._tokens[self._position]
        self._position += 1
        return token

    def _constant(self, value: Fraction) -> FreePolynomial:
        return {unit_monomial(len(self.names)): value} if value else {}

    def _expr(self) -> FreePolynomial:
        result = self._term()
        while self._peek().text in ("+", "-") and self._peek().kind == "op":
            op = self._advance().text
            add_polynomials(result, self._term(), Fraction(1) if op == "+" else Fraction(-1))
        return result

    def _term(self) -> FreePolynomial:
        result = self._unary()
        while self._peek().kind == "op" and self._peek().text == "*":
            self._advance()
            result = multiply_polynomials(result, self._unary(), self.degrees)
        return result

    def _unary(self) -> FreePolynomial:
        token = self._peek()
        if token.kind == "op" and token.text in ("+", "-"):
            self._advance()
            operand = self._unary()
            if token.text == "-":
                return {m: -c for m, c in operand.items()}
            return operand
        return self._power()

    def _power(self) -> FreePolynomial:
        base = self._atom()
        if self._peek().kind == "op" and self._peek().text == "^":
            self._advance()
            token = self._advance()
            if token.kind != "number" or "/" in token.text:
                raise ParseError("exponent must be a non-negative integer", self.line, token.column)
            return power_polynomial(base, int(token.text), self.degrees)
        return base

    def _atom(self) -> FreePolynomial:
        token = self._advance()
        if token.kind == "number":
            denominator = token.text.partition("/")[2]
            if denominator and int(denominator) == 0:
                raise ParseError(f"zero denominator in {token.text!r}", self.line, token.column)
            return self._constant(Fraction(token.text))
        if token.kind == "name":
            if token.text not in self.index:
                raise ParseError(f"undeclared generator {token.text!r}", self.line, token.column)
            return {generator_monomial(self.index[token.text], len(self.names)): Fraction(1)}
        if token.kind == "op" and token.text == "(":
            inner = self._expr()
            closing = self._advance()
            if closing.text != ")":
                raise ParseError("expected ')'", self.line, closing.column)
            return inner
        if token.kind == "end":
            raise ParseError("unexpected end of expression", self.line, token.column)
        raise ParseError(f"unexpected token {token.text!r}", self.line, token.column)


def parse_expression(text: str, names: Sequence[str], degrees: Sequence[int],
                     line: int = 1, column_offset: int = 0) -> FreePolynomial:
    return ExpressionParser(names, degrees, line, column_offset).parse(text)
