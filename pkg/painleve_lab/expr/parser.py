"""
Parser and printer for the equation DSL.

Grammar:
    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" exponent)?
    atom   := integer | name | "D(" name ("," name (":" integer)?)+ ")" | "(" expr ")"
    exponent := ["-"] integer ["/" integer] | "(" exponent ")"

Names declared as dependent variables become order-zero jets, declared
independent variables become their Symbols, every other name is a parameter.
"""

import re
from dataclasses import dataclass
from typing import List, Optional

import sympy as sp
from loguru import logger
from sympy.printing.precedence import precedence
from sympy.printing.str import StrPrinter

from .errors import DslSyntaxError, ExpressionDomainError, UndeclaredVariableError
from .jet import JetSpace, JetSymbol
from .normal_form import normalize

_TOKEN = re.compile(r"\s*(?:([0-9]+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            break
        start = match.start(match.lastindex) if match.lastindex else match.end()
        if match.group(1) is not None:
            tokens.append(Token("int", match.group(1), start))
        elif match.group(2) is not None:
            tokens.append(Token("name", match.group(2), start))
        elif match.group(3) is not None:
            if match.group(3) not in "+-*/^(),:":
                raise DslSyntaxError(f"Unexpected character '{match.group(3)}'", start)
            tokens.append(Token("op", match.group(3), start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: JetSpace):
        self.tokens = tokenize(text)
        self.index = 0
        self.space = space

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not (self.current.kind == "op" and self.current.text == text):
            found = self.current.text or "end of input"
            raise DslSyntaxError(f"Expected '{text}' but found '{found}'", self.current.position)
        return self.advance()

    def parse(self) -> sp.Expr:
        if self.current.kind == "end":
            raise DslSyntaxError("Empty expression", 0)
        result = self.expr()
        if self.current.kind != "end":
            raise DslSyntaxError(f"Unexpected '{self.current.text}'", self.current.position)
        return result

    def expr(self) -> sp.Expr:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> sp.Expr:
        result = self.unary()
        while True:
            if self.accept("*"):
                result = result * self.unary()
            elif self.current.kind == "op" and self.current.text == "/":
                position = self.advance().position
                divisor = self.unary()
                if normalize(divisor) == 0:
                    raise ExpressionDomainError(f"Division by zero at position {position}")
                result = result / divisor
            else:
                return result

    def unary(self) -> sp.Expr:
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self) -> sp.Expr:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            position = self.advance().position
            exponent = self.exponent()
            if exponent <= 0 and normalize(base) == 0:
                raise ExpressionDomainError(
                    f"0^{exponent} is undefined at position {position}"
                )
            return base**exponent
        return base

    def exponent(self) -> sp.Rational:
        if self.accept("("):
            value = self.exponent()
            self.expect(")")
            return value
        sign = -1 if self.accept("-") else 1
        numerator = self.integer()
        denominator = 1
        if self.accept("/"):
            position = self.current.position
            denominator = self.integer()
            if denominator == 0:
                raise ExpressionDomainError(f"Zero denominator at position {position}")
        return sp.Rational(sign * numerator, denominator)

    def integer(self) -> int:
        if self.current.kind != "int":
            found = self.current.text or "end of input"
            raise DslSyntaxError(f"Expected an integer but found '{found}'", self.current.position)
        return int(self.advance().text)

    def atom(self) -> sp.Expr:
        token = self.current
        if token.kind == "int":
            return sp.Integer(self.integer())
        if token.kind == "name":
            self.advance()
            if token.text == "D" and self.current.kind == "op" and self.current.text == "(":
                return self.derivative(token.position)
            return self.name(token)
        if self.accept("("):
            result = self.expr()
            self.expect(")")
            return result
        found = token.text or "end of input"
        raise DslSyntaxError(f"Unexpected '{found}'", token.position)

    def name(self, token: Token) -> sp.Expr:
        if token.text in self.space.dependents:
            return self.space.jet(token.text)
        return sp.Symbol(token.text)

    def derivative(self, position: int) -> JetSymbol:
        self.expect("(")
        target = self.current
        if target.kind != "name":
            raise DslSyntaxError("Expected a dependent variable", target.position)
        self.advance()
        if target.text not in self.space.dependents:
            raise UndeclaredVariableError(
                f"'{target.text}' at position {target.position} is not a declared dependent variable"
            )
        derivatives = {}
        if not (self.current.kind == "op" and self.current.text == ","):
            raise DslSyntaxError("Expected ',' after dependent variable", self.current.position)
        while self.accept(","):
            var = self.current
            if var.kind != "name":
                raise DslSyntaxError("Expected an independent variable", var.position)
            self.advance()
            if var.text not in self.space.independents:
                raise UndeclaredVariableError(
                    f"'{var.text}' at position {var.position} is not a declared independent variable"
                )
            count = self.integer() if self.accept(":") else 1
            if count < 1:
                raise DslSyntaxError("Derivative count must be positive", var.position)
            derivatives[var.text] = derivatives.get(var.text, 0) + count
        self.expect(")")
        return self.space.jet(target.text, derivatives)


def parse(text: str, space: JetSpace) -> sp.Expr:
    """
    Parse DSL text into a normalized expression over the given jet space.

    Args:
        text: Expression text, e.g. "D(u,t) + u*D(u,x) + alpha*D(u,x:5)"
        space: Jet space declaring the independent and dependent variables

    Returns:
        Normalized sympy expression

    Raises:
        DslSyntaxError: On malformed input, with the offending position
        UndeclaredVariableError: If a derivative names an undeclared variable
        ExpressionDomainError: On 0^0, 0^negative or division by zero
    """
    logger.debug(f"Parsing '{text}' over {space.describe()}")
    return normalize(_Parser(text, space).parse())


class DslPrinter(StrPrinter):
    """Prints expressions back in DSL syntax."""

    def _print_JetSymbol(self, expr: JetSymbol) -> str:
        if expr.order == 0:
            return expr.dependent
        parts = [expr.dependent]
        for var, k in zip(expr.independents, expr.counts):
            if k == 1:
                parts.append(var)
            elif k > 1:
                parts.append(f"{var}:{k}")
        return f"D({','.join(parts)})"

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.as_base_exp()
        if exponent.is_Rational and exponent < 0:
            positive = sp.Pow(base, -exponent)
            inner = self._print(positive)
            if positive.is_Add or positive.is_Mul:
                inner = f"({inner})"
            return f"1/{inner}"
        text = self.parenthesize(base, precedence(expr), strict=True)
        if exponent.is_Integer:
            return f"{text}^{exponent}"
        return f"{text}^({self._print(exponent)})"

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"


def to_dsl(expr: sp.Basic) -> str:
    return DslPrinter().doprint(sp.sympify(expr))
