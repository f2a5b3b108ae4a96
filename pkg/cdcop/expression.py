"""
Cost Expressions
================

Binary cost functions as expression trees over two slots, `x0` and `x1`.

Trees are written as prefix s-expressions, e.g. `(- (^ x0 2) (^ x1 2))`.
Evaluation works on floats and on numpy arrays alike, so one call prices
every particle of an agent at once.
"""
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from errors import DivisionByZero, ExpressionSyntaxError

Number = Union[float, np.ndarray]

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class Expression:
    """Base node."""

    def evaluate(self, a: Number, b: Number) -> Number:
        raise NotImplementedError

    def slots(self) -> frozenset:
        raise NotImplementedError

    def nodes(self):
        """Yield this node and every descendant, depth first."""
        yield self


@dataclass(frozen=True)
class Constant(Expression):
    value: float

    def evaluate(self, a, b):
        return self.value

    def slots(self):
        return frozenset()


@dataclass(frozen=True)
class Var(Expression):
    slot: int

    def __post_init__(self):
        if self.slot not in (0, 1):
            raise ExpressionSyntaxError(f"unknown slot x{self.slot}")

    def evaluate(self, a, b):
        return a if self.slot == 0 else b

    def slots(self):
        return frozenset({self.slot})


@dataclass(frozen=True)
class _Binary(Expression):
    left: Expression
    right: Expression

    def slots(self):
        return self.left.slots() | self.right.slots()

    def nodes(self):
        yield self
        yield from self.left.nodes()
        yield from self.right.nodes()


class Add(_Binary):
    def evaluate(self, a, b):
        return self.left.evaluate(a, b) + self.right.evaluate(a, b)


class Sub(_Binary):
    def evaluate(self, a, b):
        return self.left.evaluate(a, b) - self.right.evaluate(a, b)


class Mul(_Binary):
    def evaluate(self, a, b):
        return self.left.evaluate(a, b) * self.right.evaluate(a, b)


class Div(_Binary):
    def evaluate(self, a, b):
        denominator = self.right.evaluate(a, b)
        if np.any(np.asarray(denominator) == 0):
            raise DivisionByZero(f"zero denominator in {format_expression(self)}")
        return self.left.evaluate(a, b) / denominator


@dataclass(frozen=True)
class Pow(Expression):
    base: Expression
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ExpressionSyntaxError(
                f"exponent must be a non-negative integer, got {self.exponent!r}"
            )

    def evaluate(self, a, b):
        return self.base.evaluate(a, b) ** self.exponent

    def slots(self):
        return self.base.slots()

    def nodes(self):
        yield self
        yield from self.base.nodes()


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression

    def evaluate(self, a, b):
        return -self.operand.evaluate(a, b)

    def slots(self):
        return self.operand.slots()

    def nodes(self):
        yield self
        yield from self.operand.nodes()


def eval_expr(expr: Expression, a: Number, b: Number) -> Number:
    """Evaluate `expr` with slot 0 bound to `a` and slot 1 bound to `b`."""
    return expr.evaluate(a, b)


# ---------------------------------------------------------------------------
# Prefix s-expression grammar
# ---------------------------------------------------------------------------

_SYMBOLS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def format_expression(expr: Expression) -> str:
    """Render `expr` in the prefix grammar; parse_expression reverses it."""
    if isinstance(expr, Constant):
        return repr(float(expr.value))
    if isinstance(expr, Var):
        return f"x{expr.slot}"
    if isinstance(expr, Neg):
        return f"(- {format_expression(expr.operand)})"
    if isinstance(expr, Pow):
        return f"(^ {format_expression(expr.base)} {expr.exponent})"
    symbol = _SYMBOLS[type(expr)]
    return f"({symbol} {format_expression(expr.left)} {format_expression(expr.right)})"


def parse_expression(text: str) -> Expression:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ExpressionSyntaxError("empty expression")
    expr, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ExpressionSyntaxError(f"trailing tokens after expression: {tokens[pos:]}")
    return expr


def _parse(tokens, pos):
    if pos >= len(tokens):
        raise ExpressionSyntaxError("unexpected end of expression")
    token = tokens[pos]
    if token == ")":
        raise ExpressionSyntaxError("unexpected ')'")
    if token != "(":
        return _atom(token), pos + 1

    if pos + 1 >= len(tokens):
        raise ExpressionSyntaxError("unexpected end of expression")
    op = tokens[pos + 1]
    pos += 2
    if op == "^":
        base, pos = _parse(tokens, pos)
        if pos >= len(tokens) or not tokens[pos].isdigit():
            raise ExpressionSyntaxError("'^' needs a non-negative integer exponent")
        exponent = int(tokens[pos])
        pos = _expect_close(tokens, pos + 1)
        return Pow(base, exponent), pos

    args = []
    while pos < len(tokens) and tokens[pos] != ")":
        arg, pos = _parse(tokens, pos)
        args.append(arg)
    pos = _expect_close(tokens, pos)

    if op == "-" and len(args) == 1:
        return Neg(args[0]), pos
    if op in ("+", "*") and len(args) >= 2:
        node_type = Add if op == "+" else Mul
        node = args[0]
        for arg in args[1:]:
            node = node_type(node, arg)
        return node, pos
    if op in ("-", "/") and len(args) == 2:
        node_type = Sub if op == "-" else Div
        return node_type(args[0], args[1]), pos
    raise ExpressionSyntaxError(f"bad operator or arity: ({op} ...{len(args)} args)")


def _expect_close(tokens, pos):
    if pos >= len(tokens) or tokens[pos] != ")":
        raise ExpressionSyntaxError("missing ')'")
    return pos + 1


def _atom(token):
    if token in ("x0", "x1"):
        return Var(int(token[1]))
    try:
        value = float(token)
    except ValueError:
        raise ExpressionSyntaxError(f"unknown symbol {token!r}") from None
    if not np.isfinite(value):
        raise ExpressionSyntaxError(f"non-finite constant {token!r}")
    return Constant(value)


def quadratic(a: float, b: float, c: float) -> Expression:
    """a*x0^2 + b*x0*x1 + c*x1^2."""
    return Add(
        Add(
            Mul(Constant(a), Pow(Var(0), 2)),
            Mul(Constant(b), Mul(Var(0), Var(1))),
        ),
        Mul(Constant(c), Pow(Var(1), 2)),
    )
