"""Text forms of scalars and matrices.

Rationals are written ``"p/q"`` (or plain integers); tower elements are
expressions in ``zeta`` and ``tau`` such as ``"-zeta^2 + 1/2*tau^2"``.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .field import Scalar, ScalarField, to_fraction

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {text!r}") from exc
    raise ValueError(f"bad rational {text!r}")


def format_rational(q) -> str:
    return str(to_fraction(q))


def _evaluate(node, field: ScalarField):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, field)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id == "zeta":
            return field.zeta()
        if node.id == "tau":
            return field.tau
        raise ValueError(f"unknown symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _evaluate(node.operand, field)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = _evaluate(node.right, field)
            if not (isinstance(exp, Fraction) and exp.denominator == 1):
                raise ValueError("exponents must be integers")
            base = _evaluate(node.left, field)
            if isinstance(base, Fraction):
                return base ** int(exp)
            return base ** int(exp)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        return op(_evaluate(node.left, field), _evaluate(node.right, field))
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def parse_scalar(text, field: ScalarField) -> Scalar:
    """Parse a tower element; integers and Fractions pass straight through."""
    if isinstance(text, Scalar):
        return field(text)
    if isinstance(text, (int, Fraction)):
        return field(text)
    if not isinstance(text, str):
        raise ValueError(f"bad scalar {text!r}")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad scalar expression {text!r}") from exc
    return field(_evaluate(tree, field))


def parse_number(text, field: ScalarField | None = None):
    """Rational if the text is a plain rational, otherwise a tower element."""
    try:
        return parse_rational(text)
    except ValueError:
        if field is None:
            raise
        return parse_scalar(text, field)


def format_scalar(x) -> str:
    if isinstance(x, Scalar):
        if x.is_rational():
            return format_rational(x.to_fraction())
        return x.to_expr()
    return format_rational(x)
