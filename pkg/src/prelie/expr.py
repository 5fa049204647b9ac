"""Exact evaluation of small arithmetic expressions over named rational parameters.

Only numbers, names, + - * / ** (integer exponents), unary signs and
parentheses are accepted. Constraints are comparisons ``expr != 0``.
"""
from __future__ import annotations

import ast
from fractions import Fraction

from .errors import ParseError, ValidationError

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_expr(text: str) -> ast.AST:
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad expression {text!r}: {exc.msg}", exc.lineno, exc.offset) from None
    _validate(tree.body, text)
    return tree.body


def _validate(node, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed in {text!r}")
    elif isinstance(node, ast.Name):
        pass
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        _validate(node.operand, text)
    elif isinstance(node, ast.BinOp) and (type(node.op) in _BINOPS or isinstance(node.op, ast.Pow)):
        _validate(node.left, text)
        _validate(node.right, text)
        if isinstance(node.op, ast.Pow) and not _is_int_literal(node.right):
            raise ParseError(f"exponents must be integer literals in {text!r}")
    elif isinstance(node, ast.Compare):
        if len(node.ops) != 1 or not isinstance(node.ops[0], ast.NotEq):
            raise ParseError(f"only 'expr != 0' constraints are supported, got {text!r}")
        _validate(node.left, text)
        _validate(node.comparators[0], text)
    else:
        raise ParseError(f"unsupported syntax {type(node).__name__} in {text!r}")


def _is_int_literal(node) -> bool:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        return _is_int_literal(node.operand)
    return isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool)


def names_in(text: str) -> set:
    return {n.id for n in ast.walk(parse_expr(text)) if isinstance(n, ast.Name)}


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ValidationError(f"unknown parameter {node.id!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left, env), _eval(node.right, env)
        if isinstance(node.op, ast.Pow):
            return a ** int(b)
        return _BINOPS[type(node.op)](a, b)
    if isinstance(node, ast.Compare):
        return Fraction(int(_eval(node.left, env) != _eval(node.comparators[0], env)))
    raise ValidationError("unsupported expression")


def evaluate(text, env: dict | None = None) -> Fraction:
    """Value of ``text`` with parameters from ``env``; plain rationals pass through."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ZeroDivisionError):
            raise ParseError(f"zero denominator in {s!r}") from None
    return _eval(parse_expr(s), env or {})


def holds(constraint: str, env: dict) -> bool:
    """True when a ``expr != 0`` constraint is satisfied (division by zero counts as violated)."""
    try:
        return bool(_eval(parse_expr(constraint), env))
    except ZeroDivisionError:
        return False
