"""Polynomial text form.

Grammar (a restricted Python expression; ``^`` is accepted for powers)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*       division only by constants
    factor := ("-" | "+") factor | atom ("^" | "**") natural
    atom   := integer | decimal-free rational "p/q" | variable | "(" expr ")"

Variables are named by the caller, normally ``x1..xn`` for affine charts and
``X1, Y1, X2, Y2, ...`` for homogeneous coordinates; ``x`` alone means a
single affine coordinate.  Implicit multiplication is not supported.
"""
from __future__ import annotations

import ast
from typing import Sequence

from .algebra import MultiPoly
from .errors import ParseError


def affine_names(n: int) -> list:
    return ["x"] if n == 1 else [f"x{i + 1}" for i in range(n)]


def homogeneous_names(n: int) -> list:
    names = []
    for i in range(n):
        names += [f"X{i + 1}", f"Y{i + 1}"]
    return names


def parse_poly(text: str, names: Sequence[str]) -> MultiPoly:
    """Parse ``text`` into a MultiPoly whose variable i is ``names[i]``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}")
    src = text.replace("^", "**").strip()
    if not src:
        raise ParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}", f"column {exc.offset}") from exc
    index = {name: i for i, name in enumerate(names)}
    # a lone 'x' is accepted as x1 in one-variable affine charts
    if len(names) == 1 and names[0] == "x1":
        index.setdefault("x", 0)
    if len(names) == 1 and names[0] == "x":
        index.setdefault("x1", 0)
    arity = len(names)

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return MultiPoly.constant(node.value, arity)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ParseError(f"unknown variable {node.id!r} in {text!r}", f"column {node.col_offset + 1}")
            return MultiPoly.var(index[node.id], arity)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = walk(node.left)
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int) and exp.value >= 0):
                    raise ParseError(f"exponent must be a non-negative integer in {text!r}",
                                     f"column {exp.col_offset + 1}")
                return base ** exp.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise ParseError(f"division by a non-constant or zero in {text!r}",
                                     f"column {node.col_offset + 1}")
                return left.scale(1 / right.constant_value())
        raise ParseError(f"unsupported syntax in {text!r}", f"column {getattr(node, 'col_offset', 0) + 1}")

    return walk(tree)


def format_poly(p: MultiPoly, names: Sequence[str]) -> str:
    return p.to_str(names)


__all__ = ["parse_poly", "format_poly", "affine_names", "homogeneous_names"]
