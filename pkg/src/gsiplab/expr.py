"""Arithmetic expression trees with exact and interval evaluation.

An expression is an immutable tree over named variables with the node kinds
constant, variable, neg, add, sub, mul, div, integer power, and binary
min/max.  Three evaluators are provided: exact point evaluation, vectorized
evaluation over numpy arrays (used by the dense-grid oracle), and the natural
interval extension (used by branch-and-bound).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np


class EvaluationError(ValueError):
    """Unknown variable or division by zero while evaluating an expression."""


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of reals."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def encloses(self, other: "Interval", slack: float = 0.0) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        p = (self.lo * other.lo, self.lo * other.hi,
             self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    def divide(self, other: "Interval") -> "Interval":
        if other.lo <= 0.0 <= other.hi:
            raise EvaluationError("division by an interval containing zero")
        return self * Interval(1.0 / other.hi, 1.0 / other.lo)

    def power(self, n: int) -> "Interval":
        if n == 0:
            return Interval(1.0, 1.0)
        if n % 2 == 1:
            return Interval(self.lo ** n, self.hi ** n)
        # even power: tighten to [0, max^n] when the interval straddles zero
        hi_abs = max(abs(self.lo), abs(self.hi))
        if self.lo <= 0.0 <= self.hi:
            return Interval(0.0, hi_abs ** n)
        lo_abs = min(abs(self.lo), abs(self.hi))
        return Interval(lo_abs ** n, hi_abs ** n)

    def min_with(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), min(self.hi, other.hi))

    def max_with(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))


_ARITIES = {
    "const": 0, "var": 0, "neg": 1, "add": 2, "sub": 2,
    "mul": 2, "div": 2, "pow": 1, "min": 2, "max": 2,
}


@dataclass(frozen=True)
class Expr:
    """Immutable expression node.  Build via the constructor helpers below."""

    kind: str
    value: float = 0.0
    name: str = ""
    exponent: int = 0
    children: tuple["Expr", ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITIES:
            raise ValueError(f"unknown expression kind {self.kind!r}")
        if len(self.children) != _ARITIES[self.kind]:
            raise ValueError(f"{self.kind} expects {_ARITIES[self.kind]} children, "
                             f"got {len(self.children)}")
        if self.kind == "pow" and (not isinstance(self.exponent, int) or self.exponent < 0):
            raise ValueError("integer power exponent must be a nonnegative integer")

    # -- convenience operators ------------------------------------------
    def __add__(self, other): return add(self, as_expr(other))
    def __radd__(self, other): return add(as_expr(other), self)
    def __sub__(self, other): return sub(self, as_expr(other))
    def __rsub__(self, other): return sub(as_expr(other), self)
    def __mul__(self, other): return mul(self, as_expr(other))
    def __rmul__(self, other): return mul(as_expr(other), self)
    def __truediv__(self, other): return div(self, as_expr(other))
    def __rtruediv__(self, other): return div(as_expr(other), self)
    def __neg__(self): return neg(self)
    def __pow__(self, n): return ipow(self, n)

    def variables(self) -> frozenset:
        if self.kind == "var":
            return frozenset((self.name,))
        out = frozenset()
        for c in self.children:
            out |= c.variables()
        return out


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float)):
        return const(float(x))
    raise TypeError(f"cannot coerce {type(x).__name__} to Expr")


def const(v: float) -> Expr:
    return Expr("const", value=float(v))


def var(name: str) -> Expr:
    if not name:
        raise ValueError("variable name must be nonempty")
    return Expr("var", name=name)


def neg(e: Expr) -> Expr:
    # fold so that canonical trees never contain neg(const)
    if e.kind == "const":
        return const(-e.value)
    return Expr("neg", children=(e,))


def add(a: Expr, b: Expr) -> Expr:
    return Expr("add", children=(a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return Expr("sub", children=(a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return Expr("mul", children=(a, b))


def div(a: Expr, b: Expr) -> Expr:
    return Expr("div", children=(a, b))


def ipow(base: Expr, n: int) -> Expr:
    if not isinstance(n, int) or n < 0:
        raise ValueError("exponent must be a nonnegative integer")
    return Expr("pow", exponent=n, children=(base,))


def emin(a: Expr, b: Expr) -> Expr:
    return Expr("min", children=(a, b))


def emax(a: Expr, b: Expr) -> Expr:
    return Expr("max", children=(a, b))


def evaluate(e: Expr, point: Mapping[str, float]) -> float:
    """Exact recursive evaluation at a point (name -> value)."""
    k = e.kind
    if k == "const":
        return e.value
    if k == "var":
        try:
            return point[e.name]
        except KeyError:
            raise EvaluationError(f"unknown variable {e.name!r}") from None
    if k == "neg":
        return -evaluate(e.children[0], point)
    if k == "pow":
        return evaluate(e.children[0], point) ** e.exponent
    a = evaluate(e.children[0], point)
    b = evaluate(e.children[1], point)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        if b == 0.0:
            raise EvaluationError("division by zero")
        return a / b
    if k == "min":
        return min(a, b)
    return max(a, b)


def evaluate_array(e: Expr, point: Mapping[str, np.ndarray]):
    """Vectorized evaluation over numpy arrays (broadcasting applies)."""
    k = e.kind
    if k == "const":
        return e.value
    if k == "var":
        try:
            return point[e.name]
        except KeyError:
            raise EvaluationError(f"unknown variable {e.name!r}") from None
    if k == "neg":
        return -evaluate_array(e.children[0], point)
    if k == "pow":
        return evaluate_array(e.children[0], point) ** e.exponent
    a = evaluate_array(e.children[0], point)
    b = evaluate_array(e.children[1], point)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        if np.any(b == 0.0):
            raise EvaluationError("division by zero")
        return a / b
    if k == "min":
        return np.minimum(a, b)
    return np.maximum(a, b)


def interval_eval(e: Expr, box) -> Interval:
    """Natural interval extension over a box.

    `box` is either a mapping name -> Interval or an object exposing
    ``intervals()`` returning such a mapping (e.g. BoxDomain).
    """
    if not isinstance(box, Mapping):
        box = box.intervals()
    return _interval_rec(e, box)


def _interval_rec(e: Expr, env: Mapping[str, Interval]) -> Interval:
    k = e.kind
    if k == "const":
        return Interval(e.value, e.value)
    if k == "var":
        try:
            return env[e.name]
        except KeyError:
            raise EvaluationError(f"unknown variable {e.name!r}") from None
    if k == "neg":
        return -_interval_rec(e.children[0], env)
    if k == "pow":
        return _interval_rec(e.children[0], env).power(e.exponent)
    a = _interval_rec(e.children[0], env)
    b = _interval_rec(e.children[1], env)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        return a.divide(b)
    if k == "min":
        return a.min_with(b)
    return a.max_with(b)


def substitute(e: Expr, bindings: Mapping[str, float]) -> Expr:
    """Replace variables by constants and fold constant subtrees."""
    k = e.kind
    if k == "const":
        return e
    if k == "var":
        if e.name in bindings:
            return const(bindings[e.name])
        return e
    children = tuple(substitute(c, bindings) for c in e.children)
    node = Expr(k, value=e.value, name=e.name, exponent=e.exponent, children=children)
    if all(c.kind == "const" for c in children):
        if k == "div" and children[1].value == 0.0:
            return node  # leave the error to evaluation time
        return const(evaluate(node, {}))
    return node
