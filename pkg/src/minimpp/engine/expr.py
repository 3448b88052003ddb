"""Row expressions evaluated vectorized over frames.

Money values are integer cents end-to-end; multiplying two scaled integers
raises the scale (price(2) * (100 - discount)(2) -> scale 4).  The planner
tracks output scales; expressions just do exact integer arithmetic.  The two
division nodes round half away from zero and evaluate through python ints, so
they are exact at any magnitude.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import PlanError
from ..frame import Frame

_YEAR_STARTS = None
_YEAR_BASE = 1970


def _year_starts() -> np.ndarray:
    global _YEAR_STARTS
    if _YEAR_STARTS is None:
        from datetime import date

        epoch = date(1970, 1, 1).toordinal()
        _YEAR_STARTS = np.array(
            [date(y, 1, 1).toordinal() - epoch for y in range(1970, 2071)],
            dtype=np.int64,
        )
    return _YEAR_STARTS


def year_of_days(arr: np.ndarray) -> np.ndarray:
    return _YEAR_BASE + np.searchsorted(_year_starts(), arr, side="right").astype(np.int64) - 1


def div_round_half_up(num: int, den: int) -> int:
    """Exact integer division rounded half away from zero; den > 0."""
    if num < 0:
        return -((2 * -num + den) // (2 * den))
    return (2 * num + den) // (2 * den)


class Expr:
    pass


@dataclass(frozen=True)
class Col(Expr):
    name: str


@dataclass(frozen=True)
class Lit(Expr):
    value: int | str


@dataclass(frozen=True)
class Cmp(Expr):
    op: str  # == != < <= > >=
    a: Expr
    b: Expr


@dataclass(frozen=True)
class And(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Or(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Not(Expr):
    x: Expr


@dataclass(frozen=True)
class InSet(Expr):
    x: Expr
    values: tuple


@dataclass(frozen=True)
class Like(Expr):
    x: Expr
    pattern: str
    negate: bool = False


@dataclass(frozen=True)
class Arith(Expr):
    op: str  # + - *
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Where(Expr):
    cond: Expr
    a: Expr
    b: Expr


@dataclass(frozen=True)
class YearOf(Expr):
    x: Expr


@dataclass(frozen=True)
class Prefix(Expr):
    """Leading ``length`` characters of a string column."""

    x: Expr
    length: int


@dataclass(frozen=True)
class DivRound(Expr):
    """a / b rounded half away from zero (exact, python-int path)."""

    a: Expr
    b: Expr


@dataclass(frozen=True)
class RatioScaled(Expr):
    """(a / b) * 10**scale rounded half away from zero (exact)."""

    a: Expr
    b: Expr
    scale: int


def like_mask(arr: np.ndarray, pattern: str) -> np.ndarray:
    """SQL LIKE with ``%`` wildcards over a unicode array.

    Single-segment shapes stay vectorized (startswith/endswith/find); the
    general multi-segment case falls back to a compiled regex per element.
    """
    segs = pattern.split("%")
    if len(segs) == 1:
        return arr == pattern
    first, last, inner = segs[0], segs[-1], [s for s in segs[1:-1] if s]
    if not inner:
        if first and not last:
            return np.char.startswith(arr, first)
        if last and not first:
            return np.char.endswith(arr, last)
        if not first and not last:
            return np.ones(len(arr), dtype=bool)  # bare '%'
    elif not first and not last and len(inner) == 1:
        return np.char.find(arr, inner[0]) >= 0
    pat = re.compile(
        "^" + ".*".join(re.escape(s) for s in segs) + "$",
        re.S,
    )
    return np.fromiter((pat.match(v) is not None for v in arr), bool, count=len(arr))


def evaluate(expr: Expr, frame: Frame) -> np.ndarray:
    n = frame.n
    if isinstance(expr, Col):
        return frame[expr.name]
    if isinstance(expr, Lit):
        if isinstance(expr.value, str):
            return np.full(n, expr.value)  # unicode width inferred from the literal
        return np.full(n, expr.value, dtype=np.int64)
    if isinstance(expr, Cmp):
        a, b = evaluate(expr.a, frame), evaluate(expr.b, frame)
        return {
            "==": lambda: a == b,
            "!=": lambda: a != b,
            "<": lambda: a < b,
            "<=": lambda: a <= b,
            ">": lambda: a > b,
            ">=": lambda: a >= b,
        }[expr.op]()
    if isinstance(expr, And):
        out = evaluate(expr.items[0], frame)
        for it in expr.items[1:]:
            out = out & evaluate(it, frame)
        return out
    if isinstance(expr, Or):
        out = evaluate(expr.items[0], frame)
        for it in expr.items[1:]:
            out = out | evaluate(it, frame)
        return out
    if isinstance(expr, Not):
        return ~evaluate(expr.x, frame)
    if isinstance(expr, InSet):
        return np.isin(evaluate(expr.x, frame), list(expr.values))
    if isinstance(expr, Like):
        m = like_mask(evaluate(expr.x, frame), expr.pattern)
        return ~m if expr.negate else m
    if isinstance(expr, Arith):
        a, b = evaluate(expr.a, frame), evaluate(expr.b, frame)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        return a * b
    if isinstance(expr, Where):
        return np.where(
            evaluate(expr.cond, frame), evaluate(expr.a, frame), evaluate(expr.b, frame)
        )
    if isinstance(expr, YearOf):
        return year_of_days(evaluate(expr.x, frame))
    if isinstance(expr, Prefix):
        arr = evaluate(expr.x, frame)
        return arr.astype(f"<U{expr.length}")
    if isinstance(expr, DivRound):
        a, b = evaluate(expr.a, frame), evaluate(expr.b, frame)
        return np.fromiter(
            (div_round_half_up(int(x), int(y)) for x, y in zip(a, b)),
            dtype=np.int64,
            count=n,
        )
    if isinstance(expr, RatioScaled):
        a, b = evaluate(expr.a, frame), evaluate(expr.b, frame)
        mul = 10**expr.scale
        return np.fromiter(
            (div_round_half_up(int(x) * mul, int(y)) for x, y in zip(a, b)),
            dtype=np.int64,
            count=n,
        )
    raise PlanError(f"cannot evaluate {expr!r}")


def columns_used(expr: Expr) -> set[str]:
    if isinstance(expr, Col):
        return {expr.name}
    if isinstance(expr, (Cmp, Arith, DivRound, RatioScaled)):
        return columns_used(expr.a) | columns_used(expr.b)
    if isinstance(expr, (And, Or)):
        out: set[str] = set()
        for it in expr.items:
            out |= columns_used(it)
        return out
    if isinstance(expr, Not):
        return columns_used(expr.x)
    if isinstance(expr, (InSet, Like, YearOf, Prefix)):
        return columns_used(expr.x)
    if isinstance(expr, Where):
        return columns_used(expr.cond) | columns_used(expr.a) | columns_used(expr.b)
    return set()


def expr_kind(expr: Expr, schema: dict[str, str]) -> str:
    """'int' or 'str' for the evaluated array."""
    if isinstance(expr, Col):
        return schema[expr.name]
    if isinstance(expr, Lit):
        return "str" if isinstance(expr.value, str) else "int"
    if isinstance(expr, (Cmp, And, Or, Not, InSet, Like, YearOf, Arith, DivRound, RatioScaled)):
        return "int"
    if isinstance(expr, Where):
        return expr_kind(expr.a, schema)
    if isinstance(expr, Prefix):
        return "str"
    raise PlanError(f"unknown expression {expr!r}")
