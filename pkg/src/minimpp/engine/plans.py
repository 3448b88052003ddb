"""Physical plan operator tree.

Operators run in one of two contexts: ``dist`` (one partition per serving
node) or ``coord`` (a single frame on the coordinator).  Gather moves a
subtree's output to the coordinator; Repartition re-hashes a distributed
stream onto the nodes serving the target key's buckets.  Exactly one
FinalMerge sits at the root; it renders the coordinator frame into the
query's declared output schema.

``check_plan`` walks a tree bottom-up verifying that every referenced column
is produced below and that operator contexts line up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PlanError
from ..schema import STR, table
from ..storage import Pred
from .expr import Expr, columns_used, expr_kind

DIST = "dist"
COORD = "coord"


class PlanNode:
    pass


@dataclass(frozen=True)
class SegmentScan(PlanNode):
    table: str
    columns: tuple[str, ...]
    preds: tuple[Pred, ...] = ()


@dataclass(frozen=True)
class Filter(PlanNode):
    child: PlanNode
    cond: Expr


@dataclass(frozen=True)
class Project(PlanNode):
    """Compute/rename: output columns become exactly ``outputs``."""

    child: PlanNode
    outputs: tuple[tuple[str, Expr], ...]


@dataclass(frozen=True)
class HashJoin(PlanNode):
    left: PlanNode
    right: PlanNode
    left_keys: tuple[str, ...]
    right_keys: tuple[str, ...]
    how: str = "inner"  # inner | left | semi | anti
    broadcast: bool = False  # right side is a coordinator frame shipped to all nodes
    fill: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class HashAggregate(PlanNode):
    child: PlanNode
    keys: tuple[str, ...]
    aggs: tuple[tuple[str, str, Expr | None], ...]  # (out, sum|count|min|max, expr)


@dataclass(frozen=True)
class Repartition(PlanNode):
    child: PlanNode
    key: str


@dataclass(frozen=True)
class Gather(PlanNode):
    child: PlanNode


@dataclass(frozen=True)
class ScalarAttach(PlanNode):
    """Append the single row of ``sub`` as constant columns of ``child``."""

    child: PlanNode
    sub: PlanNode


@dataclass(frozen=True)
class Sort(PlanNode):
    """Canonical order: declared keys first, ties broken by the full row."""

    child: PlanNode
    keys: tuple[tuple[str, bool], ...]  # (column, ascending)


@dataclass(frozen=True)
class Limit(PlanNode):
    child: PlanNode
    n: int


@dataclass(frozen=True)
class FinalMerge(PlanNode):
    """Root: render the coordinator frame as a ResultSet.

    ``output`` pairs column names with render kinds: int, str, date, or
    dec:<scale> for scaled-integer decimals.
    """

    child: PlanNode
    output: tuple[tuple[str, str], ...]


def _scan_schema(node: SegmentScan) -> dict[str, str]:
    tdef = table(node.table)
    for p in node.preds:
        tdef.column(p.col)
    return {
        name: ("str" if tdef.column(name).kind == STR else "int")
        for name in node.columns
    }


def check_plan(plan: PlanNode) -> tuple[dict[str, str], str]:
    """(schema, context) of a subtree; raises PlanError on inconsistency."""
    if isinstance(plan, SegmentScan):
        return _scan_schema(plan), DIST

    if isinstance(plan, Filter):
        schema, ctx = check_plan(plan.child)
        _need(schema, columns_used(plan.cond), "Filter")
        return schema, ctx

    if isinstance(plan, Project):
        schema, ctx = check_plan(plan.child)
        out = {}
        for name, expr in plan.outputs:
            _need(schema, columns_used(expr), f"Project[{name}]")
            if name in out:
                raise PlanError(f"Project: duplicate output {name!r}")
            out[name] = expr_kind(expr, schema)
        return out, ctx

    if isinstance(plan, HashJoin):
        ls, lctx = check_plan(plan.left)
        rs, rctx = check_plan(plan.right)
        _need(ls, set(plan.left_keys), "HashJoin.left")
        _need(rs, set(plan.right_keys), "HashJoin.right")
        if plan.broadcast:
            if rctx != COORD:
                raise PlanError("broadcast join: right side must be gathered")
            ctx = lctx
        else:
            if lctx != rctx:
                raise PlanError("co-partitioned join: sides in different contexts")
            ctx = lctx
        if plan.how in ("semi", "anti"):
            return ls, ctx
        out = dict(ls)
        for name, kind in rs.items():
            if name in plan.right_keys:
                continue
            if name in out:
                raise PlanError(f"HashJoin: duplicate column {name!r}")
            out[name] = kind
        return out, ctx

    if isinstance(plan, HashAggregate):
        schema, ctx = check_plan(plan.child)
        _need(schema, set(plan.keys), "HashAggregate keys")
        out = {k: schema[k] for k in plan.keys}
        for name, fn, expr in plan.aggs:
            if fn not in ("sum", "count", "min", "max"):
                raise PlanError(f"unknown aggregate fn {fn!r}")
            if expr is not None:
                _need(schema, columns_used(expr), f"HashAggregate[{name}]")
            if name in out:
                raise PlanError(f"HashAggregate: duplicate output {name!r}")
            out[name] = "int"
        return out, ctx

    if isinstance(plan, Repartition):
        schema, ctx = check_plan(plan.child)
        if ctx != DIST:
            raise PlanError("Repartition applies to distributed streams")
        _need(schema, {plan.key}, "Repartition")
        return schema, DIST

    if isinstance(plan, Gather):
        schema, ctx = check_plan(plan.child)
        if ctx != DIST:
            raise PlanError("Gather applies to distributed streams")
        return schema, COORD

    if isinstance(plan, ScalarAttach):
        schema, ctx = check_plan(plan.child)
        sub_schema, sub_ctx = check_plan(plan.sub)
        if ctx != COORD or sub_ctx != COORD:
            raise PlanError("ScalarAttach runs on the coordinator")
        out = dict(schema)
        for name, kind in sub_schema.items():
            if name in out:
                raise PlanError(f"ScalarAttach: duplicate column {name!r}")
            out[name] = kind
        return out, COORD

    if isinstance(plan, Sort):
        schema, ctx = check_plan(plan.child)
        if ctx != COORD:
            raise PlanError("Sort runs on the coordinator")
        _need(schema, {k for k, _ in plan.keys}, "Sort")
        return schema, COORD

    if isinstance(plan, Limit):
        schema, ctx = check_plan(plan.child)
        if ctx != COORD:
            raise PlanError("Limit runs on the coordinator")
        return schema, COORD

    if isinstance(plan, FinalMerge):
        schema, ctx = check_plan(plan.child)
        if ctx != COORD:
            raise PlanError("FinalMerge consumes a coordinator frame")
        for name, kind in plan.output:
            if name not in schema:
                raise PlanError(f"FinalMerge: column {name!r} not produced below")
            base = "str" if kind == "str" else "int"
            if schema[name] != base:
                raise PlanError(f"FinalMerge: column {name!r} kind mismatch")
        return dict(plan.output), COORD

    raise PlanError(f"unknown plan node {type(plan).__name__}")


def _need(schema: dict[str, str], cols: set[str], where: str) -> None:
    missing = cols - set(schema)
    if missing:
        raise PlanError(f"{where}: columns {sorted(missing)} not produced below")


def walk(plan: PlanNode):
    yield plan
    for attr in ("child", "left", "right", "sub"):
        sub = getattr(plan, attr, None)
        if isinstance(sub, PlanNode):
            yield from walk(sub)


def merge_aggs(aggs) -> tuple:
    """Coordinator-side re-aggregation spec for partial aggregates."""
    from .expr import Col

    out = []
    for name, fn, _ in aggs:
        merge_fn = "sum" if fn in ("sum", "count") else fn
        out.append((name, merge_fn, Col(name)))
    return tuple(out)
