"""The 22 decision-support queries as built-in plan constructors.

Each query is a plan builder plus substitution parameters with validation
defaults, so runs are reproducible without a randomizer; seeded parameter
variants draw from the documented domains (used by concurrent throughput
streams).

Join placement: orders/lineitem are co-segmented on the order key and join
node-locally; part/partsupp likewise on the part key.  Other dimension joins
broadcast the dimension when its estimated row count is at most the broadcast
threshold (default 100k rows) and otherwise repartition the fact side onto
the dimension's native segmentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .. import datagen as dg
from ..errors import ParamError
from ..rng import mix
from ..storage import Pred
from .expr import (
    And,
    Arith,
    Cmp,
    Col,
    DivRound,
    InSet,
    Like,
    Lit,
    Not,
    Or,
    Prefix,
    RatioScaled,
    Where,
    YearOf,
)
from .plans import (
    FinalMerge,
    Filter,
    Gather,
    HashAggregate,
    HashJoin,
    Limit,
    PlanNode,
    Project,
    Repartition,
    ScalarAttach,
    SegmentScan,
    Sort,
    merge_aggs,
)

DEFAULT_BROADCAST_THRESHOLD = 100_000


@dataclass(frozen=True)
class PlanContext:
    sf: Fraction
    broadcast_threshold: int = DEFAULT_BROADCAST_THRESHOLD

    def rows(self, table: str) -> int:
        return dg.row_count(table, self.sf)


def _days(y: int, m: int, d: int = 1) -> int:
    return dg.date_to_days(y, m, d)


def _add_months(y: int, m: int, n: int) -> tuple[int, int]:
    k = (y * 12 + (m - 1)) + n
    return k // 12, k % 12 + 1


def _month_range(y: int, m: int, months: int) -> tuple[int, int]:
    """[start, end) day span of `months` months from y-m-01."""
    y2, m2 = _add_months(y, m, months)
    return _days(y, m), _days(y2, m2)


# expression shorthands
def _eq(a, b):
    return Cmp("==", a, b)


def _rev():
    # extendedprice * (1 - discount), scale 4
    return Arith("*", Col("l_extendedprice"), Arith("-", Lit(100), Col("l_discount")))


def _charge():
    # rev * (1 + tax), scale 6
    return Arith("*", _rev(), Arith("+", Lit(100), Col("l_tax")))


def _agg_merge(child_dist: PlanNode, keys: tuple, aggs: tuple) -> PlanNode:
    """Partial aggregate per node, gather, re-aggregate on the coordinator."""
    partial = HashAggregate(child_dist, keys, aggs)
    return HashAggregate(Gather(partial), keys, merge_aggs(aggs))


def _dim_join(
    ctx: PlanContext,
    fact: PlanNode,
    fact_keys: tuple[str, ...],
    dim: PlanNode,
    dim_keys: tuple[str, ...],
    dim_rows: int,
    how: str = "inner",
    fill: tuple = (),
    realign: str | None = None,
) -> PlanNode:
    """Join a distributed fact against a dimension subplan.

    Small dimensions are gathered and broadcast; large ones keep their native
    segmentation while the fact side repartitions onto the first join key.
    ``realign`` re-hashes the result back (used when a later join needs the
    original co-segmentation).
    """
    if dim_rows <= ctx.broadcast_threshold:
        return HashJoin(fact, Gather(dim), fact_keys, dim_keys, how, broadcast=True, fill=fill)
    moved = Repartition(fact, fact_keys[0])
    joined = HashJoin(moved, dim, fact_keys, dim_keys, how, fill=fill)
    if realign:
        joined = Repartition(joined, realign)
    return joined


def _nation_of_region(region_name: str) -> PlanNode:
    """Coordinator frame [n_nationkey, n_name] of one region's nations."""
    nat = Gather(SegmentScan("nation", ("n_nationkey", "n_name", "n_regionkey")))
    reg = Gather(SegmentScan("region", ("r_regionkey",), (Pred("r_name", "eq", region_name),)))
    return HashJoin(nat, reg, ("n_regionkey",), ("r_regionkey",), "semi")


def _nation_coord(*cols: str, pred: Pred | None = None) -> PlanNode:
    return Gather(SegmentScan("nation", tuple(cols), (pred,) if pred else ()))


# ---------------------------------------------------------------------------
# plan builders
# ---------------------------------------------------------------------------


def _q1(ctx: PlanContext, p: dict) -> FinalMerge:
    cutoff = _days(1998, 12, 1) - p["delta_days"]
    scan = SegmentScan(
        "lineitem",
        ("l_returnflag", "l_linestatus", "l_quantity", "l_extendedprice", "l_discount", "l_tax"),
        (Pred("l_shipdate", "le", cutoff),),
    )
    aggs = (
        ("sum_qty", "sum", Col("l_quantity")),
        ("sum_base_price", "sum", Col("l_extendedprice")),
        ("sum_disc_price", "sum", _rev()),
        ("sum_charge", "sum", _charge()),
        ("sum_disc", "sum", Col("l_discount")),
        ("count_order", "count", None),
    )
    merged = _agg_merge(scan, ("l_returnflag", "l_linestatus"), aggs)
    proj = Project(
        merged,
        (
            ("l_returnflag", Col("l_returnflag")),
            ("l_linestatus", Col("l_linestatus")),
            ("sum_qty", Col("sum_qty")),
            ("sum_base_price", Col("sum_base_price")),
            ("sum_disc_price", Col("sum_disc_price")),
            ("sum_charge", Col("sum_charge")),
            ("avg_qty", DivRound(Col("sum_qty"), Col("count_order"))),
            ("avg_price", DivRound(Col("sum_base_price"), Col("count_order"))),
            ("avg_disc", DivRound(Col("sum_disc"), Col("count_order"))),
            ("count_order", Col("count_order")),
        ),
    )
    ordered = Sort(proj, (("l_returnflag", True), ("l_linestatus", True)))
    return FinalMerge(
        ordered,
        (
            ("l_returnflag", "str"),
            ("l_linestatus", "str"),
            ("sum_qty", "dec:2"),
            ("sum_base_price", "dec:2"),
            ("sum_disc_price", "dec:4"),
            ("sum_charge", "dec:6"),
            ("avg_qty", "dec:2"),
            ("avg_price", "dec:2"),
            ("avg_disc", "dec:2"),
            ("count_order", "int"),
        ),
    )


def _q2(ctx: PlanContext, p: dict) -> FinalMerge:
    nat_eu = _nation_of_region(p["region"])
    sup = Gather(
        SegmentScan(
            "supplier",
            ("s_suppkey", "s_name", "s_address", "s_nationkey", "s_phone", "s_acctbal", "s_comment"),
        )
    )
    sup_eu = HashJoin(sup, nat_eu, ("s_nationkey",), ("n_nationkey",), "inner")
    ps = SegmentScan("partsupp", ("ps_partkey", "ps_suppkey", "ps_supplycost"))
    ps_eu = HashJoin(ps, sup_eu, ("ps_suppkey",), ("s_suppkey",), "inner", broadcast=True)
    mins = HashAggregate(ps_eu, ("ps_partkey",), (("min_cost", "min", Col("ps_supplycost")),))
    cand = Filter(
        HashJoin(ps_eu, mins, ("ps_partkey",), ("ps_partkey",), "inner"),
        _eq(Col("ps_supplycost"), Col("min_cost")),
    )
    part_f = Filter(
        SegmentScan("part", ("p_partkey", "p_mfgr", "p_type"), (Pred("p_size", "eq", p["size"]),)),
        Like(Col("p_type"), "%" + p["type_suffix"]),
    )
    joined = HashJoin(cand, part_f, ("ps_partkey",), ("p_partkey",), "inner")
    proj = Project(
        Gather(joined),
        (
            ("s_acctbal", Col("s_acctbal")),
            ("s_name", Col("s_name")),
            ("n_name", Col("n_name")),
            ("p_partkey", Col("ps_partkey")),
            ("p_mfgr", Col("p_mfgr")),
            ("s_address", Col("s_address")),
            ("s_phone", Col("s_phone")),
            ("s_comment", Col("s_comment")),
        ),
    )
    ordered = Limit(
        Sort(
            proj,
            (("s_acctbal", False), ("n_name", True), ("s_name", True), ("p_partkey", True)),
        ),
        100,
    )
    return FinalMerge(
        ordered,
        (
            ("s_acctbal", "dec:2"),
            ("s_name", "str"),
            ("n_name", "str"),
            ("p_partkey", "int"),
            ("p_mfgr", "str"),
            ("s_address", "str"),
            ("s_phone", "str"),
            ("s_comment", "str"),
        ),
    )


def _q3(ctx: PlanContext, p: dict) -> FinalMerge:
    day = p["date"]
    cust = SegmentScan("customer", ("c_custkey",), (Pred("c_mktsegment", "eq", p["segment"]),))
    orders = SegmentScan(
        "orders",
        ("o_orderkey", "o_custkey", "o_orderdate", "o_shippriority"),
        (Pred("o_orderdate", "lt", day),),
    )
    ordc = _dim_join(
        ctx, orders, ("o_custkey",), cust, ("c_custkey",), ctx.rows("customer"),
        how="semi", realign="o_orderkey",
    )
    ordc = Project(
        ordc,
        (
            ("o_orderkey", Col("o_orderkey")),
            ("o_orderdate", Col("o_orderdate")),
            ("o_shippriority", Col("o_shippriority")),
        ),
    )
    li = SegmentScan(
        "lineitem",
        ("l_orderkey", "l_extendedprice", "l_discount"),
        (Pred("l_shipdate", "gt", day),),
    )
    joined = HashJoin(li, ordc, ("l_orderkey",), ("o_orderkey",), "inner")
    merged = _agg_merge(
        joined,
        ("l_orderkey", "o_orderdate", "o_shippriority"),
        (("revenue", "sum", _rev()),),
    )
    ordered = Limit(Sort(merged, (("revenue", False), ("o_orderdate", True))), 10)
    return FinalMerge(
        ordered,
        (("l_orderkey", "int"), ("revenue", "dec:4"), ("o_orderdate", "date"), ("o_shippriority", "int")),
    )


def _q4(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _month_range(p["year"], p["month"], 3)
    late = HashAggregate(
        Project(
            Filter(
                SegmentScan("lineitem", ("l_orderkey", "l_commitdate", "l_receiptdate")),
                Cmp("<", Col("l_commitdate"), Col("l_receiptdate")),
            ),
            (("l_orderkey", Col("l_orderkey")),),
        ),
        ("l_orderkey",),
        (),
    )
    orders = SegmentScan(
        "orders",
        ("o_orderkey", "o_orderpriority"),
        (Pred("o_orderdate", "ge", lo), Pred("o_orderdate", "lt", hi)),
    )
    semi = HashJoin(orders, late, ("o_orderkey",), ("l_orderkey",), "semi")
    merged = _agg_merge(semi, ("o_orderpriority",), (("order_count", "count", None),))
    return FinalMerge(
        Sort(merged, (("o_orderpriority", True),)),
        (("o_orderpriority", "str"), ("order_count", "int")),
    )


def _q5(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    orders = SegmentScan(
        "orders", ("o_orderkey", "o_custkey"),
        (Pred("o_orderdate", "ge", lo), Pred("o_orderdate", "lt", hi)),
    )
    cust = SegmentScan("customer", ("c_custkey", "c_nationkey"))
    ordc = _dim_join(
        ctx, orders, ("o_custkey",), cust, ("c_custkey",), ctx.rows("customer"),
        realign="o_orderkey",
    )
    li = SegmentScan("lineitem", ("l_orderkey", "l_suppkey", "l_extendedprice", "l_discount"))
    j = HashJoin(li, ordc, ("l_orderkey",), ("o_orderkey",), "inner")
    supp = SegmentScan("supplier", ("s_suppkey", "s_nationkey"))
    j2 = _dim_join(ctx, j, ("l_suppkey",), supp, ("s_suppkey",), ctx.rows("supplier"))
    local = Filter(j2, _eq(Col("c_nationkey"), Col("s_nationkey")))
    j3 = HashJoin(
        local, _nation_of_region(p["region"]), ("s_nationkey",), ("n_nationkey",),
        "inner", broadcast=True,
    )
    merged = _agg_merge(j3, ("n_name",), (("revenue", "sum", _rev()),))
    return FinalMerge(
        Sort(merged, (("revenue", False),)), (("n_name", "str"), ("revenue", "dec:4"))
    )


def _q6(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    d = p["discount_cents"]
    scan = SegmentScan(
        "lineitem",
        ("l_extendedprice", "l_discount"),
        (
            Pred("l_shipdate", "ge", lo),
            Pred("l_shipdate", "lt", hi),
            Pred("l_discount", "between", (d - 1, d + 1)),
            Pred("l_quantity", "lt", p["quantity"] * 100),
        ),
    )
    merged = _agg_merge(
        scan, (), (("revenue", "sum", Arith("*", Col("l_extendedprice"), Col("l_discount"))),)
    )
    return FinalMerge(merged, (("revenue", "dec:4"),))


def _q7(ctx: PlanContext, p: dict) -> FinalMerge:
    n1, n2 = p["nation1"], p["nation2"]
    pair = Pred("n_name", "isin", (n1, n2))
    supp_n = Project(
        HashJoin(
            SegmentScan("supplier", ("s_suppkey", "s_nationkey")),
            _nation_coord("n_nationkey", "n_name", pred=pair),
            ("s_nationkey",), ("n_nationkey",), "inner", broadcast=True,
        ),
        (("s_suppkey", Col("s_suppkey")), ("supp_nation", Col("n_name"))),
    )
    cust_n = Project(
        HashJoin(
            SegmentScan("customer", ("c_custkey", "c_nationkey")),
            _nation_coord("n_nationkey", "n_name", pred=pair),
            ("c_nationkey",), ("n_nationkey",), "inner", broadcast=True,
        ),
        (("c_custkey", Col("c_custkey")), ("cust_nation", Col("n_name"))),
    )
    li = SegmentScan(
        "lineitem",
        ("l_orderkey", "l_suppkey", "l_extendedprice", "l_discount", "l_shipdate"),
        (Pred("l_shipdate", "between", (_days(1995, 1, 1), _days(1996, 12, 31))),),
    )
    orders = SegmentScan("orders", ("o_orderkey", "o_custkey"))
    j = HashJoin(li, orders, ("l_orderkey",), ("o_orderkey",), "inner")
    j2 = _dim_join(ctx, j, ("o_custkey",), cust_n, ("c_custkey",), ctx.rows("customer"))
    j3 = _dim_join(ctx, j2, ("l_suppkey",), supp_n, ("s_suppkey",), ctx.rows("supplier"))
    want = Filter(
        j3,
        Or(
            (
                And((_eq(Col("supp_nation"), Lit(n1)), _eq(Col("cust_nation"), Lit(n2)))),
                And((_eq(Col("supp_nation"), Lit(n2)), _eq(Col("cust_nation"), Lit(n1)))),
            )
        ),
    )
    proj = Project(
        want,
        (
            ("supp_nation", Col("supp_nation")),
            ("cust_nation", Col("cust_nation")),
            ("l_year", YearOf(Col("l_shipdate"))),
            ("volume", _rev()),
        ),
    )
    merged = _agg_merge(
        proj, ("supp_nation", "cust_nation", "l_year"), (("revenue", "sum", Col("volume")),)
    )
    ordered = Sort(merged, (("supp_nation", True), ("cust_nation", True), ("l_year", True)))
    return FinalMerge(
        ordered,
        (("supp_nation", "str"), ("cust_nation", "str"), ("l_year", "int"), ("revenue", "dec:4")),
    )


def _q8(ctx: PlanContext, p: dict) -> FinalMerge:
    part_f = SegmentScan("part", ("p_partkey",), (Pred("p_type", "eq", p["type"]),))
    li = SegmentScan(
        "lineitem", ("l_orderkey", "l_partkey", "l_suppkey", "l_extendedprice", "l_discount")
    )
    lip = _dim_join(
        ctx, li, ("l_partkey",), part_f, ("p_partkey",), ctx.rows("part"),
        how="semi", realign="l_orderkey",
    )
    orders = SegmentScan(
        "orders",
        ("o_orderkey", "o_custkey", "o_orderdate"),
        (Pred("o_orderdate", "between", (_days(1995, 1, 1), _days(1996, 12, 31))),),
    )
    j = HashJoin(lip, orders, ("l_orderkey",), ("o_orderkey",), "inner")
    nat_region = _nation_of_region(p["region"])
    cust_region = Project(
        HashJoin(
            SegmentScan("customer", ("c_custkey", "c_nationkey")),
            nat_region, ("c_nationkey",), ("n_nationkey",), "semi", broadcast=True,
        ),
        (("c_custkey", Col("c_custkey")),),
    )
    j2 = _dim_join(ctx, j, ("o_custkey",), cust_region, ("c_custkey",), ctx.rows("customer"), how="semi")
    supp_n = Project(
        HashJoin(
            SegmentScan("supplier", ("s_suppkey", "s_nationkey")),
            _nation_coord("n_nationkey", "n_name"),
            ("s_nationkey",), ("n_nationkey",), "inner", broadcast=True,
        ),
        (("s_suppkey", Col("s_suppkey")), ("supp_nation", Col("n_name"))),
    )
    j3 = _dim_join(ctx, j2, ("l_suppkey",), supp_n, ("s_suppkey",), ctx.rows("supplier"))
    proj = Project(
        j3,
        (
            ("o_year", YearOf(Col("o_orderdate"))),
            ("volume", _rev()),
            ("nation_volume", Where(_eq(Col("supp_nation"), Lit(p["nation"])), _rev(), Lit(0))),
        ),
    )
    merged = _agg_merge(
        proj,
        ("o_year",),
        (("total_volume", "sum", Col("volume")), ("nation_volume", "sum", Col("nation_volume"))),
    )
    share = Project(
        merged,
        (
            ("o_year", Col("o_year")),
            ("mkt_share", RatioScaled(Col("nation_volume"), Col("total_volume"), 6)),
        ),
    )
    return FinalMerge(Sort(share, (("o_year", True),)), (("o_year", "int"), ("mkt_share", "dec:6")))


def _q9(ctx: PlanContext, p: dict) -> FinalMerge:
    part_f = Project(
        Filter(
            SegmentScan("part", ("p_partkey", "p_name")),
            Like(Col("p_name"), f"%{p['color']}%"),
        ),
        (("p_partkey", Col("p_partkey")),),
    )
    ps = SegmentScan("partsupp", ("ps_partkey", "ps_suppkey", "ps_supplycost"))
    ps_f = HashJoin(ps, part_f, ("ps_partkey",), ("p_partkey",), "semi")
    li = SegmentScan(
        "lineitem",
        ("l_orderkey", "l_partkey", "l_suppkey", "l_quantity", "l_extendedprice", "l_discount"),
    )
    lips = _dim_join(
        ctx, li, ("l_partkey", "l_suppkey"), ps_f, ("ps_partkey", "ps_suppkey"),
        ctx.rows("partsupp"), realign="l_orderkey",
    )
    orders = SegmentScan("orders", ("o_orderkey", "o_orderdate"))
    j = HashJoin(lips, orders, ("l_orderkey",), ("o_orderkey",), "inner")
    supp_n = Project(
        HashJoin(
            SegmentScan("supplier", ("s_suppkey", "s_nationkey")),
            _nation_coord("n_nationkey", "n_name"),
            ("s_nationkey",), ("n_nationkey",), "inner", broadcast=True,
        ),
        (("s_suppkey", Col("s_suppkey")), ("nation", Col("n_name"))),
    )
    j2 = _dim_join(ctx, j, ("l_suppkey",), supp_n, ("s_suppkey",), ctx.rows("supplier"))
    proj = Project(
        j2,
        (
            ("nation", Col("nation")),
            ("o_year", YearOf(Col("o_orderdate"))),
            (
                "amount",
                Arith("-", _rev(), Arith("*", Col("ps_supplycost"), Col("l_quantity"))),
            ),
        ),
    )
    merged = _agg_merge(proj, ("nation", "o_year"), (("sum_profit", "sum", Col("amount")),))
    ordered = Sort(merged, (("nation", True), ("o_year", False)))
    return FinalMerge(
        ordered, (("nation", "str"), ("o_year", "int"), ("sum_profit", "dec:4"))
    )


def _q10(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _month_range(p["year"], p["month"], 3)
    orders = SegmentScan(
        "orders", ("o_orderkey", "o_custkey"),
        (Pred("o_orderdate", "ge", lo), Pred("o_orderdate", "lt", hi)),
    )
    li = SegmentScan(
        "lineitem",
        ("l_orderkey", "l_extendedprice", "l_discount"),
        (Pred("l_returnflag", "eq", "R"),),
    )
    j = HashJoin(li, orders, ("l_orderkey",), ("o_orderkey",), "inner")
    custrev = _agg_merge(j, ("o_custkey",), (("revenue", "sum", _rev()),))
    cust = Gather(
        SegmentScan(
            "customer",
            ("c_custkey", "c_name", "c_acctbal", "c_address", "c_phone", "c_comment", "c_nationkey"),
        )
    )
    cj = HashJoin(custrev, cust, ("o_custkey",), ("c_custkey",), "inner")
    nj = HashJoin(cj, _nation_coord("n_nationkey", "n_name"), ("c_nationkey",), ("n_nationkey",), "inner")
    proj = Project(
        nj,
        (
            ("c_custkey", Col("o_custkey")),
            ("c_name", Col("c_name")),
            ("revenue", Col("revenue")),
            ("c_acctbal", Col("c_acctbal")),
            ("n_name", Col("n_name")),
            ("c_address", Col("c_address")),
            ("c_phone", Col("c_phone")),
            ("c_comment", Col("c_comment")),
        ),
    )
    ordered = Limit(Sort(proj, (("revenue", False),)), 20)
    return FinalMerge(
        ordered,
        (
            ("c_custkey", "int"),
            ("c_name", "str"),
            ("revenue", "dec:4"),
            ("c_acctbal", "dec:2"),
            ("n_name", "str"),
            ("c_address", "str"),
            ("c_phone", "str"),
            ("c_comment", "str"),
        ),
    )


def _q11_value_plan(ctx: PlanContext, p: dict) -> PlanNode:
    nat = _nation_coord("n_nationkey", pred=Pred("n_name", "eq", p["nation"]))
    supp = Project(
        HashJoin(
            SegmentScan("supplier", ("s_suppkey", "s_nationkey")),
            nat, ("s_nationkey",), ("n_nationkey",), "semi", broadcast=True,
        ),
        (("s_suppkey", Col("s_suppkey")),),
    )
    ps = SegmentScan("partsupp", ("ps_partkey", "ps_suppkey", "ps_availqty", "ps_supplycost"))
    return _dim_join(ctx, ps, ("ps_suppkey",), supp, ("s_suppkey",), ctx.rows("supplier"), how="semi")


def _q11(ctx: PlanContext, p: dict) -> FinalMerge:
    value = Arith("*", Col("ps_supplycost"), Col("ps_availqty"))  # scale 2
    per_part = _agg_merge(_q11_value_plan(ctx, p), ("ps_partkey",), (("value", "sum", value),))
    total = _agg_merge(_q11_value_plan(ctx, p), (), (("total_value", "sum", value),))
    frac = Fraction(1, 10_000) / ctx.sf
    attached = ScalarAttach(per_part, total)
    kept = Filter(
        attached,
        Cmp(
            ">",
            Arith("*", Col("value"), Lit(frac.denominator)),
            Arith("*", Col("total_value"), Lit(frac.numerator)),
        ),
    )
    proj = Project(kept, (("ps_partkey", Col("ps_partkey")), ("value", Col("value"))))
    return FinalMerge(
        Sort(proj, (("value", False),)), (("ps_partkey", "int"), ("value", "dec:2"))
    )


def _q12(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    li = Filter(
        SegmentScan(
            "lineitem",
            ("l_orderkey", "l_shipmode", "l_shipdate", "l_commitdate", "l_receiptdate"),
            (
                Pred("l_shipmode", "isin", (p["mode1"], p["mode2"])),
                Pred("l_receiptdate", "ge", lo),
                Pred("l_receiptdate", "lt", hi),
            ),
        ),
        And(
            (
                Cmp("<", Col("l_commitdate"), Col("l_receiptdate")),
                Cmp("<", Col("l_shipdate"), Col("l_commitdate")),
            )
        ),
    )
    orders = SegmentScan("orders", ("o_orderkey", "o_orderpriority"))
    j = HashJoin(li, orders, ("l_orderkey",), ("o_orderkey",), "inner")
    high = InSet(Col("o_orderpriority"), ("1-URGENT", "2-HIGH"))
    proj = Project(
        j,
        (
            ("l_shipmode", Col("l_shipmode")),
            ("high_line", Where(high, Lit(1), Lit(0))),
            ("low_line", Where(high, Lit(0), Lit(1))),
        ),
    )
    merged = _agg_merge(
        proj,
        ("l_shipmode",),
        (
            ("high_line_count", "sum", Col("high_line")),
            ("low_line_count", "sum", Col("low_line")),
        ),
    )
    return FinalMerge(
        Sort(merged, (("l_shipmode", True),)),
        (("l_shipmode", "str"), ("high_line_count", "int"), ("low_line_count", "int")),
    )


def _q13(ctx: PlanContext, p: dict) -> FinalMerge:
    pattern = f"%{p['word1']}%{p['word2']}%"
    orders = Project(
        Filter(
            SegmentScan("orders", ("o_orderkey", "o_custkey", "o_comment")),
            Like(Col("o_comment"), pattern, negate=True),
        ),
        (("o_custkey", Col("o_custkey")),),
    )
    counts = HashAggregate(
        Repartition(orders, "o_custkey"), ("o_custkey",), (("c_count", "count", None),)
    )
    cust = SegmentScan("customer", ("c_custkey",))
    j = HashJoin(
        cust, counts, ("c_custkey",), ("o_custkey",), "left", fill=(("c_count", 0),)
    )
    merged = _agg_merge(j, ("c_count",), (("custdist", "count", None),))
    ordered = Sort(merged, (("custdist", False), ("c_count", False)))
    return FinalMerge(ordered, (("c_count", "int"), ("custdist", "int")))


def _q14(ctx: PlanContext, p: dict) -> FinalMerge:
    lo, hi = _month_range(p["year"], p["month"], 1)
    li = SegmentScan(
        "lineitem",
        ("l_partkey", "l_extendedprice", "l_discount"),
        (Pred("l_shipdate", "ge", lo), Pred("l_shipdate", "lt", hi)),
    )
    part = SegmentScan("part", ("p_partkey", "p_type"))
    j = _dim_join(ctx, li, ("l_partkey",), part, ("p_partkey",), ctx.rows("part"))
    proj = Project(
        j,
        (
            ("promo", Where(Like(Col("p_type"), "PROMO%"), _rev(), Lit(0))),
            ("volume", _rev()),
        ),
    )
    merged = _agg_merge(
        proj, (), (("promo", "sum", Col("promo")), ("volume", "sum", Col("volume")))
    )
    out = Project(
        merged,
        (("promo_revenue", RatioScaled(Arith("*", Col("promo"), Lit(100)), Col("volume"), 6)),),
    )
    return FinalMerge(out, (("promo_revenue", "dec:6"),))


def _q15_revenue(ctx: PlanContext, p: dict) -> PlanNode:
    lo, hi = _month_range(p["year"], p["month"], 3)
    li = SegmentScan(
        "lineitem",
        ("l_suppkey", "l_extendedprice", "l_discount"),
        (Pred("l_shipdate", "ge", lo), Pred("l_shipdate", "lt", hi)),
    )
    return _agg_merge(li, ("l_suppkey",), (("total_revenue", "sum", _rev()),))


def _q15(ctx: PlanContext, p: dict) -> FinalMerge:
    per_supp = _q15_revenue(ctx, p)
    peak = HashAggregate(
        _q15_revenue(ctx, p), (), (("max_revenue", "max", Col("total_revenue")),)
    )
    best = Filter(
        ScalarAttach(per_supp, peak), _eq(Col("total_revenue"), Col("max_revenue"))
    )
    supp = Gather(SegmentScan("supplier", ("s_suppkey", "s_name", "s_address", "s_phone")))
    j = HashJoin(best, supp, ("l_suppkey",), ("s_suppkey",), "inner")
    proj = Project(
        j,
        (
            ("s_suppkey", Col("l_suppkey")),
            ("s_name", Col("s_name")),
            ("s_address", Col("s_address")),
            ("s_phone", Col("s_phone")),
            ("total_revenue", Col("total_revenue")),
        ),
    )
    return FinalMerge(
        Sort(proj, (("s_suppkey", True),)),
        (
            ("s_suppkey", "int"),
            ("s_name", "str"),
            ("s_address", "str"),
            ("s_phone", "str"),
            ("total_revenue", "dec:4"),
        ),
    )


def _q16(ctx: PlanContext, p: dict) -> FinalMerge:
    part_f = Filter(
        SegmentScan(
            "part",
            ("p_partkey", "p_brand", "p_type", "p_size"),
            (Pred("p_size", "isin", tuple(p["sizes"])),),
        ),
        And(
            (
                Cmp("!=", Col("p_brand"), Lit(p["brand"])),
                Like(Col("p_type"), p["type_prefix"] + "%", negate=True),
            )
        ),
    )
    ps = SegmentScan("partsupp", ("ps_partkey", "ps_suppkey"))
    j = HashJoin(ps, part_f, ("ps_partkey",), ("p_partkey",), "inner")
    complainers = Project(
        Filter(
            SegmentScan("supplier", ("s_suppkey", "s_comment")),
            Like(Col("s_comment"), "%Customer%Complaints%"),
        ),
        (("s_suppkey", Col("s_suppkey")),),
    )
    clean = HashJoin(j, Gather(complainers), ("ps_suppkey",), ("s_suppkey",), "anti", broadcast=True)
    keys = ("p_brand", "p_type", "p_size", "ps_suppkey")
    dedup_local = HashAggregate(clean, keys, ())
    dedup = HashAggregate(Gather(dedup_local), keys, ())
    counted = HashAggregate(
        dedup, ("p_brand", "p_type", "p_size"), (("supplier_cnt", "count", None),)
    )
    ordered = Sort(
        counted,
        (("supplier_cnt", False), ("p_brand", True), ("p_type", True), ("p_size", True)),
    )
    return FinalMerge(
        ordered,
        (("p_brand", "str"), ("p_type", "str"), ("p_size", "int"), ("supplier_cnt", "int")),
    )


def _q17_lineitems(ctx: PlanContext, p: dict) -> PlanNode:
    part_f = SegmentScan(
        "part",
        ("p_partkey",),
        (Pred("p_brand", "eq", p["brand"]), Pred("p_container", "eq", p["container"])),
    )
    li = SegmentScan("lineitem", ("l_partkey", "l_quantity", "l_extendedprice"))
    return _dim_join(ctx, li, ("l_partkey",), part_f, ("p_partkey",), ctx.rows("part"), how="semi")


def _q17(ctx: PlanContext, p: dict) -> FinalMerge:
    thresholds = _agg_merge(
        _q17_lineitems(ctx, p),
        ("l_partkey",),
        (("qty_sum", "sum", Col("l_quantity")), ("qty_cnt", "count", None)),
    )
    thr = Project(
        thresholds,
        (
            ("t_partkey", Col("l_partkey")),
            ("qty_sum", Col("qty_sum")),
            ("qty_cnt", Col("qty_cnt")),
        ),
    )
    rows = Gather(_q17_lineitems(ctx, p))
    j = HashJoin(rows, thr, ("l_partkey",), ("t_partkey",), "inner")
    small = Filter(
        j,
        Cmp(
            "<",
            Arith("*", Arith("*", Lit(5), Col("l_quantity")), Col("qty_cnt")),
            Col("qty_sum"),
        ),
    )
    total = HashAggregate(small, (), (("total_ext", "sum", Col("l_extendedprice")),))
    out = Project(total, (("avg_yearly", DivRound(Col("total_ext"), Lit(7))),))
    return FinalMerge(out, (("avg_yearly", "dec:2"),))


def _q18(ctx: PlanContext, p: dict) -> FinalMerge:
    big = Project(
        Filter(
            HashAggregate(
                SegmentScan("lineitem", ("l_orderkey", "l_quantity")),
                ("l_orderkey",),
                (("sum_qty_all", "sum", Col("l_quantity")),),
            ),
            Cmp(">", Col("sum_qty_all"), Lit(p["quantity"] * 100)),
        ),
        (("big_orderkey", Col("l_orderkey")),),
    )
    orders = SegmentScan("orders", ("o_orderkey", "o_custkey", "o_orderdate", "o_totalprice"))
    big_orders = HashJoin(orders, big, ("o_orderkey",), ("big_orderkey",), "semi")
    li = SegmentScan("lineitem", ("l_orderkey", "l_quantity"))
    j = HashJoin(li, big_orders, ("l_orderkey",), ("o_orderkey",), "inner")
    cust = SegmentScan("customer", ("c_custkey", "c_name"))
    j2 = _dim_join(ctx, j, ("o_custkey",), cust, ("c_custkey",), ctx.rows("customer"))
    merged = _agg_merge(
        j2,
        ("c_name", "o_custkey", "l_orderkey", "o_orderdate", "o_totalprice"),
        (("sum_qty", "sum", Col("l_quantity")),),
    )
    proj = Project(
        merged,
        (
            ("c_name", Col("c_name")),
            ("c_custkey", Col("o_custkey")),
            ("o_orderkey", Col("l_orderkey")),
            ("o_orderdate", Col("o_orderdate")),
            ("o_totalprice", Col("o_totalprice")),
            ("sum_qty", Col("sum_qty")),
        ),
    )
    ordered = Limit(Sort(proj, (("o_totalprice", False), ("o_orderdate", True))), 100)
    return FinalMerge(
        ordered,
        (
            ("c_name", "str"),
            ("c_custkey", "int"),
            ("o_orderkey", "int"),
            ("o_orderdate", "date"),
            ("o_totalprice", "dec:2"),
            ("sum_qty", "dec:2"),
        ),
    )


_Q19_CONTAINERS = {
    "SM": ("SM CASE", "SM BOX", "SM PACK", "SM PKG"),
    "MED": ("MED BAG", "MED BOX", "MED PKG", "MED PACK"),
    "LG": ("LG CASE", "LG BOX", "LG PACK", "LG PKG"),
}


def _q19(ctx: PlanContext, p: dict) -> FinalMerge:
    li = SegmentScan(
        "lineitem",
        ("l_partkey", "l_quantity", "l_extendedprice", "l_discount"),
        (
            Pred("l_shipinstruct", "eq", "DELIVER IN PERSON"),
            Pred("l_shipmode", "isin", ("AIR", "AIR REG")),
        ),
    )
    part = SegmentScan("part", ("p_partkey", "p_brand", "p_size", "p_container"))
    j = _dim_join(ctx, li, ("l_partkey",), part, ("p_partkey",), ctx.rows("part"))

    def clause(brand: str, group: str, qty: int, size_hi: int) -> And:
        return And(
            (
                _eq(Col("p_brand"), Lit(brand)),
                InSet(Col("p_container"), _Q19_CONTAINERS[group]),
                Cmp(">=", Col("l_quantity"), Lit(qty * 100)),
                Cmp("<=", Col("l_quantity"), Lit((qty + 10) * 100)),
                Cmp(">=", Col("p_size"), Lit(1)),
                Cmp("<=", Col("p_size"), Lit(size_hi)),
            )
        )

    cond = Or(
        (
            clause(p["brand1"], "SM", p["qty1"], 5),
            clause(p["brand2"], "MED", p["qty2"], 10),
            clause(p["brand3"], "LG", p["qty3"], 15),
        )
    )
    merged = _agg_merge(Filter(j, cond), (), (("revenue", "sum", _rev()),))
    return FinalMerge(merged, (("revenue", "dec:4"),))


def _q20(ctx: PlanContext, p: dict) -> FinalMerge:
    pf = Project(
        Filter(
            SegmentScan("part", ("p_partkey", "p_name")),
            Like(Col("p_name"), p["color"] + "%"),
        ),
        (("p_partkey", Col("p_partkey")),),
    )
    ps = SegmentScan("partsupp", ("ps_partkey", "ps_suppkey", "ps_availqty"))
    psf = HashJoin(ps, pf, ("ps_partkey",), ("p_partkey",), "semi")
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    li = SegmentScan(
        "lineitem",
        ("l_partkey", "l_suppkey", "l_quantity"),
        (Pred("l_shipdate", "ge", lo), Pred("l_shipdate", "lt", hi)),
    )
    sums = _agg_merge(li, ("l_partkey", "l_suppkey"), (("qty_sum", "sum", Col("l_quantity")),))
    j = HashJoin(
        psf, sums, ("ps_partkey", "ps_suppkey"), ("l_partkey", "l_suppkey"),
        "inner", broadcast=True,
    )
    enough = Filter(j, Cmp(">", Arith("*", Lit(200), Col("ps_availqty")), Col("qty_sum")))
    sk_local = HashAggregate(Project(enough, (("ps_suppkey", Col("ps_suppkey")),)), ("ps_suppkey",), ())
    sk = HashAggregate(Gather(sk_local), ("ps_suppkey",), ())
    nat = _nation_coord("n_nationkey", pred=Pred("n_name", "eq", p["nation"]))
    supp = HashJoin(
        Gather(SegmentScan("supplier", ("s_suppkey", "s_name", "s_address", "s_nationkey"))),
        nat, ("s_nationkey",), ("n_nationkey",), "semi",
    )
    j2 = HashJoin(supp, sk, ("s_suppkey",), ("ps_suppkey",), "semi")
    proj = Project(j2, (("s_name", Col("s_name")), ("s_address", Col("s_address"))))
    return FinalMerge(Sort(proj, (("s_name", True),)), (("s_name", "str"), ("s_address", "str")))


def _q21(ctx: PlanContext, p: dict) -> FinalMerge:
    li_keys = SegmentScan("lineitem", ("l_orderkey", "l_suppkey"))
    supp_count = HashAggregate(
        HashAggregate(li_keys, ("l_orderkey", "l_suppkey"), ()),
        ("l_orderkey",),
        (("n_supp", "count", None),),
    )
    late = Filter(
        SegmentScan("lineitem", ("l_orderkey", "l_suppkey", "l_commitdate", "l_receiptdate")),
        Cmp(">", Col("l_receiptdate"), Col("l_commitdate")),
    )
    late_keys = Project(late, (("l_orderkey", Col("l_orderkey")), ("l_suppkey", Col("l_suppkey"))))
    late_count = Project(
        HashAggregate(
            HashAggregate(late_keys, ("l_orderkey", "l_suppkey"), ()),
            ("l_orderkey",),
            (("n_late", "count", None),),
        ),
        (("late_orderkey", Col("l_orderkey")), ("n_late", Col("n_late"))),
    )
    orders_f = SegmentScan("orders", ("o_orderkey",), (Pred("o_orderstatus", "eq", "F"),))
    l1 = HashJoin(late_keys, orders_f, ("l_orderkey",), ("o_orderkey",), "semi")
    with_counts = Filter(
        HashJoin(
            Project(l1, (("l_orderkey", Col("l_orderkey")), ("l_suppkey", Col("l_suppkey")))),
            supp_count,
            ("l_orderkey",),
            ("l_orderkey",),
            "inner",
        ),
        Cmp(">=", Col("n_supp"), Lit(2)),
    )
    sole_late = Filter(
        HashJoin(with_counts, late_count, ("l_orderkey",), ("late_orderkey",), "inner"),
        _eq(Col("n_late"), Lit(1)),
    )
    supp_sa = Project(
        HashJoin(
            SegmentScan("supplier", ("s_suppkey", "s_name", "s_nationkey")),
            _nation_coord("n_nationkey", pred=Pred("n_name", "eq", p["nation"])),
            ("s_nationkey",), ("n_nationkey",), "semi", broadcast=True,
        ),
        (("s_suppkey", Col("s_suppkey")), ("s_name", Col("s_name"))),
    )
    j = _dim_join(ctx, sole_late, ("l_suppkey",), supp_sa, ("s_suppkey",), ctx.rows("supplier"))
    merged = _agg_merge(j, ("s_name",), (("numwait", "count", None),))
    ordered = Limit(Sort(merged, (("numwait", False), ("s_name", True))), 100)
    return FinalMerge(ordered, (("s_name", "str"), ("numwait", "int")))


def _q22_customers(ctx: PlanContext, p: dict) -> PlanNode:
    cust = SegmentScan("customer", ("c_custkey", "c_phone", "c_acctbal"))
    coded = Project(
        cust,
        (
            ("c_custkey", Col("c_custkey")),
            ("c_acctbal", Col("c_acctbal")),
            ("cntrycode", Prefix(Col("c_phone"), 2)),
        ),
    )
    return Filter(coded, InSet(Col("cntrycode"), tuple(p["codes"])))


def _q22(ctx: PlanContext, p: dict) -> FinalMerge:
    avg_sub = _agg_merge(
        Filter(_q22_customers(ctx, p), Cmp(">", Col("c_acctbal"), Lit(0))),
        (),
        (("bal_sum", "sum", Col("c_acctbal")), ("bal_cnt", "count", None)),
    )
    order_cust = HashAggregate(
        Repartition(
            HashAggregate(
                SegmentScan("orders", ("o_custkey",)), ("o_custkey",), ()
            ),
            "o_custkey",
        ),
        ("o_custkey",),
        (),
    )
    no_orders = HashJoin(
        _q22_customers(ctx, p), order_cust, ("c_custkey",), ("o_custkey",), "anti"
    )
    attached = ScalarAttach(Gather(no_orders), avg_sub)
    rich = Filter(
        attached,
        Cmp(">", Arith("*", Col("c_acctbal"), Col("bal_cnt")), Col("bal_sum")),
    )
    agg = HashAggregate(
        rich,
        ("cntrycode",),
        (("numcust", "count", None), ("totacctbal", "sum", Col("c_acctbal"))),
    )
    return FinalMerge(
        Sort(agg, (("cntrycode", True),)),
        (("cntrycode", "str"), ("numcust", "int"), ("totacctbal", "dec:2")),
    )


# ---------------------------------------------------------------------------
# parameters and registry
# ---------------------------------------------------------------------------

QUERY_NAMES = {
    1: "Pricing Summary Report",
    2: "Minimum Cost Supplier",
    3: "Shipping Priority",
    4: "Order Priority Checking",
    5: "Local Supplier Volume",
    6: "Forecasting Revenue Change",
    7: "Volume Shipping",
    8: "National Market Share",
    9: "Product Type Profit Measure",
    10: "Returned Item Reporting",
    11: "Important Stock Identification",
    12: "Shipping Modes and Order Priority",
    13: "Customer Distribution",
    14: "Promotion Effect",
    15: "Top Supplier",
    16: "Parts/Supplier Relationship",
    17: "Small-Quantity-Order Revenue",
    18: "Large Volume Customer",
    19: "Discounted Revenue",
    20: "Potential Part Promotion",
    21: "Suppliers Who Kept Orders Waiting",
    22: "Global Sales Opportunity",
}

_NATION_NAMES = tuple(n for n, _ in dg.NATIONS)
_NATION_REGION = {n: r for n, r in dg.NATIONS}
_REGION_NAMES = dg.REGIONS


def _pick(state: int, tag: int, seq):
    return seq[mix(state, tag) % len(seq)]


def _pick_distinct(state: int, tag: int, seq, k: int) -> list:
    pool = list(seq)
    out = []
    for i in range(k):
        v = pool[mix(state, tag, i) % len(pool)]
        pool.remove(v)
        out.append(v)
    return out


@dataclass(frozen=True)
class QuerySpec:
    qid: int
    name: str
    defaults: Callable[[], dict]
    randomize: Callable[[int], dict]
    validate: Callable[[dict], None]
    build: Callable[[PlanContext, dict], FinalMerge]


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


def _v_year(p):
    _check(1993 <= p["year"] <= 1997, f"year {p['year']} outside 1993..1997")


def _v_month(p):
    _check(1 <= p["month"] <= 12, f"month {p['month']} outside 1..12")


def _v_nation(p, key="nation"):
    _check(p[key] in _NATION_NAMES, f"unknown nation {p[key]!r}")


def _brand(m: int, n: int) -> str:
    return f"Brand#{m}{n}"


_SPECS: dict[int, QuerySpec] = {}


def _register(qid, defaults, randomize, validate, build):
    _SPECS[qid] = QuerySpec(qid, QUERY_NAMES[qid], defaults, randomize, validate, build)


_register(
    1,
    lambda: {"delta_days": 90},
    lambda s: {"delta_days": 60 + mix(s, 1) % 61},
    lambda p: _check(60 <= p["delta_days"] <= 120, "delta outside 60..120"),
    _q1,
)
_register(
    2,
    lambda: {"size": 15, "type_suffix": "BRASS", "region": "EUROPE"},
    lambda s: {
        "size": 1 + mix(s, 1) % 50,
        "type_suffix": _pick(s, 2, dg.TYPES_3),
        "region": _pick(s, 3, _REGION_NAMES),
    },
    lambda p: (
        _check(1 <= p["size"] <= 50, "size outside 1..50"),
        _check(p["type_suffix"] in dg.TYPES_3, "unknown type suffix"),
        _check(p["region"] in _REGION_NAMES, "unknown region"),
    ),
    _q2,
)
_register(
    3,
    lambda: {"segment": "BUILDING", "date": _days(1995, 3, 15)},
    lambda s: {
        "segment": _pick(s, 1, dg.SEGMENTS),
        "date": _days(1995, 3, 1) + mix(s, 2) % 31,
    },
    lambda p: (
        _check(p["segment"] in dg.SEGMENTS, "unknown segment"),
        _check(_days(1995, 3, 1) <= p["date"] <= _days(1995, 3, 31), "date outside March 1995"),
    ),
    _q3,
)
_register(
    4,
    lambda: {"year": 1993, "month": 7},
    lambda s: {"year": 1993 + mix(s, 1) % 5, "month": 1 + 3 * (mix(s, 2) % 4)},
    lambda p: (_v_year(p), _v_month(p)),
    _q4,
)
_register(
    5,
    lambda: {"region": "ASIA", "year": 1994},
    lambda s: {"region": _pick(s, 1, _REGION_NAMES), "year": 1993 + mix(s, 2) % 5},
    lambda p: (_check(p["region"] in _REGION_NAMES, "unknown region"), _v_year(p)),
    _q5,
)
_register(
    6,
    lambda: {"year": 1994, "discount_cents": 6, "quantity": 24},
    lambda s: {
        "year": 1993 + mix(s, 1) % 5,
        "discount_cents": 2 + mix(s, 2) % 8,
        "quantity": 24 + mix(s, 3) % 2,
    },
    lambda p: (
        _v_year(p),
        _check(1 <= p["discount_cents"] <= 9, "discount outside 0.01..0.09"),
        _check(p["quantity"] in (24, 25), "quantity outside {24,25}"),
    ),
    _q6,
)
_register(
    7,
    lambda: {"nation1": "FRANCE", "nation2": "GERMANY"},
    lambda s: dict(zip(("nation1", "nation2"), _pick_distinct(s, 1, _NATION_NAMES, 2))),
    lambda p: (
        _v_nation(p, "nation1"),
        _v_nation(p, "nation2"),
        _check(p["nation1"] != p["nation2"], "nations must differ"),
    ),
    _q7,
)
_register(
    8,
    lambda: {"nation": "BRAZIL", "region": "AMERICA", "type": "ECONOMY ANODIZED STEEL"},
    lambda s: (
        lambda nation: {
            "nation": nation,
            "region": _REGION_NAMES[_NATION_REGION[nation]],
            "type": f"{_pick(s, 2, dg.TYPES_1)} {_pick(s, 3, dg.TYPES_2)} {_pick(s, 4, dg.TYPES_3)}",
        }
    )(_pick(s, 1, _NATION_NAMES)),
    lambda p: (
        _v_nation(p),
        _check(
            p["region"] == _REGION_NAMES[_NATION_REGION[p["nation"]]],
            "region must contain the nation",
        ),
    ),
    _q8,
)
_register(
    9,
    lambda: {"color": "green"},
    lambda s: {"color": _pick(s, 1, dg.COLORS)},
    lambda p: _check(p["color"] in dg.COLORS, "unknown color"),
    _q9,
)
_register(
    10,
    lambda: {"year": 1993, "month": 10},
    lambda s: (lambda k: {"year": 1993 + (k + 1) // 12, "month": (k + 1) % 12 + 1})(mix(s, 1) % 24),
    lambda p: (_v_year(p), _v_month(p)),
    _q10,
)
_register(
    11,
    lambda: {"nation": "GERMANY"},
    lambda s: {"nation": _pick(s, 1, _NATION_NAMES)},
    _v_nation,
    _q11,
)
_register(
    12,
    lambda: {"mode1": "MAIL", "mode2": "SHIP", "year": 1994},
    lambda s: dict(
        zip(("mode1", "mode2"), _pick_distinct(s, 1, dg.MODES, 2)), year=1993 + mix(s, 2) % 5
    ),
    lambda p: (
        _check(p["mode1"] in dg.MODES and p["mode2"] in dg.MODES, "unknown ship mode"),
        _check(p["mode1"] != p["mode2"], "modes must differ"),
        _v_year(p),
    ),
    _q12,
)
_register(
    13,
    lambda: {"word1": "special", "word2": "requests"},
    lambda s: {
        "word1": _pick(s, 1, ("special", "pending", "unusual", "express")),
        "word2": _pick(s, 2, ("packages", "requests", "accounts", "deposits")),
    },
    lambda p: _check(bool(p["word1"]) and bool(p["word2"]), "words must be non-empty"),
    _q13,
)
_register(
    14,
    lambda: {"year": 1995, "month": 9},
    lambda s: {"year": 1993 + mix(s, 1) % 5, "month": 1 + mix(s, 2) % 12},
    lambda p: (_v_year(p), _v_month(p)),
    _q14,
)
_register(
    15,
    lambda: {"year": 1996, "month": 1},
    lambda s: {"year": 1993 + mix(s, 1) % 5, "month": 1 + 3 * (mix(s, 2) % 4)},
    lambda p: (_v_year(p), _v_month(p)),
    _q15,
)
_register(
    16,
    lambda: {
        "brand": "Brand#45",
        "type_prefix": "MEDIUM POLISHED",
        "sizes": (49, 14, 23, 45, 19, 3, 36, 9),
    },
    lambda s: {
        "brand": _brand(1 + mix(s, 1) % 5, 1 + mix(s, 2) % 5),
        "type_prefix": f"{_pick(s, 3, dg.TYPES_1)} {_pick(s, 4, dg.TYPES_2)}",
        "sizes": tuple(_pick_distinct(s, 5, range(1, 51), 8)),
    },
    lambda p: (
        _check(len(set(p["sizes"])) == 8, "need 8 distinct sizes"),
        _check(all(1 <= v <= 50 for v in p["sizes"]), "sizes outside 1..50"),
    ),
    _q16,
)
_register(
    17,
    lambda: {"brand": "Brand#23", "container": "MED BOX"},
    lambda s: {
        "brand": _brand(1 + mix(s, 1) % 5, 1 + mix(s, 2) % 5),
        "container": f"{_pick(s, 3, dg.CONTAINERS_1)} {_pick(s, 4, dg.CONTAINERS_2)}",
    },
    lambda p: _check(p["brand"].startswith("Brand#"), "bad brand"),
    _q17,
)
_register(
    18,
    lambda: {"quantity": 300},
    lambda s: {"quantity": 300 + mix(s, 1) % 16},
    lambda p: _check(300 <= p["quantity"] <= 315, "quantity outside 300..315"),
    _q18,
)
_register(
    19,
    lambda: {
        "qty1": 1, "qty2": 10, "qty3": 20,
        "brand1": "Brand#12", "brand2": "Brand#23", "brand3": "Brand#34",
    },
    lambda s: {
        "qty1": 1 + mix(s, 1) % 10,
        "qty2": 10 + mix(s, 2) % 11,
        "qty3": 20 + mix(s, 3) % 11,
        "brand1": _brand(1 + mix(s, 4) % 5, 1 + mix(s, 5) % 5),
        "brand2": _brand(1 + mix(s, 6) % 5, 1 + mix(s, 7) % 5),
        "brand3": _brand(1 + mix(s, 8) % 5, 1 + mix(s, 9) % 5),
    },
    lambda p: (
        _check(1 <= p["qty1"] <= 10, "qty1 outside 1..10"),
        _check(10 <= p["qty2"] <= 20, "qty2 outside 10..20"),
        _check(20 <= p["qty3"] <= 30, "qty3 outside 20..30"),
    ),
    _q19,
)
_register(
    20,
    lambda: {"color": "forest", "year": 1994, "nation": "CANADA"},
    lambda s: {
        "color": _pick(s, 1, dg.COLORS),
        "year": 1993 + mix(s, 2) % 5,
        "nation": _pick(s, 3, _NATION_NAMES),
    },
    lambda p: (_check(p["color"] in dg.COLORS, "unknown color"), _v_year(p), _v_nation(p)),
    _q20,
)
_register(
    21,
    lambda: {"nation": "SAUDI ARABIA"},
    lambda s: {"nation": _pick(s, 1, _NATION_NAMES)},
    _v_nation,
    _q21,
)
_register(
    22,
    lambda: {"codes": ("13", "31", "23", "29", "30", "18", "17")},
    lambda s: {"codes": tuple(str(10 + c) for c in _pick_distinct(s, 1, range(25), 7))},
    lambda p: (
        _check(len(set(p["codes"])) == 7, "need 7 distinct codes"),
        _check(all(10 <= int(c) <= 34 for c in p["codes"]), "codes outside 10..34"),
    ),
    _q22,
)

ALL_QUERY_IDS = tuple(range(1, 23))


def query_spec(qid: int) -> QuerySpec:
    if qid not in _SPECS:
        raise ParamError(f"no query Q{qid}")
    return _SPECS[qid]


def params_for(qid: int, seed: int | None = None) -> dict:
    """Validation defaults, or a seeded draw from the documented domains."""
    spec = query_spec(qid)
    return spec.defaults() if seed is None else spec.randomize(seed)


def plan_for(qid: int, ctx: PlanContext, params: dict | None = None) -> FinalMerge:
    """Build (and validate) the physical plan of one query."""
    spec = query_spec(qid)
    p = spec.defaults()
    if params:
        p.update(params)
    spec.validate(p)
    return spec.build(ctx, p)
