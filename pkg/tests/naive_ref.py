"""Independent row-at-a-time reference interpreter for the 22 queries.

This is the correctness oracle: plain python loops over row dicts straight
from the generator, no storage, no plans, no vectorized kernels.  It re-states
each query's definition from scratch and renders results with the same output
schemas and canonical ordering the engine declares, so ResultSets compare
exactly.
"""

from __future__ import annotations

import re
from collections import defaultdict
from datetime import date, timedelta

from minimpp import datagen as dg
from minimpp.engine.results import ResultSet
from minimpp.schema import TABLE_ORDER, table

EPOCH = date(1970, 1, 1)


def load_tables(sf, seed=dg.DEFAULT_SEED) -> dict[str, list[dict]]:
    out = {}
    for name in TABLE_ORDER:
        cols = [c.name for c in table(name).columns]
        out[name] = [dict(zip(cols, row)) for row in dg.generate_table(name, sf, seed)]
    return out


def _year(days: int) -> int:
    return (EPOCH + timedelta(days=days)).year


def _div_half_up(num: int, den: int) -> int:
    if num < 0:
        return -((2 * -num + den) // (2 * den))
    return (2 * num + den) // (2 * den)


def _ratio(num: int, den: int, scale: int) -> int:
    return _div_half_up(num * 10**scale, den)


def _like(pattern: str) -> "re.Pattern":
    return re.compile("^" + ".*".join(re.escape(s) for s in pattern.split("%")) + "$", re.S)


def _canonical(rows: list[tuple], keys: list[tuple[int, bool]]) -> list[tuple]:
    rows = sorted(rows)
    for idx, asc in reversed(keys):
        rows.sort(key=lambda r: r[idx], reverse=not asc)
    return rows


def _days(y, m, d=1):
    return dg.date_to_days(y, m, d)


def _add_months(y, m, n):
    k = y * 12 + (m - 1) + n
    return k // 12, k % 12 + 1


def _month_span(y, m, months):
    y2, m2 = _add_months(y, m, months)
    return _days(y, m), _days(y2, m2)


def _rev(li) -> int:
    return li["l_extendedprice"] * (100 - li["l_discount"])


def naive_q1(data, p):
    cutoff = _days(1998, 12, 1) - p["delta_days"]
    acc = defaultdict(lambda: [0, 0, 0, 0, 0, 0])
    for li in data["lineitem"]:
        if li["l_shipdate"] > cutoff:
            continue
        k = (li["l_returnflag"], li["l_linestatus"])
        a = acc[k]
        a[0] += li["l_quantity"]
        a[1] += li["l_extendedprice"]
        a[2] += _rev(li)
        a[3] += _rev(li) * (100 + li["l_tax"])
        a[4] += li["l_discount"]
        a[5] += 1
    rows = []
    for (rf, ls), a in acc.items():
        rows.append(
            (
                rf, ls, a[0], a[1], a[2], a[3],
                _div_half_up(a[0], a[5]), _div_half_up(a[1], a[5]), _div_half_up(a[4], a[5]),
                a[5],
            )
        )
    rows = _canonical(rows, [(0, True), (1, True)])
    return ResultSet(
        (
            ("l_returnflag", "str"), ("l_linestatus", "str"), ("sum_qty", "dec:2"),
            ("sum_base_price", "dec:2"), ("sum_disc_price", "dec:4"), ("sum_charge", "dec:6"),
            ("avg_qty", "dec:2"), ("avg_price", "dec:2"), ("avg_disc", "dec:2"),
            ("count_order", "int"),
        ),
        rows,
    )


def naive_q2(data, p):
    regions = {r["r_regionkey"] for r in data["region"] if r["r_name"] == p["region"]}
    nations = {n["n_nationkey"]: n["n_name"] for n in data["nation"] if n["n_regionkey"] in regions}
    supps = {s["s_suppkey"]: s for s in data["supplier"] if s["s_nationkey"] in nations}
    min_cost: dict[int, int] = {}
    for ps in data["partsupp"]:
        if ps["ps_suppkey"] in supps:
            k = ps["ps_partkey"]
            if k not in min_cost or ps["ps_supplycost"] < min_cost[k]:
                min_cost[k] = ps["ps_supplycost"]
    parts = {
        pt["p_partkey"]: pt
        for pt in data["part"]
        if pt["p_size"] == p["size"] and pt["p_type"].endswith(p["type_suffix"])
    }
    rows = []
    for ps in data["partsupp"]:
        pk = ps["ps_partkey"]
        if pk not in parts or ps["ps_suppkey"] not in supps:
            continue
        if ps["ps_supplycost"] != min_cost.get(pk):
            continue
        s = supps[ps["ps_suppkey"]]
        rows.append(
            (
                s["s_acctbal"], s["s_name"], nations[s["s_nationkey"]], pk,
                parts[pk]["p_mfgr"], s["s_address"], s["s_phone"], s["s_comment"],
            )
        )
    rows = _canonical(rows, [(0, False), (2, True), (1, True), (3, True)])[:100]
    return ResultSet(
        (
            ("s_acctbal", "dec:2"), ("s_name", "str"), ("n_name", "str"), ("p_partkey", "int"),
            ("p_mfgr", "str"), ("s_address", "str"), ("s_phone", "str"), ("s_comment", "str"),
        ),
        rows,
    )


def naive_q3(data, p):
    day = p["date"]
    segment_cust = {c["c_custkey"] for c in data["customer"] if c["c_mktsegment"] == p["segment"]}
    orders = {
        o["o_orderkey"]: o
        for o in data["orders"]
        if o["o_orderdate"] < day and o["o_custkey"] in segment_cust
    }
    acc = defaultdict(int)
    for li in data["lineitem"]:
        if li["l_shipdate"] > day and li["l_orderkey"] in orders:
            acc[li["l_orderkey"]] += _rev(li)
    rows = [
        (ok, rev, orders[ok]["o_orderdate"], orders[ok]["o_shippriority"])
        for ok, rev in acc.items()
    ]
    rows = _canonical(rows, [(1, False), (2, True)])[:10]
    return ResultSet(
        (("l_orderkey", "int"), ("revenue", "dec:4"), ("o_orderdate", "date"), ("o_shippriority", "int")),
        rows,
    )


def naive_q4(data, p):
    lo, hi = _month_span(p["year"], p["month"], 3)
    late = {li["l_orderkey"] for li in data["lineitem"] if li["l_commitdate"] < li["l_receiptdate"]}
    acc = defaultdict(int)
    for o in data["orders"]:
        if lo <= o["o_orderdate"] < hi and o["o_orderkey"] in late:
            acc[o["o_orderpriority"]] += 1
    rows = _canonical(list(acc.items()), [(0, True)])
    return ResultSet((("o_orderpriority", "str"), ("order_count", "int")), rows)


def naive_q5(data, p):
    regions = {r["r_regionkey"] for r in data["region"] if r["r_name"] == p["region"]}
    nations = {n["n_nationkey"]: n["n_name"] for n in data["nation"] if n["n_regionkey"] in regions}
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    orders = {
        o["o_orderkey"]: o["o_custkey"] for o in data["orders"] if lo <= o["o_orderdate"] < hi
    }
    cust_nat = {c["c_custkey"]: c["c_nationkey"] for c in data["customer"]}
    supp_nat = {s["s_suppkey"]: s["s_nationkey"] for s in data["supplier"]}
    acc = defaultdict(int)
    for li in data["lineitem"]:
        ck = orders.get(li["l_orderkey"])
        if ck is None:
            continue
        sn = supp_nat[li["l_suppkey"]]
        if sn in nations and cust_nat[ck] == sn:
            acc[nations[sn]] += _rev(li)
    rows = _canonical(list(acc.items()), [(1, False)])
    return ResultSet((("n_name", "str"), ("revenue", "dec:4")), rows)


def naive_q6(data, p):
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    d = p["discount_cents"]
    total = 0
    for li in data["lineitem"]:
        if (
            lo <= li["l_shipdate"] < hi
            and d - 1 <= li["l_discount"] <= d + 1
            and li["l_quantity"] < p["quantity"] * 100
        ):
            total += li["l_extendedprice"] * li["l_discount"]
    return ResultSet((("revenue", "dec:4"),), [(total,)])


def naive_q7(data, p):
    names = {n["n_nationkey"]: n["n_name"] for n in data["nation"]}
    supp_nat = {s["s_suppkey"]: names[s["s_nationkey"]] for s in data["supplier"]}
    cust_nat = {c["c_custkey"]: names[c["c_nationkey"]] for c in data["customer"]}
    orders = {o["o_orderkey"]: o["o_custkey"] for o in data["orders"]}
    lo, hi = _days(1995, 1, 1), _days(1996, 12, 31)
    pair = {p["nation1"], p["nation2"]}
    acc = defaultdict(int)
    for li in data["lineitem"]:
        if not lo <= li["l_shipdate"] <= hi:
            continue
        sn = supp_nat[li["l_suppkey"]]
        cn = cust_nat[orders[li["l_orderkey"]]]
        if sn in pair and cn in pair and sn != cn:
            acc[(sn, cn, _year(li["l_shipdate"]))] += _rev(li)
    rows = [(sn, cn, y, v) for (sn, cn, y), v in acc.items()]
    rows = _canonical(rows, [(0, True), (1, True), (2, True)])
    return ResultSet(
        (("supp_nation", "str"), ("cust_nation", "str"), ("l_year", "int"), ("revenue", "dec:4")),
        rows,
    )


def naive_q8(data, p):
    parts = {pt["p_partkey"] for pt in data["part"] if pt["p_type"] == p["type"]}
    regions = {r["r_regionkey"] for r in data["region"] if r["r_name"] == p["region"]}
    region_nations = {n["n_nationkey"] for n in data["nation"] if n["n_regionkey"] in regions}
    names = {n["n_nationkey"]: n["n_name"] for n in data["nation"]}
    cust_nat = {c["c_custkey"]: c["c_nationkey"] for c in data["customer"]}
    supp_nat = {s["s_suppkey"]: names[s["s_nationkey"]] for s in data["supplier"]}
    lo, hi = _days(1995, 1, 1), _days(1996, 12, 31)
    orders = {
        o["o_orderkey"]: o
        for o in data["orders"]
        if lo <= o["o_orderdate"] <= hi and cust_nat[o["o_custkey"]] in region_nations
    }
    acc = defaultdict(lambda: [0, 0])
    for li in data["lineitem"]:
        if li["l_partkey"] not in parts:
            continue
        o = orders.get(li["l_orderkey"])
        if o is None:
            continue
        a = acc[_year(o["o_orderdate"])]
        vol = _rev(li)
        a[0] += vol
        if supp_nat[li["l_suppkey"]] == p["nation"]:
            a[1] += vol
    rows = [(y, _ratio(bra, tot, 6)) for y, (tot, bra) in acc.items()]
    rows = _canonical(rows, [(0, True)])
    return ResultSet((("o_year", "int"), ("mkt_share", "dec:6")), rows)


def naive_q9(data, p):
    parts = {pt["p_partkey"] for pt in data["part"] if p["color"] in pt["p_name"]}
    names = {n["n_nationkey"]: n["n_name"] for n in data["nation"]}
    supp_nat = {s["s_suppkey"]: names[s["s_nationkey"]] for s in data["supplier"]}
    cost = {
        (ps["ps_partkey"], ps["ps_suppkey"]): ps["ps_supplycost"] for ps in data["partsupp"]
    }
    odate = {o["o_orderkey"]: o["o_orderdate"] for o in data["orders"]}
    acc = defaultdict(int)
    for li in data["lineitem"]:
        if li["l_partkey"] not in parts:
            continue
        amount = _rev(li) - cost[(li["l_partkey"], li["l_suppkey"])] * li["l_quantity"]
        acc[(supp_nat[li["l_suppkey"]], _year(odate[li["l_orderkey"]]))] += amount
    rows = [(n, y, v) for (n, y), v in acc.items()]
    rows = _canonical(rows, [(0, True), (1, False)])
    return ResultSet((("nation", "str"), ("o_year", "int"), ("sum_profit", "dec:4")), rows)


def naive_q10(data, p):
    lo, hi = _month_span(p["year"], p["month"], 3)
    orders = {
        o["o_orderkey"]: o["o_custkey"] for o in data["orders"] if lo <= o["o_orderdate"] < hi
    }
    acc = defaultdict(int)
    for li in data["lineitem"]:
        if li["l_returnflag"] == "R" and li["l_orderkey"] in orders:
            acc[orders[li["l_orderkey"]]] += _rev(li)
    names = {n["n_nationkey"]: n["n_name"] for n in data["nation"]}
    cust = {c["c_custkey"]: c for c in data["customer"]}
    rows = [
        (
            ck, cust[ck]["c_name"], rev, cust[ck]["c_acctbal"], names[cust[ck]["c_nationkey"]],
            cust[ck]["c_address"], cust[ck]["c_phone"], cust[ck]["c_comment"],
        )
        for ck, rev in acc.items()
    ]
    rows = _canonical(rows, [(2, False)])[:20]
    return ResultSet(
        (
            ("c_custkey", "int"), ("c_name", "str"), ("revenue", "dec:4"), ("c_acctbal", "dec:2"),
            ("n_name", "str"), ("c_address", "str"), ("c_phone", "str"), ("c_comment", "str"),
        ),
        rows,
    )


def naive_q11(data, p, sf):
    nat = {n["n_nationkey"] for n in data["nation"] if n["n_name"] == p["nation"]}
    supps = {s["s_suppkey"] for s in data["supplier"] if s["s_nationkey"] in nat}
    acc = defaultdict(int)
    total = 0
    for ps in data["partsupp"]:
        if ps["ps_suppkey"] in supps:
            v = ps["ps_supplycost"] * ps["ps_availqty"]
            acc[ps["ps_partkey"]] += v
            total += v
    from fractions import Fraction

    frac = Fraction(1, 10_000) / dg.as_scale(sf)
    rows = [
        (pk, v) for pk, v in acc.items() if v * frac.denominator > total * frac.numerator
    ]
    rows = _canonical(rows, [(1, False)])
    return ResultSet((("ps_partkey", "int"), ("value", "dec:2")), rows)


def naive_q12(data, p):
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    prio = {o["o_orderkey"]: o["o_orderpriority"] for o in data["orders"]}
    acc = defaultdict(lambda: [0, 0])
    for li in data["lineitem"]:
        if (
            li["l_shipmode"] in (p["mode1"], p["mode2"])
            and lo <= li["l_receiptdate"] < hi
            and li["l_commitdate"] < li["l_receiptdate"]
            and li["l_shipdate"] < li["l_commitdate"]
        ):
            high = prio[li["l_orderkey"]] in ("1-URGENT", "2-HIGH")
            acc[li["l_shipmode"]][0 if high else 1] += 1
    rows = [(m, h, l) for m, (h, l) in acc.items()]
    rows = _canonical(rows, [(0, True)])
    return ResultSet(
        (("l_shipmode", "str"), ("high_line_count", "int"), ("low_line_count", "int")), rows
    )


def naive_q13(data, p):
    pat = _like(f"%{p['word1']}%{p['word2']}%")
    per_cust = defaultdict(int)
    for o in data["orders"]:
        if not pat.match(o["o_comment"]):
            per_cust[o["o_custkey"]] += 1
    hist = defaultdict(int)
    for c in data["customer"]:
        hist[per_cust.get(c["c_custkey"], 0)] += 1
    rows = _canonical(list(hist.items()), [(1, False), (0, False)])
    return ResultSet((("c_count", "int"), ("custdist", "int")), rows)


def naive_q14(data, p):
    lo, hi = _month_span(p["year"], p["month"], 1)
    ptype = {pt["p_partkey"]: pt["p_type"] for pt in data["part"]}
    promo = vol = 0
    for li in data["lineitem"]:
        if lo <= li["l_shipdate"] < hi:
            r = _rev(li)
            vol += r
            if ptype[li["l_partkey"]].startswith("PROMO"):
                promo += r
    return ResultSet((("promo_revenue", "dec:6"),), [(_ratio(promo * 100, vol, 6),)])


def naive_q15(data, p):
    lo, hi = _month_span(p["year"], p["month"], 3)
    rev = defaultdict(int)
    for li in data["lineitem"]:
        if lo <= li["l_shipdate"] < hi:
            rev[li["l_suppkey"]] += _rev(li)
    best = max(rev.values())
    rows = []
    for s in data["supplier"]:
        if rev.get(s["s_suppkey"]) == best:
            rows.append((s["s_suppkey"], s["s_name"], s["s_address"], s["s_phone"], best))
    rows = _canonical(rows, [(0, True)])
    return ResultSet(
        (
            ("s_suppkey", "int"), ("s_name", "str"), ("s_address", "str"), ("s_phone", "str"),
            ("total_revenue", "dec:4"),
        ),
        rows,
    )


def naive_q16(data, p):
    pat = _like("%Customer%Complaints%")
    complainers = {s["s_suppkey"] for s in data["supplier"] if pat.match(s["s_comment"])}
    parts = {
        pt["p_partkey"]: (pt["p_brand"], pt["p_type"], pt["p_size"])
        for pt in data["part"]
        if pt["p_brand"] != p["brand"]
        and not pt["p_type"].startswith(p["type_prefix"])
        and pt["p_size"] in p["sizes"]
    }
    groups = defaultdict(set)
    for ps in data["partsupp"]:
        key = parts.get(ps["ps_partkey"])
        if key is not None and ps["ps_suppkey"] not in complainers:
            groups[key].add(ps["ps_suppkey"])
    rows = [(b, t, s, len(sk)) for (b, t, s), sk in groups.items()]
    rows = _canonical(rows, [(3, False), (0, True), (1, True), (2, True)])
    return ResultSet(
        (("p_brand", "str"), ("p_type", "str"), ("p_size", "int"), ("supplier_cnt", "int")), rows
    )


def naive_q17(data, p):
    parts = {
        pt["p_partkey"]
        for pt in data["part"]
        if pt["p_brand"] == p["brand"] and pt["p_container"] == p["container"]
    }
    stats = defaultdict(lambda: [0, 0])
    for li in data["lineitem"]:
        if li["l_partkey"] in parts:
            stats[li["l_partkey"]][0] += li["l_quantity"]
            stats[li["l_partkey"]][1] += 1
    total = 0
    for li in data["lineitem"]:
        if li["l_partkey"] in parts:
            s, c = stats[li["l_partkey"]]
            if 5 * li["l_quantity"] * c < s:
                total += li["l_extendedprice"]
    return ResultSet((("avg_yearly", "dec:2"),), [(_div_half_up(total, 7),)])


def naive_q18(data, p):
    qty = defaultdict(int)
    for li in data["lineitem"]:
        qty[li["l_orderkey"]] += li["l_quantity"]
    big = {ok for ok, q in qty.items() if q > p["quantity"] * 100}
    cname = {c["c_custkey"]: c["c_name"] for c in data["customer"]}
    rows = []
    for o in data["orders"]:
        ok = o["o_orderkey"]
        if ok in big:
            rows.append(
                (
                    cname[o["o_custkey"]], o["o_custkey"], ok, o["o_orderdate"],
                    o["o_totalprice"], qty[ok],
                )
            )
    rows = _canonical(rows, [(4, False), (3, True)])[:100]
    return ResultSet(
        (
            ("c_name", "str"), ("c_custkey", "int"), ("o_orderkey", "int"),
            ("o_orderdate", "date"), ("o_totalprice", "dec:2"), ("sum_qty", "dec:2"),
        ),
        rows,
    )


_Q19_GROUPS = {
    "SM": {"SM CASE", "SM BOX", "SM PACK", "SM PKG"},
    "MED": {"MED BAG", "MED BOX", "MED PKG", "MED PACK"},
    "LG": {"LG CASE", "LG BOX", "LG PACK", "LG PKG"},
}


def naive_q19(data, p):
    parts = {pt["p_partkey"]: pt for pt in data["part"]}
    total = 0
    for li in data["lineitem"]:
        if li["l_shipinstruct"] != "DELIVER IN PERSON" or li["l_shipmode"] not in ("AIR", "AIR REG"):
            continue
        pt = parts[li["l_partkey"]]
        q = li["l_quantity"]
        for brand, grp, qlo, shi in (
            (p["brand1"], "SM", p["qty1"], 5),
            (p["brand2"], "MED", p["qty2"], 10),
            (p["brand3"], "LG", p["qty3"], 15),
        ):
            if (
                pt["p_brand"] == brand
                and pt["p_container"] in _Q19_GROUPS[grp]
                and qlo * 100 <= q <= (qlo + 10) * 100
                and 1 <= pt["p_size"] <= shi
            ):
                total += _rev(li)
                break
    return ResultSet((("revenue", "dec:4"),), [(total,)])


def naive_q20(data, p):
    parts = {pt["p_partkey"] for pt in data["part"] if pt["p_name"].startswith(p["color"])}
    lo, hi = _days(p["year"], 1), _days(p["year"] + 1, 1)
    qty = defaultdict(int)
    for li in data["lineitem"]:
        if lo <= li["l_shipdate"] < hi:
            qty[(li["l_partkey"], li["l_suppkey"])] += li["l_quantity"]
    suppkeys = set()
    for ps in data["partsupp"]:
        if ps["ps_partkey"] in parts:
            s = qty.get((ps["ps_partkey"], ps["ps_suppkey"]))
            if s is not None and 200 * ps["ps_availqty"] > s:
                suppkeys.add(ps["ps_suppkey"])
    nat = {n["n_nationkey"] for n in data["nation"] if n["n_name"] == p["nation"]}
    rows = [
        (s["s_name"], s["s_address"])
        for s in data["supplier"]
        if s["s_suppkey"] in suppkeys and s["s_nationkey"] in nat
    ]
    rows = _canonical(rows, [(0, True)])
    return ResultSet((("s_name", "str"), ("s_address", "str")), rows)


def naive_q21(data, p):
    nat = {n["n_nationkey"] for n in data["nation"] if n["n_name"] == p["nation"]}
    saudi = {s["s_suppkey"]: s["s_name"] for s in data["supplier"] if s["s_nationkey"] in nat}
    fstatus = {o["o_orderkey"] for o in data["orders"] if o["o_orderstatus"] == "F"}
    all_supp = defaultdict(set)
    late_supp = defaultdict(set)
    for li in data["lineitem"]:
        all_supp[li["l_orderkey"]].add(li["l_suppkey"])
        if li["l_receiptdate"] > li["l_commitdate"]:
            late_supp[li["l_orderkey"]].add(li["l_suppkey"])
    acc = defaultdict(int)
    for li in data["lineitem"]:
        ok, sk = li["l_orderkey"], li["l_suppkey"]
        if (
            sk in saudi
            and ok in fstatus
            and li["l_receiptdate"] > li["l_commitdate"]
            and len(all_supp[ok]) >= 2
            and late_supp[ok] == {sk}
        ):
            acc[saudi[sk]] += 1
    rows = _canonical(list(acc.items()), [(1, False), (0, True)])[:100]
    return ResultSet((("s_name", "str"), ("numwait", "int")), rows)


def naive_q22(data, p):
    codes = set(p["codes"])
    eligible = [
        c for c in data["customer"] if c["c_phone"][:2] in codes
    ]
    pos = [c["c_acctbal"] for c in eligible if c["c_acctbal"] > 0]
    bal_sum, bal_cnt = sum(pos), len(pos)
    has_order = {o["o_custkey"] for o in data["orders"]}
    acc = defaultdict(lambda: [0, 0])
    for c in eligible:
        if c["c_custkey"] in has_order:
            continue
        if c["c_acctbal"] * bal_cnt > bal_sum:
            a = acc[c["c_phone"][:2]]
            a[0] += 1
            a[1] += c["c_acctbal"]
    rows = [(code, n, s) for code, (n, s) in acc.items()]
    rows = _canonical(rows, [(0, True)])
    return ResultSet((("cntrycode", "str"), ("numcust", "int"), ("totacctbal", "dec:2")), rows)


def naive_query(qid: int, data: dict, params: dict, sf) -> ResultSet:
    if qid == 11:
        return naive_q11(data, params, sf)
    fn = globals()[f"naive_q{qid}"]
    return fn(data, params)
