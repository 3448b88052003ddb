"""Seeded generator of TPC-H-shaped data at an arbitrary rational scale factor.

Every field of every row is a pure function of (seed, table, row index), so a
contiguous row range of any table can be generated independently and repeated
runs are byte-identical.  Value domains cover what the 22 decision-support
queries select on (1992-1998 date ranges, discounts 0.00-0.10, quantities
1-50, the standard region/nation constants, brand/type/container vocabulary);
statistical fidelity to the official generator is explicitly not a goal.

Cardinalities per scale factor sf:

    region 5, nation 25 (fixed)
    supplier 10_000*sf, customer 150_000*sf, part 200_000*sf
    partsupp 4 per part, orders 1_500_000*sf
    lineitem 1..7 per order (seed-independent), about 6_000_000*sf

Line counts per order intentionally do not depend on the user seed, so
``row_count`` is exact for every seed.
"""

from __future__ import annotations

import os
from datetime import date, timedelta
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import SchemaError
from .rng import MASK64, mix, splitmix64, splitmix64_np
from .schema import DATE, DEC, INT, STR, TableDef, table

Row = tuple

DEFAULT_SEED = 42

_EPOCH_ORD = date(1970, 1, 1).toordinal()


def date_to_days(y: int, m: int, d: int) -> int:
    return date(y, m, d).toordinal() - _EPOCH_ORD


def days_to_iso(days: int) -> str:
    return (date(1970, 1, 1) + timedelta(days=int(days))).isoformat()


def iso_to_days(s: str) -> int:
    y, m, d = s.split("-")
    return date(int(y), int(m), int(d)).toordinal() - _EPOCH_ORD


def cents_to_str(v: int) -> str:
    sign = "-" if v < 0 else ""
    q, r = divmod(abs(int(v)), 100)
    return f"{sign}{q}.{r:02d}"


def str_to_cents(s: str) -> int:
    s = s.strip()
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if "." in s:
        whole, frac = s.split(".")
        frac = (frac + "00")[:2]
    else:
        whole, frac = s, "00"
    v = int(whole or "0") * 100 + int(frac)
    return -v if neg else v


ORDER_DATE_LO = date_to_days(1992, 1, 1)
ORDER_DATE_HI = date_to_days(1998, 8, 2)
CURRENT_DATE = date_to_days(1995, 6, 17)

REGIONS = ("AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST")

# (name, region key), nation key = position
NATIONS = (
    ("ALGERIA", 0), ("ARGENTINA", 1), ("BRAZIL", 1), ("CANADA", 1),
    ("EGYPT", 4), ("ETHIOPIA", 0), ("FRANCE", 3), ("GERMANY", 3),
    ("INDIA", 2), ("INDONESIA", 2), ("IRAN", 4), ("IRAQ", 4),
    ("JAPAN", 2), ("JORDAN", 4), ("KENYA", 0), ("MOROCCO", 0),
    ("MOZAMBIQUE", 0), ("PERU", 1), ("CHINA", 2), ("ROMANIA", 3),
    ("SAUDI ARABIA", 4), ("VIETNAM", 2), ("RUSSIA", 3),
    ("UNITED KINGDOM", 3), ("UNITED STATES", 1),
)

SEGMENTS = ("AUTOMOBILE", "BUILDING", "FURNITURE", "MACHINERY", "HOUSEHOLD")
PRIORITIES = ("1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW")
INSTRUCTS = ("DELIVER IN PERSON", "COLLECT COD", "NONE", "TAKE BACK RETURN")
MODES = ("REG AIR", "AIR", "RAIL", "SHIP", "TRUCK", "MAIL", "FOB")
TYPES_1 = ("STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO")
TYPES_2 = ("ANODIZED", "BURNISHED", "PLATED", "POLISHED", "BRUSHED")
TYPES_3 = ("TIN", "NICKEL", "BRASS", "STEEL", "COPPER")
CONTAINERS_1 = ("SM", "LG", "MED", "JUMBO", "WRAP")
CONTAINERS_2 = ("CASE", "BOX", "BAG", "JAR", "PACK", "PKG", "CAN", "DRUM")

COLORS = (
    "almond antique aquamarine azure beige bisque black blanched blue blush "
    "brown burlywood burnished chartreuse chiffon chocolate coral cornflower "
    "cornsilk cream cyan dark deep dim dodger drab firebrick floral forest "
    "frosted gainsboro ghost goldenrod green grey honeydew hot indian ivory "
    "khaki lace lavender lawn lemon light lime linen magenta maroon medium "
    "metallic midnight mint misty moccasin navajo navy olive orange orchid "
    "pale papaya peach peru pink plum powder puff purple red rose rosy royal "
    "saddle salmon sandy seashell sienna sky slate smoke snow spring steel "
    "tan thistle tomato turquoise violet wheat white yellow"
).split()

COMMENT_WORDS = (
    "carefully quickly furiously slyly blithely express final ironic pending "
    "regular special requests deposits packages instructions accounts ideas "
    "theodolites foxes pinto beans dependencies platelets asymptotes courts "
    "realms braids excuses dolphins waters sheaves grouches pearls warthogs "
    "daring sometimes silent bold even unusual"
).split()

_ALNUM = "abcdefghijklmnopqrstuvwxyz0123456789"

# table tags feeding the per-row mixer
_T_REGION, _T_NATION, _T_SUPPLIER, _T_CUSTOMER = 1, 2, 3, 4
_T_PART, _T_PARTSUPP, _T_ORDERS, _T_LINEITEM = 5, 6, 7, 8
_T_NLINES = 9  # per-order lineitem count; deliberately not seed-dependent

_GAMMA = 0x9E3779B97F4A7C15

BASE_COUNTS = {
    "supplier": 10_000,
    "customer": 150_000,
    "part": 200_000,
    "orders": 1_500_000,
}
FIXED_COUNTS = {"region": 5, "nation": 25}


def as_scale(sf) -> Fraction:
    """Normalize a scale factor to an exact positive rational."""
    if isinstance(sf, Fraction):
        frac = sf
    elif isinstance(sf, int):
        frac = Fraction(sf)
    elif isinstance(sf, float):
        frac = Fraction(str(sf))
    elif isinstance(sf, str):
        frac = Fraction(sf)
    else:
        raise ValueError(f"unsupported scale factor {sf!r}")
    if frac <= 0:
        raise ValueError(f"scale factor must be positive, got {sf!r}")
    return frac


def _scaled(base: int, sf: Fraction) -> int:
    return int(base * sf)  # Fraction * int floor via int()


def _counts(sf: Fraction) -> dict[str, int]:
    c = dict(FIXED_COUNTS)
    for t, base in BASE_COUNTS.items():
        c[t] = _scaled(base, sf)
    c["partsupp"] = 4 * c["part"]
    if c["supplier"] < 4 or c["customer"] < 3 or c["part"] < 1 or c["orders"] < 1:
        raise ValueError(
            f"scale factor {sf} too small to keep foreign keys resolvable"
        )
    return c


def _nlines_base() -> int:
    h = 0x8E9B5DAA61FD2F03
    h = splitmix64(h ^ _T_NLINES)
    return h


_NLINES_BASE = _nlines_base()


def lines_per_order(order_index: int) -> int:
    """Number of lineitems of the given 0-based order, in 1..7."""
    return 1 + splitmix64(_NLINES_BASE ^ order_index) % 7


def _lines_per_order_np(lo: int, hi: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.uint64)
    return (splitmix64_np(np.uint64(_NLINES_BASE) ^ idx) % np.uint64(7) + np.uint64(1)).astype(
        np.int64
    )


def lineitem_count(order_count: int) -> int:
    """Exact lineitem cardinality for the first ``order_count`` orders."""
    total = 0
    step = 1 << 22
    for lo in range(0, order_count, step):
        hi = min(lo + step, order_count)
        total += int(_lines_per_order_np(lo, hi).sum())
    return total


def row_count(table_name: str, sf) -> int:
    """Rows the generator emits for (table, sf); exact, including lineitem."""
    frac = as_scale(sf)
    c = _counts(frac)
    if table_name == "lineitem":
        return lineitem_count(c["orders"])
    if table_name not in c:
        raise SchemaError(f"unknown table {table_name!r}")
    return c[table_name]


# -- field helpers -----------------------------------------------------------


def _u(state: int, tag: int, lo: int, hi: int) -> int:
    return lo + splitmix64(state ^ (tag * _GAMMA & MASK64)) % (hi - lo + 1)


def _words(state: int, tag: int, pool: tuple, lo: int, hi: int, max_len: int) -> str:
    n = _u(state, tag, lo, hi)
    picks = [pool[_u(state, tag * 131 + k + 1, 0, len(pool) - 1)] for k in range(n)]
    out = " ".join(picks)
    return out[:max_len]


def _text(state: int, tag: int, lo: int, hi: int) -> str:
    n = _u(state, tag, lo, hi)
    chars = []
    for k in range((n + 7) // 8):
        v = splitmix64(state ^ ((tag * 257 + k + 1) * _GAMMA & MASK64))
        for _ in range(8):
            chars.append(_ALNUM[v % 36])
            v //= 36
    return "".join(chars[:n])


def _phone(state: int, tag: int, nationkey: int) -> str:
    a = _u(state, tag, 100, 999)
    b = _u(state, tag + 1, 100, 999)
    c = _u(state, tag + 2, 1000, 9999)
    return f"{nationkey + 10}-{a}-{b}-{c}"


def retail_price_cents(partkey: int) -> int:
    return 90_000 + (partkey // 10) % 20_001 + 100 * (partkey % 1000)


def part_suppliers(partkey: int, supplier_count: int) -> list[int]:
    """The four distinct suppliers carrying a part (partsupp pairing rule)."""
    s = supplier_count
    return [
        (partkey + i * (s // 4 + (partkey - 1) // s)) % s + 1
        for i in range(4)
    ]


def _valid_custkey(k: int) -> int:
    # customers with key % 3 == 0 place no orders (gives the distribution
    # queries a population of order-less customers)
    return (k // 2) * 3 + 1 + (k & 1)


def _charge_cents(ext: int, disc: int, tax: int) -> int:
    # extendedprice * (1 - discount) * (1 + tax), rounded half-up to cents
    x = ext * (100 - disc) * (100 + tax)
    return (x + 5_000) // 10_000


# -- per-table row builders --------------------------------------------------


def _gen_region(sf, seed, start, stop):
    base = mix(seed, _T_REGION)
    for i in range(start, stop):
        st = splitmix64(base ^ i)
        yield (i, REGIONS[i], _words(st, 1, COMMENT_WORDS, 4, 9, 152))


def _gen_nation(sf, seed, start, stop):
    base = mix(seed, _T_NATION)
    for i in range(start, stop):
        st = splitmix64(base ^ i)
        name, rk = NATIONS[i]
        yield (i, name, rk, _words(st, 1, COMMENT_WORDS, 4, 9, 152))


def _gen_supplier(sf, seed, start, stop, counts):
    base = mix(seed, _T_SUPPLIER)
    for i in range(start, stop):
        st = splitmix64(base ^ i)
        key = i + 1
        nk = _u(st, 3, 0, 24)
        quirk = splitmix64(mix(0x5EED, key)) % 1000
        if quirk < 3:
            comment = (
                f"{_words(st, 9, COMMENT_WORDS, 1, 2, 30)} Customer "
                f"{_words(st, 10, COMMENT_WORDS, 1, 2, 30)} Complaints"
            )[:101]
        elif quirk < 6:
            comment = (
                f"{_words(st, 9, COMMENT_WORDS, 1, 2, 30)} Customer "
                f"{_words(st, 10, COMMENT_WORDS, 1, 2, 30)} Recommends"
            )[:101]
        else:
            comment = _words(st, 9, COMMENT_WORDS, 3, 7, 101)
        yield (
            key,
            f"Supplier#{key:09d}",
            _text(st, 2, 10, 30),
            nk,
            _phone(st, 4, nk),
            _u(st, 7, -99_999, 999_999),
            comment,
        )


def _gen_customer(sf, seed, start, stop, counts):
    base = mix(seed, _T_CUSTOMER)
    for i in range(start, stop):
        st = splitmix64(base ^ i)
        key = i + 1
        nk = _u(st, 3, 0, 24)
        yield (
            key,
            f"Customer#{key:09d}",
            _text(st, 2, 10, 30),
            nk,
            _phone(st, 4, nk),
            _u(st, 7, -99_999, 999_999),
            SEGMENTS[_u(st, 8, 0, 4)],
            _words(st, 9, COMMENT_WORDS, 3, 7, 117),
        )


def _gen_part(sf, seed, start, stop, counts):
    base = mix(seed, _T_PART)
    for i in range(start, stop):
        st = splitmix64(base ^ i)
        key = i + 1
        mfgr = _u(st, 2, 1, 5)
        brand = mfgr * 10 + _u(st, 3, 1, 5)
        name = " ".join(
            COLORS[_u(st, 20 + k, 0, len(COLORS) - 1)] for k in range(5)
        )[:55]
        ptype = (
            f"{TYPES_1[_u(st, 4, 0, 5)]} {TYPES_2[_u(st, 5, 0, 4)]} "
            f"{TYPES_3[_u(st, 6, 0, 4)]}"
        )
        container = f"{CONTAINERS_1[_u(st, 8, 0, 4)]} {CONTAINERS_2[_u(st, 9, 0, 7)]}"
        yield (
            key,
            name,
            f"Manufacturer#{mfgr}",
            f"Brand#{brand}",
            ptype,
            _u(st, 7, 1, 50),
            container,
            retail_price_cents(key),
            _words(st, 10, COMMENT_WORDS, 1, 3, 23),
        )


def _gen_partsupp(sf, seed, start, stop, counts):
    base = mix(seed, _T_PARTSUPP)
    s_count = counts["supplier"]
    for j in range(start, stop):
        st = splitmix64(base ^ j)
        partkey = j // 4 + 1
        suppkey = part_suppliers(partkey, s_count)[j % 4]
        yield (
            partkey,
            suppkey,
            _u(st, 2, 1, 9_999),
            _u(st, 3, 100, 100_000),
            _words(st, 4, COMMENT_WORDS, 4, 10, 199),
        )


def _line_fields(li_base: int, order_index: int, line_j: int, orderdate: int, counts):
    """All lineitem columns for (order, line); shared by orders/lineitem/RF1."""
    st = splitmix64(splitmix64(li_base ^ order_index) ^ (line_j + 1) * _GAMMA & MASK64)
    partkey = _u(st, 1, 1, counts["part"])
    suppkey = part_suppliers(partkey, counts["supplier"])[_u(st, 2, 0, 3)]
    qty_units = _u(st, 3, 1, 50)
    ext = qty_units * retail_price_cents(partkey)
    disc = _u(st, 4, 0, 10)
    tax = _u(st, 5, 0, 8)
    shipdate = orderdate + _u(st, 6, 1, 121)
    commitdate = orderdate + _u(st, 7, 30, 90)
    receiptdate = shipdate + _u(st, 8, 1, 30)
    if receiptdate <= CURRENT_DATE:
        returnflag = "R" if _u(st, 9, 0, 1) else "A"
    else:
        returnflag = "N"
    linestatus = "O" if shipdate > CURRENT_DATE else "F"
    return (
        order_index + 1,
        partkey,
        suppkey,
        line_j + 1,
        qty_units * 100,
        ext,
        disc,
        tax,
        returnflag,
        linestatus,
        shipdate,
        commitdate,
        receiptdate,
        INSTRUCTS[_u(st, 10, 0, 3)],
        MODES[_u(st, 11, 0, 6)],
        _words(st, 12, COMMENT_WORDS, 2, 4, 44),
    )


def _order_header(base: int, li_base: int, order_index: int, counts, clerk_count: int):
    st = splitmix64(base ^ order_index)
    orderdate = _u(st, 1, ORDER_DATE_LO, ORDER_DATE_HI)
    cv = counts["customer"] - counts["customer"] // 3
    custkey = _valid_custkey(_u(st, 2, 0, cv - 1))
    nlines = lines_per_order(order_index)
    total = 0
    statuses = set()
    for j in range(nlines):
        line = _line_fields(li_base, order_index, j, orderdate, counts)
        total += _charge_cents(line[5], line[6], line[7])
        statuses.add(line[9])
    status = "F" if statuses == {"F"} else ("O" if statuses == {"O"} else "P")
    return (
        order_index + 1,
        custkey,
        status,
        total,
        orderdate,
        PRIORITIES[_u(st, 3, 0, 4)],
        f"Clerk#{_u(st, 4, 1, clerk_count):09d}",
        0,
        _words(st, 5, COMMENT_WORDS, 4, 8, 79),
    )


def _gen_orders(sf, seed, start, stop, counts):
    base = mix(seed, _T_ORDERS)
    li_base = mix(seed, _T_LINEITEM)
    clerk_count = max(1, _scaled(1000, sf))
    for i in range(start, stop):
        yield _order_header(base, li_base, i, counts, clerk_count)


def _order_of_row(row: int, order_count: int) -> tuple[int, int]:
    """Map a lineitem row index to (order index, offset of its first row)."""
    step = 1 << 20
    consumed = 0
    for lo in range(0, order_count, step):
        hi = min(lo + step, order_count)
        counts = _lines_per_order_np(lo, hi)
        block = int(counts.sum())
        if consumed + block > row:
            cum = np.cumsum(counts)
            k = int(np.searchsorted(cum, row - consumed, side="right"))
            first = consumed + (int(cum[k - 1]) if k else 0)
            return lo + k, first
        consumed += block
    return order_count, consumed


def _gen_lineitem(sf, seed, start, stop, counts):
    base = mix(seed, _T_ORDERS)
    li_base = mix(seed, _T_LINEITEM)
    order_count = counts["orders"]
    oi, first = _order_of_row(start, order_count)
    row = first
    while oi < order_count and row < stop:
        ost = splitmix64(base ^ oi)
        orderdate = _u(ost, 1, ORDER_DATE_LO, ORDER_DATE_HI)
        for j in range(lines_per_order(oi)):
            if row >= stop:
                return
            if row >= start:
                yield _line_fields(li_base, oi, j, orderdate, counts)
            row += 1
        oi += 1


_GENERATORS = {
    "region": _gen_region,
    "nation": _gen_nation,
    "supplier": _gen_supplier,
    "customer": _gen_customer,
    "part": _gen_part,
    "partsupp": _gen_partsupp,
    "orders": _gen_orders,
    "lineitem": _gen_lineitem,
}


def generate_table(
    table_name: str,
    sf,
    seed: int = DEFAULT_SEED,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[Row]:
    """Stream rows [start, stop) of a table; the full table by default."""
    frac = as_scale(sf)
    total = row_count(table_name, frac)
    counts = _counts(frac)
    if stop is None:
        stop = total
    start = max(0, start)
    stop = min(stop, total)
    gen = _GENERATORS[table_name]
    if table_name in ("region", "nation"):
        return gen(frac, seed, start, stop)
    return gen(frac, seed, start, stop, counts)


def generate_refresh_batch(sf, seed: int, batch_index: int) -> tuple[list[Row], list[Row]]:
    """New orders plus their lineitems for one refresh insert batch.

    Batch ``i`` extends the dense order-index space past the initial
    population, so its keys are fresh and batches never collide.
    """
    frac = as_scale(sf)
    counts = _counts(frac)
    batch = max(1, _scaled(1500, frac))
    lo = counts["orders"] + batch_index * batch
    base = mix(seed, _T_ORDERS)
    li_base = mix(seed, _T_LINEITEM)
    clerk_count = max(1, _scaled(1000, frac))
    orders_rows = []
    line_rows = []
    for oi in range(lo, lo + batch):
        orders_rows.append(_order_header(base, li_base, oi, counts, clerk_count))
        ost = splitmix64(base ^ oi)
        orderdate = _u(ost, 1, ORDER_DATE_LO, ORDER_DATE_HI)
        for j in range(lines_per_order(oi)):
            line_rows.append(_line_fields(li_base, oi, j, orderdate, counts))
    return orders_rows, line_rows


def refresh_batch_size(sf) -> int:
    return max(1, _scaled(1500, as_scale(sf)))


# -- .tbl materialization ----------------------------------------------------


def format_tbl_row(tdef: TableDef, row: Row) -> str:
    parts = []
    for col, v in zip(tdef.columns, row):
        if col.kind == DEC:
            parts.append(cents_to_str(v))
        elif col.kind == DATE:
            parts.append(days_to_iso(v))
        else:
            parts.append(str(v))
    return "|".join(parts) + "|\n"


def write_tbl(table_name: str, rows: Iterable[Row], path: str) -> int:
    """Write rows as pipe-delimited text with a trailing pipe; returns bytes.

    A failure mid-write removes the partial file.
    """
    tdef = table(table_name)
    written = 0
    try:
        with open(path, "wb") as fh:
            for row in rows:
                data = format_tbl_row(tdef, row).encode("utf-8")
                fh.write(data)
                written += len(data)
    except Exception:
        if os.path.exists(path):
            os.unlink(path)
        raise
    return written


def parse_tbl_line(tdef: TableDef, line: str) -> Row:
    fields = line.rstrip("\n").split("|")[:-1]
    if len(fields) != len(tdef.columns):
        raise SchemaError(
            f"{tdef.name}: expected {len(tdef.columns)} fields, got {len(fields)}"
        )
    out = []
    for col, raw in zip(tdef.columns, fields):
        if col.kind == INT:
            out.append(int(raw))
        elif col.kind == DEC:
            out.append(str_to_cents(raw))
        elif col.kind == DATE:
            out.append(iso_to_days(raw))
        else:
            out.append(raw)
    return tuple(out)


def read_tbl(table_name: str, path: str) -> Iterator[Row]:
    tdef = table(table_name)
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield parse_tbl_line(tdef, line)
