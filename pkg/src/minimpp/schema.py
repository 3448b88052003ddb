"""The eight TPC-H relations: typed columns, key structure, segmentation keys.

Physical value conventions, identical in the generator, the stores and the
ingest paths:

* ``int``  -- plain 64-bit integer (keys, sizes, counts)
* ``dec``  -- decimal(15,2) carried as 64-bit integer cents
* ``date`` -- days since 1970-01-01 as a 64-bit integer
* ``str``  -- text, fixed or variable length up to ``max_len``

Column order is fixed and shared by the generator, the ``.tbl`` files, the
CSV packets and the stores.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SchemaError

INT = "int"
DEC = "dec"
DATE = "date"
STR = "str"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    max_len: int | None = None  # strings only
    fixed: bool = False


@dataclass(frozen=True)
class TableDef:
    name: str
    columns: tuple[Column, ...]
    primary_key: tuple[str, ...]
    # Column whose hash assigns each row to a segmentation bucket.  orders and
    # lineitem share the order key so their join is node-local; part and
    # partsupp likewise share the part key.
    segment_key: str
    foreign_keys: tuple[tuple[str, str, str], ...] = field(default=())  # (col, table, parent col)

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise SchemaError(f"table {self.name!r} has no column {name!r}")

    def index_of(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise SchemaError(f"table {self.name!r} has no column {name!r}")


def _t(name, seg, pk, cols, fks=()):
    return TableDef(
        name=name,
        columns=tuple(Column(*c) for c in cols),
        primary_key=tuple(pk),
        segment_key=seg,
        foreign_keys=tuple(fks),
    )


TABLES: dict[str, TableDef] = {
    t.name: t
    for t in (
        _t(
            "region",
            "r_regionkey",
            ("r_regionkey",),
            [
                ("r_regionkey", INT),
                ("r_name", STR, 25, True),
                ("r_comment", STR, 152),
            ],
        ),
        _t(
            "nation",
            "n_nationkey",
            ("n_nationkey",),
            [
                ("n_nationkey", INT),
                ("n_name", STR, 25, True),
                ("n_regionkey", INT),
                ("n_comment", STR, 152),
            ],
            [("n_regionkey", "region", "r_regionkey")],
        ),
        _t(
            "supplier",
            "s_suppkey",
            ("s_suppkey",),
            [
                ("s_suppkey", INT),
                ("s_name", STR, 25, True),
                ("s_address", STR, 40),
                ("s_nationkey", INT),
                ("s_phone", STR, 15, True),
                ("s_acctbal", DEC),
                ("s_comment", STR, 101),
            ],
            [("s_nationkey", "nation", "n_nationkey")],
        ),
        _t(
            "customer",
            "c_custkey",
            ("c_custkey",),
            [
                ("c_custkey", INT),
                ("c_name", STR, 25, True),
                ("c_address", STR, 40),
                ("c_nationkey", INT),
                ("c_phone", STR, 15, True),
                ("c_acctbal", DEC),
                ("c_mktsegment", STR, 10, True),
                ("c_comment", STR, 117),
            ],
            [("c_nationkey", "nation", "n_nationkey")],
        ),
        _t(
            "part",
            "p_partkey",
            ("p_partkey",),
            [
                ("p_partkey", INT),
                ("p_name", STR, 55),
                ("p_mfgr", STR, 25, True),
                ("p_brand", STR, 10, True),
                ("p_type", STR, 25),
                ("p_size", INT),
                ("p_container", STR, 10, True),
                ("p_retailprice", DEC),
                ("p_comment", STR, 23),
            ],
        ),
        _t(
            "partsupp",
            "ps_partkey",
            ("ps_partkey", "ps_suppkey"),
            [
                ("ps_partkey", INT),
                ("ps_suppkey", INT),
                ("ps_availqty", INT),
                ("ps_supplycost", DEC),
                ("ps_comment", STR, 199),
            ],
            [
                ("ps_partkey", "part", "p_partkey"),
                ("ps_suppkey", "supplier", "s_suppkey"),
            ],
        ),
        _t(
            "orders",
            "o_orderkey",
            ("o_orderkey",),
            [
                ("o_orderkey", INT),
                ("o_custkey", INT),
                ("o_orderstatus", STR, 1, True),
                ("o_totalprice", DEC),
                ("o_orderdate", DATE),
                ("o_orderpriority", STR, 15, True),
                ("o_clerk", STR, 15, True),
                ("o_shippriority", INT),
                ("o_comment", STR, 79),
            ],
            [("o_custkey", "customer", "c_custkey")],
        ),
        _t(
            "lineitem",
            "l_orderkey",
            ("l_orderkey", "l_linenumber"),
            [
                ("l_orderkey", INT),
                ("l_partkey", INT),
                ("l_suppkey", INT),
                ("l_linenumber", INT),
                ("l_quantity", DEC),
                ("l_extendedprice", DEC),
                ("l_discount", DEC),
                ("l_tax", DEC),
                ("l_returnflag", STR, 1, True),
                ("l_linestatus", STR, 1, True),
                ("l_shipdate", DATE),
                ("l_commitdate", DATE),
                ("l_receiptdate", DATE),
                ("l_shipinstruct", STR, 25, True),
                ("l_shipmode", STR, 10, True),
                ("l_comment", STR, 44),
            ],
            [
                ("l_orderkey", "orders", "o_orderkey"),
                ("l_partkey", "part", "p_partkey"),
                ("l_suppkey", "supplier", "s_suppkey"),
            ],
        ),
    )
}

TABLE_ORDER = (
    "region",
    "nation",
    "supplier",
    "customer",
    "part",
    "partsupp",
    "orders",
    "lineitem",
)


def table(name: str) -> TableDef:
    try:
        return TABLES[name]
    except KeyError:
        raise SchemaError(f"unknown table {name!r}") from None
