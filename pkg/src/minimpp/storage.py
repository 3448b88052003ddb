"""Per-node columnar store.

Fresh rows land in a row-oriented write-optimized buffer (WOS); a moveout
drains the buffer into immutable, compressed, statistics-bearing read-
optimized containers (ROS), one per segmentation bucket.  Scans serve the
union of both minus logically deleted positions, skipping row groups whose
column statistics exclude the predicate.

One writer at a time per table per node; scans materialize eagerly, so a scan
result never observes later mutations.  On-disk layout (little-endian,
versioned):

    <node dir>/<table>/seg<bucket>/c<seq>.ros     container
    <node dir>/<table>/seg<bucket>/c<seq>.del     delete bitmap, if any
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .encodings import ColumnChunk, choose_encoding, chunk_to_numpy
from .errors import EncodingError, SchemaError
from .frame import Frame
from .schema import STR, TABLES, TableDef, table

CHUNK_VALUES = 64 * 1024
DEFAULT_WOS_BUDGET = 32 * 1024 * 1024

_MAGIC = b"ROSC"
_VERSION = 1


@dataclass(frozen=True)
class Pred:
    """One conjunct of a scan predicate, prunable via chunk statistics."""

    col: str
    op: str  # eq | lt | le | gt | ge | between | isin
    value: object  # scalar, (lo, hi) for between, tuple for isin


def pred_may_match(pred: Pred, vmin, vmax) -> bool:
    if vmin is None or vmax is None:
        return True
    v = pred.value
    if pred.op == "eq":
        return vmin <= v <= vmax
    if pred.op == "lt":
        return vmin < v
    if pred.op == "le":
        return vmin <= v
    if pred.op == "gt":
        return vmax > v
    if pred.op == "ge":
        return vmax >= v
    if pred.op == "between":
        lo, hi = v
        return vmax >= lo and vmin <= hi
    if pred.op == "isin":
        return any(vmin <= x <= vmax for x in v)
    raise SchemaError(f"unknown predicate op {pred.op!r}")


def pred_mask(pred: Pred, arr: np.ndarray) -> np.ndarray:
    v = pred.value
    if pred.op == "eq":
        return arr == v
    if pred.op == "lt":
        return arr < v
    if pred.op == "le":
        return arr <= v
    if pred.op == "gt":
        return arr > v
    if pred.op == "ge":
        return arr >= v
    if pred.op == "between":
        lo, hi = v
        return (arr >= lo) & (arr <= hi)
    if pred.op == "isin":
        return np.isin(arr, list(v))
    raise SchemaError(f"unknown predicate op {pred.op!r}")


def _row_bytes(tdef: TableDef, row: tuple) -> int:
    n = 0
    for col, v in zip(tdef.columns, row):
        n += len(v) + 4 if col.kind == STR else 8
    return n


def _validate_row(tdef: TableDef, row: tuple) -> None:
    if len(row) != len(tdef.columns):
        raise SchemaError(
            f"{tdef.name}: row has {len(row)} fields, schema has {len(tdef.columns)}"
        )
    for col, v in zip(tdef.columns, row):
        if col.kind == STR:
            if not isinstance(v, str):
                raise SchemaError(f"{tdef.name}.{col.name}: expected str, got {type(v).__name__}")
        elif not isinstance(v, int) or isinstance(v, bool):
            raise SchemaError(f"{tdef.name}.{col.name}: expected int, got {type(v).__name__}")


class WosBuffer:
    """Row staging area; exceeding byte_budget makes it moveout-eligible."""

    def __init__(self, tdef: TableDef, byte_budget: int = DEFAULT_WOS_BUDGET):
        if byte_budget <= 0:
            raise SchemaError("WOS byte budget must be positive")
        self.tdef = tdef
        self.byte_budget = byte_budget
        self.rows: list[tuple] = []
        self.buckets: list[int] = []
        self.bytes_est = 0

    def append(self, rows: list[tuple], buckets: list[int]) -> None:
        self.rows.extend(rows)
        self.buckets.extend(buckets)
        for r in rows:
            self.bytes_est += _row_bytes(self.tdef, r)

    @property
    def over_budget(self) -> bool:
        return self.bytes_est > self.byte_budget

    def reset(self) -> None:
        self.rows = []
        self.buckets = []
        self.bytes_est = 0


class RosContainer:
    """Immutable encoded column set for one (table, bucket) batch."""

    def __init__(
        self,
        tdef: TableDef,
        segment_id: int,
        chunks: dict[str, list[ColumnChunk]],
        row_count: int,
        path: str | None = None,
    ):
        self.tdef = tdef
        self.segment_id = segment_id
        self.chunks = chunks
        self.row_count = row_count
        self.path = path
        self.deleted = np.zeros(row_count, dtype=bool)

    @classmethod
    def build(cls, tdef: TableDef, segment_id: int, rows: list[tuple]) -> "RosContainer":
        cols = list(zip(*rows)) if rows else [[] for _ in tdef.columns]
        chunks: dict[str, list[ColumnChunk]] = {}
        for col, values in zip(tdef.columns, cols):
            kind = "str" if col.kind == STR else "int"
            per_col = []
            for lo in range(0, max(len(values), 1), CHUNK_VALUES):
                part = list(values[lo : lo + CHUNK_VALUES])
                per_col.append(choose_encoding(part, kind))
            chunks[col.name] = per_col
        return cls(tdef, segment_id, chunks, len(rows))

    def payload_bytes(self) -> int:
        return sum(c.nbytes for chs in self.chunks.values() for c in chs)

    # -- persistence --

    def save(self, path: str) -> None:
        names = self.tdef.column_names()
        header = {
            "table": self.tdef.name,
            "segment": self.segment_id,
            "row_count": self.row_count,
            "columns": [
                {
                    "name": n,
                    "kind": c.kind,
                    "encoding": c.encoding,
                    "value_count": c.value_count,
                    "null_count": c.null_count,
                    "min": c.vmin,
                    "max": c.vmax,
                    "nbytes": c.nbytes,
                }
                for n in names
                for c in self.chunks[n]
            ],
        }
        blob = json.dumps(header, separators=(",", ":")).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<HI", _VERSION, len(blob)))
            fh.write(blob)
            for n in names:
                for c in self.chunks[n]:
                    fh.write(c.payload)
        self.path = path
        self.save_deletes()

    def save_deletes(self) -> None:
        if self.path is None:
            return
        del_path = self.path[:-4] + ".del"
        if self.deleted.any():
            with open(del_path, "wb") as fh:
                fh.write(np.packbits(self.deleted).tobytes())
        elif os.path.exists(del_path):
            os.unlink(del_path)

    @classmethod
    def load(cls, tdef: TableDef, path: str) -> "RosContainer":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise EncodingError(f"{path}: not a container file")
            version, hlen = struct.unpack("<HI", fh.read(6))
            if version != _VERSION:
                raise EncodingError(f"{path}: unsupported version {version}")
            header = json.loads(fh.read(hlen))
            chunks: dict[str, list[ColumnChunk]] = {n: [] for n in tdef.column_names()}
            for meta in header["columns"]:
                chunks[meta["name"]].append(
                    ColumnChunk(
                        kind=meta["kind"],
                        encoding=meta["encoding"],
                        value_count=meta["value_count"],
                        null_count=meta["null_count"],
                        vmin=meta["min"],
                        vmax=meta["max"],
                        payload=fh.read(meta["nbytes"]),
                    )
                )
        out = cls(tdef, header["segment"], chunks, header["row_count"], path)
        del_path = path[:-4] + ".del"
        if os.path.exists(del_path):
            with open(del_path, "rb") as fh:
                bits = np.frombuffer(fh.read(), dtype=np.uint8)
            out.deleted = np.unpackbits(bits, count=out.row_count).astype(bool)
        return out

    def copy(self) -> "RosContainer":
        dup = RosContainer(self.tdef, self.segment_id, dict(self.chunks), self.row_count)
        dup.deleted = self.deleted.copy()
        return dup


class TableStore:
    """Containers plus WOS for one table on one node."""

    def __init__(self, tdef: TableDef, data_dir: str | None, wos_budget: int):
        self.tdef = tdef
        self.data_dir = data_dir
        self.wos = WosBuffer(tdef, wos_budget)
        self.containers: list[RosContainer] = []
        self._next_id = 0

    def logical_rows(self) -> int:
        live = sum(c.row_count - int(c.deleted.sum()) for c in self.containers)
        return live + len(self.wos.rows)


class TableCatalog:
    """All table stores of one node: logical contents = WOS ∪ ROS − deletes."""

    def __init__(self, data_dir: str | None = None, wos_budget: int = DEFAULT_WOS_BUDGET):
        self.data_dir = data_dir
        self.wos_budget = wos_budget
        self.stores: dict[str, TableStore] = {}
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            self._load_existing()

    def store(self, table_name: str) -> TableStore:
        if table_name not in self.stores:
            self.stores[table_name] = TableStore(table(table_name), self.data_dir, self.wos_budget)
        return self.stores[table_name]

    def _load_existing(self) -> None:
        for name in sorted(os.listdir(self.data_dir)):
            tdir = os.path.join(self.data_dir, name)
            if not os.path.isdir(tdir) or name not in TABLES:
                continue
            st = self.store(name)
            for seg in sorted(os.listdir(tdir)):
                sdir = os.path.join(tdir, seg)
                if not os.path.isdir(sdir):
                    continue
                for fn in sorted(os.listdir(sdir)):
                    if fn.endswith(".ros"):
                        st.containers.append(RosContainer.load(st.tdef, os.path.join(sdir, fn)))
                        st._next_id += 1

    # -- writes --

    def ingest_rows(self, table_name: str, rows: list[tuple], buckets=None) -> int:
        """Append a batch to the WOS; auto-moveout once over budget."""
        st = self.store(table_name)
        rows = list(rows)
        if not rows:
            return 0
        _validate_row(st.tdef, rows[0])
        for r in rows:
            if len(r) != len(st.tdef.columns):
                raise SchemaError(f"{table_name}: ragged row in batch")
        if buckets is None:
            buckets = [0] * len(rows)
        elif not isinstance(buckets, list):
            buckets = [int(b) for b in buckets]
        st.wos.append(rows, buckets)
        if st.wos.over_budget:
            self.moveout(table_name)
        return len(rows)

    def moveout(self, table_name: str) -> int:
        """Drain the WOS into one new ROS container per bucket present.

        Containers are fully built (and persisted) before the buffer is
        swapped out, so an encoding failure leaves the WOS intact.
        """
        st = self.store(table_name)
        if not st.wos.rows:
            return 0
        by_bucket: dict[int, list[tuple]] = {}
        for row, b in zip(st.wos.rows, st.wos.buckets):
            by_bucket.setdefault(b, []).append(row)
        built = []
        for b in sorted(by_bucket):
            cont = RosContainer.build(st.tdef, b, by_bucket[b])
            if self.data_dir:
                seg_dir = os.path.join(self.data_dir, table_name, f"seg{b:05d}")
                os.makedirs(seg_dir, exist_ok=True)
                cont.save(os.path.join(seg_dir, f"c{st._next_id:06d}.ros"))
            st._next_id += 1
            built.append(cont)
        moved = len(st.wos.rows)
        st.containers.extend(built)
        st.wos.reset()
        return moved

    def delete_rows(self, table_name: str, preds: list[Pred], buckets=None) -> int:
        """Mark matching rows deleted (ROS) or drop them (WOS); returns count."""
        st = self.store(table_name)
        bucket_set = set(buckets) if buckets is not None else None
        deleted = 0
        for cont in st.containers:
            if bucket_set is not None and cont.segment_id not in bucket_set:
                continue
            changed = False
            for lo in range(0, cont.row_count, CHUNK_VALUES):
                k = lo // CHUNK_VALUES
                hi = min(lo + CHUNK_VALUES, cont.row_count)
                skip = False
                for p in preds:
                    c = cont.chunks[p.col][k]
                    if not pred_may_match(p, c.vmin, c.vmax):
                        skip = True
                        break
                if skip:
                    continue
                mask = np.ones(hi - lo, dtype=bool)
                for p in preds:
                    mask &= pred_mask(p, chunk_to_numpy(cont.chunks[p.col][k]))
                mask &= ~cont.deleted[lo:hi]
                n = int(mask.sum())
                if n:
                    cont.deleted[lo:hi] |= mask
                    deleted += n
                    changed = True
            if changed:
                cont.save_deletes()
        if st.wos.rows:
            keep_rows, keep_buckets = [], []
            idx = {c.name: i for i, c in enumerate(st.tdef.columns)}
            for row, b in zip(st.wos.rows, st.wos.buckets):
                if bucket_set is not None and b not in bucket_set:
                    keep_rows.append(row)
                    keep_buckets.append(b)
                    continue
                if all(self._row_matches(p, row[idx[p.col]]) for p in preds):
                    deleted += 1
                else:
                    keep_rows.append(row)
                    keep_buckets.append(b)
            st.wos.rows = keep_rows
            st.wos.buckets = keep_buckets
        return deleted

    @staticmethod
    def _row_matches(p: Pred, v) -> bool:
        if p.op == "eq":
            return v == p.value
        if p.op == "lt":
            return v < p.value
        if p.op == "le":
            return v <= p.value
        if p.op == "gt":
            return v > p.value
        if p.op == "ge":
            return v >= p.value
        if p.op == "between":
            return p.value[0] <= v <= p.value[1]
        if p.op == "isin":
            return v in p.value
        raise SchemaError(f"unknown predicate op {p.op!r}")

    # -- reads --

    def scan(
        self,
        table_name: str,
        columns: list[str],
        preds: list[Pred] | None = None,
        buckets=None,
        prune: bool = True,
    ) -> Frame:
        """Project logical rows matching all predicate conjuncts.

        Row groups whose statistics exclude a conjunct are skipped without
        decoding; deleted rows never appear.
        """
        st = self.store(table_name)
        preds = preds or []
        for name in columns:
            st.tdef.column(name)
        for p in preds:
            st.tdef.column(p.col)
        bucket_set = set(int(b) for b in buckets) if buckets is not None else None
        str_cols = {c.name for c in st.tdef.columns if c.kind == STR}
        pieces: list[Frame] = []
        for cont in st.containers:
            if bucket_set is not None and cont.segment_id not in bucket_set:
                continue
            pieces.extend(self._scan_container(cont, columns, preds, str_cols, prune))
        if st.wos.rows:
            wf = self._scan_wos(st, columns, preds, bucket_set)
            if wf is not None:
                pieces.append(wf)
        if not pieces:
            return Frame.empty(columns, str_cols)
        return Frame.concat(pieces)

    def _scan_container(self, cont, columns, preds, str_cols, prune):
        out = []
        for lo in range(0, cont.row_count, CHUNK_VALUES):
            k = lo // CHUNK_VALUES
            hi = min(lo + CHUNK_VALUES, cont.row_count)
            if prune and any(
                not pred_may_match(p, cont.chunks[p.col][k].vmin, cont.chunks[p.col][k].vmax)
                for p in preds
            ):
                continue
            live = ~cont.deleted[lo:hi]
            if not live.any():
                continue
            decoded: dict[str, np.ndarray] = {}
            mask = live
            for p in preds:
                if p.col not in decoded:
                    decoded[p.col] = chunk_to_numpy(cont.chunks[p.col][k])
                mask = mask & pred_mask(p, decoded[p.col])
            if not mask.any():
                continue
            cols = {}
            for name in columns:
                if name not in decoded:
                    decoded[name] = chunk_to_numpy(cont.chunks[name][k])
                cols[name] = decoded[name][mask]
            out.append(Frame(cols))
        return out

    def _scan_wos(self, st, columns, preds, bucket_set):
        idx = {c.name: i for i, c in enumerate(st.tdef.columns)}
        rows = [
            r
            for r, b in zip(st.wos.rows, st.wos.buckets)
            if bucket_set is None or b in bucket_set
        ]
        if preds:
            rows = [
                r for r in rows if all(self._row_matches(p, r[idx[p.col]]) for p in preds)
            ]
        if not rows:
            return None
        kinds = ["str" if st.tdef.column(n).kind == STR else "int" for n in columns]
        picked = [tuple(r[idx[n]] for n in columns) for r in rows]
        return Frame.from_rows(columns, kinds, picked)

    # -- stats --

    def logical_rows(self, table_name: str) -> int:
        return self.store(table_name).logical_rows()

    def ros_bytes(self, table_name: str) -> int:
        """On-disk container bytes when persisted, payload bytes otherwise."""
        st = self.store(table_name)
        total = 0
        for cont in st.containers:
            if cont.path and os.path.exists(cont.path):
                total += os.path.getsize(cont.path)
            else:
                total += cont.payload_bytes()
        return total
