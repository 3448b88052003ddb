"""Column chunk encodings: plain, run-length, dictionary, delta.

A chunk carries its own statistics (min/max over non-null values, null count)
so scans can skip chunks whose value range excludes a predicate.  All integer
payloads are little-endian.  Values may be ``None`` (null); chunks holding
nulls fall back to plain encoding with a validity bitmap.

``decode(encode(values)) == values`` holds exactly for every encoding and
every value type the encoding supports; delta applies to integer-backed
columns only (int, decimal cents, date days).
"""

from __future__ import annotations

from dataclasses import dataclass
import struct

import numpy as np

from .errors import EncodingError

PLAIN = "plain"
RLE = "rle"
DICT = "dict"
DELTA = "delta"

ENCODINGS = (PLAIN, RLE, DICT, DELTA)

DICT_MAX_AUTO_CARDINALITY = 4096


@dataclass
class ColumnChunk:
    kind: str  # "int" (also dec/date) | "str"
    encoding: str
    value_count: int
    null_count: int
    vmin: int | str | None
    vmax: int | str | None
    payload: bytes

    @property
    def nbytes(self) -> int:
        return len(self.payload)


def _as_int_and_valid(values) -> tuple[np.ndarray, np.ndarray | None]:
    if isinstance(values, np.ndarray):
        return values.astype(np.int64, copy=False), None
    valid = np.fromiter((v is not None for v in values), dtype=bool, count=len(values))
    if valid.all():
        return np.fromiter(values, dtype=np.int64, count=len(values)), None
    arr = np.fromiter((0 if v is None else v for v in values), dtype=np.int64, count=len(values))
    return arr, valid


def _as_str_and_valid(values) -> tuple[list[str], np.ndarray | None]:
    if isinstance(values, np.ndarray):
        return [str(v) for v in values], None
    valid = np.fromiter((v is not None for v in values), dtype=bool, count=len(values))
    if valid.all():
        return list(values), None
    return ["" if v is None else v for v in values], valid


def _pack_min_width(arr: np.ndarray) -> bytes:
    """Signed ints at the smallest of 1/2/4/8 bytes that fits them."""
    if len(arr) == 0:
        return struct.pack("<B", 1)
    lo, hi = int(arr.min()), int(arr.max())
    for width, dtype in ((1, "<i1"), (2, "<i2"), (4, "<i4"), (8, "<i8")):
        bound = 1 << (8 * width - 1)
        if -bound <= lo and hi < bound:
            return struct.pack("<B", width) + arr.astype(dtype).tobytes()
    raise EncodingError("value out of int64 range")  # pragma: no cover


def _unpack_min_width(buf: memoryview, count: int) -> tuple[np.ndarray, int]:
    width = buf[0]
    dtype = {1: "<i1", 2: "<i2", 4: "<i4", 8: "<i8"}[width]
    end = 1 + width * count
    arr = np.frombuffer(buf[1:end], dtype=dtype).astype(np.int64)
    return arr, end


def _pack_str_block(values: list[str]) -> bytes:
    blobs = [v.encode("utf-8") for v in values]
    lengths = np.fromiter((len(b) for b in blobs), dtype=np.uint32, count=len(blobs))
    return (
        struct.pack("<I", len(values))
        + lengths.astype("<u4").tobytes()
        + b"".join(blobs)
    )


def _unpack_str_block(buf: memoryview) -> tuple[list[str], int]:
    (n,) = struct.unpack_from("<I", buf, 0)
    lengths = np.frombuffer(buf[4 : 4 + 4 * n], dtype="<u4")
    pos = 4 + 4 * n
    out = []
    blob = bytes(buf[pos : pos + int(lengths.sum())]) if n else b""
    off = 0
    for ln in lengths:
        out.append(blob[off : off + ln].decode("utf-8"))
        off += int(ln)
    return out, pos + off


def _runs_int(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(arr) == 0:
        return arr, np.empty(0, dtype=np.int64)
    change = np.flatnonzero(arr[1:] != arr[:-1]) + 1
    starts = np.concatenate(([0], change))
    lengths = np.diff(np.concatenate((starts, [len(arr)])))
    return arr[starts], lengths.astype(np.int64)


def _runs_str(values: list[str]) -> tuple[list[str], list[int]]:
    vals, lens = [], []
    for v in values:
        if vals and vals[-1] == v:
            lens[-1] += 1
        else:
            vals.append(v)
            lens.append(1)
    return vals, lens


def encode_column(values, kind: str, encoding: str) -> ColumnChunk:
    """Encode a value sequence; raises EncodingError if not applicable."""
    if encoding not in ENCODINGS:
        raise EncodingError(f"unknown encoding {encoding!r}")
    if kind not in ("int", "str"):
        raise EncodingError(f"unknown column kind {kind!r}")
    n = len(values)

    if kind == "int":
        arr, valid = _as_int_and_valid(values)
        null_count = 0 if valid is None else int(n - valid.sum())
        live = arr if valid is None else arr[valid]
        vmin = int(live.min()) if len(live) else None
        vmax = int(live.max()) if len(live) else None
        if null_count and encoding != PLAIN:
            raise EncodingError(f"{encoding} does not support nulls")
        if encoding == PLAIN:
            payload = b""
            if null_count:
                payload += np.packbits(valid).tobytes()
            payload += arr.astype("<i8").tobytes()
        elif encoding == DELTA:
            if n == 0:
                payload = b""
            else:
                first = int(arr[0])
                deltas = np.diff(arr)
                payload = struct.pack("<q", first) + _pack_min_width(deltas)
        elif encoding == RLE:
            run_vals, run_lens = _runs_int(arr)
            payload = (
                struct.pack("<I", len(run_vals))
                + _pack_min_width(run_lens)
                + _pack_min_width(run_vals)
            )
        else:  # DICT
            uniq, codes = np.unique(arr, return_inverse=True)
            payload = (
                struct.pack("<I", len(uniq))
                + uniq.astype("<i8").tobytes()
                + _pack_min_width(codes.astype(np.int64))
            )
        return ColumnChunk("int", encoding, n, null_count, vmin, vmax, payload)

    svals, valid = _as_str_and_valid(values)
    null_count = 0 if valid is None else int(n - valid.sum())
    live = svals if valid is None else [v for v, ok in zip(svals, valid) if ok]
    vmin = min(live) if live else None
    vmax = max(live) if live else None
    if null_count and encoding != PLAIN:
        raise EncodingError(f"{encoding} does not support nulls")
    if encoding == DELTA:
        raise EncodingError("delta applies to integer-backed columns only")
    if encoding == PLAIN:
        payload = b""
        if null_count:
            payload += np.packbits(valid).tobytes()
        payload += _pack_str_block(svals)
    elif encoding == RLE:
        run_vals, run_lens = _runs_str(svals)
        payload = (
            struct.pack("<I", len(run_vals))
            + _pack_min_width(np.array(run_lens, dtype=np.int64))
            + _pack_str_block(run_vals)
        )
    else:  # DICT
        seen: dict[str, int] = {}
        codes = np.empty(n, dtype=np.int64)
        for i, v in enumerate(svals):
            codes[i] = seen.setdefault(v, len(seen))
        uniq = list(seen)
        payload = struct.pack("<I", len(uniq)) + _pack_str_block(uniq) + _pack_min_width(codes)
    return ColumnChunk("str", encoding, n, null_count, vmin, vmax, payload)


def _decode_int(chunk: ColumnChunk) -> np.ndarray:
    n = chunk.value_count
    buf = memoryview(chunk.payload)
    if chunk.encoding == PLAIN:
        if chunk.null_count:
            buf = buf[(n + 7) // 8 :]
        return np.frombuffer(buf, dtype="<i8", count=n).astype(np.int64)
    if chunk.encoding == DELTA:
        if n == 0:
            return np.empty(0, dtype=np.int64)
        (first,) = struct.unpack_from("<q", buf, 0)
        deltas, _ = _unpack_min_width(buf[8:], n - 1)
        out = np.empty(n, dtype=np.int64)
        out[0] = first
        np.cumsum(deltas, out=out[1:]) if n > 1 else None
        if n > 1:
            out[1:] += first
        return out
    if chunk.encoding == RLE:
        (nruns,) = struct.unpack_from("<I", buf, 0)
        lens, used = _unpack_min_width(buf[4:], nruns)
        vals, _ = _unpack_min_width(buf[4 + used :], nruns)
        return np.repeat(vals, lens)
    (nuniq,) = struct.unpack_from("<I", buf, 0)
    uniq = np.frombuffer(buf[4 : 4 + 8 * nuniq], dtype="<i8").astype(np.int64)
    codes, _ = _unpack_min_width(buf[4 + 8 * nuniq :], n)
    return uniq[codes] if n else np.empty(0, dtype=np.int64)


def _decode_str(chunk: ColumnChunk) -> list[str]:
    n = chunk.value_count
    buf = memoryview(chunk.payload)
    if chunk.encoding == PLAIN:
        if chunk.null_count:
            buf = buf[(n + 7) // 8 :]
        vals, _ = _unpack_str_block(buf)
        return vals
    if chunk.encoding == RLE:
        (nruns,) = struct.unpack_from("<I", buf, 0)
        lens, used = _unpack_min_width(buf[4:], nruns)
        vals, _ = _unpack_str_block(buf[4 + used :])
        out: list[str] = []
        for v, ln in zip(vals, lens):
            out.extend([v] * int(ln))
        return out
    (nuniq,) = struct.unpack_from("<I", buf, 0)
    uniq, used = _unpack_str_block(buf[4:])
    codes, _ = _unpack_min_width(buf[4 + used :], n)
    return [uniq[c] for c in codes]


def _validity(chunk: ColumnChunk) -> np.ndarray | None:
    if not chunk.null_count:
        return None
    n = chunk.value_count
    bits = np.frombuffer(chunk.payload[: (n + 7) // 8], dtype=np.uint8)
    return np.unpackbits(bits, count=n).astype(bool)


def decode_column(chunk: ColumnChunk) -> list:
    """Exact inverse of encode_column; ``None`` for null positions."""
    valid = _validity(chunk)
    if chunk.kind == "int":
        arr = _decode_int(chunk)
        if valid is None:
            return [int(v) for v in arr]
        return [int(v) if ok else None for v, ok in zip(arr, valid)]
    vals = _decode_str(chunk)
    if valid is None:
        return vals
    return [v if ok else None for v, ok in zip(vals, valid)]


def chunk_to_numpy(chunk: ColumnChunk) -> np.ndarray:
    """Fast decode to a numpy array; chunks holding nulls are not supported."""
    if chunk.null_count:
        raise EncodingError("null-bearing chunk has no dense array form")
    if chunk.kind == "int":
        return _decode_int(chunk)
    vals = _decode_str(chunk)
    return np.array(vals, dtype=np.str_) if vals else np.empty(0, dtype="U1")


def choose_encoding(values, kind: str) -> ColumnChunk:
    """Encode with the smallest applicable encoding (ties: plain last)."""
    candidates = []
    n = len(values)
    has_null = any(v is None for v in values) if not isinstance(values, np.ndarray) else False
    if has_null:
        return encode_column(values, kind, PLAIN)
    for enc in (RLE, DICT, DELTA, PLAIN):
        if enc == DELTA and kind != "int":
            continue
        if enc == DICT:
            distinct = len(np.unique(values)) if n else 0
            if distinct > DICT_MAX_AUTO_CARDINALITY:
                continue
        candidates.append(encode_column(values, kind, enc))
    return min(candidates, key=lambda c: c.nbytes)
