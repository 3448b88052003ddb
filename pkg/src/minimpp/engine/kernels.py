"""Vectorized relational kernels: grouping, hash joins, repartition splits.

Grouping works by factorizing key columns to dense codes and reducing sorted
runs (argsort + reduceat), which keeps cents sums in exact int64 arithmetic.
Joins sort the build side and probe with searchsorted, expanding multi-match
runs without python loops.
"""

from __future__ import annotations

import numpy as np

from ..errors import PlanError
from ..frame import Frame

# headroom guard for int64 group sums: |value| * rows must stay clear of 2**63
_SUM_GUARD = 1 << 62


def factorize(cols: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Dense group codes plus a representative row index per group.

    Group ids follow first-appearance order of the sorted unique key, which is
    deterministic for identical inputs.
    """
    if len(cols) == 1:
        uniq, first, codes = np.unique(cols[0], return_index=True, return_inverse=True)
        return codes.astype(np.int64), first
    combined = np.zeros(len(cols[0]), dtype=np.int64)
    for arr in cols:
        _, part = np.unique(arr, return_inverse=True)
        width = int(part.max()) + 1 if len(part) else 1
        if combined.max(initial=0) >= _SUM_GUARD // max(width, 1):
            raise PlanError("group key cardinality overflow")
        combined = combined * width + part
    uniq, first, codes = np.unique(combined, return_index=True, return_inverse=True)
    return codes.astype(np.int64), first


def group_aggregate(
    frame: Frame,
    keys: list[str],
    aggs: list[tuple[str, str, np.ndarray | None]],
) -> Frame:
    """Aggregate pre-evaluated value arrays by key columns.

    ``aggs`` holds (output name, fn, values) with fn in sum/count/min/max;
    values is None for count.  With no keys the result is the single global
    group (even over zero rows: sums 0, count 0).
    """
    n = frame.n
    if not keys:
        out: dict[str, np.ndarray] = {}
        for name, fn, vals in aggs:
            if fn == "count":
                out[name] = np.array([n], dtype=np.int64)
            elif fn == "sum":
                out[name] = np.array([_checked_sum(vals)], dtype=np.int64)
            elif fn in ("min", "max"):
                if n == 0:
                    raise PlanError(f"global {fn} over empty input")
                out[name] = np.array(
                    [vals.min() if fn == "min" else vals.max()], dtype=np.int64
                )
            else:
                raise PlanError(f"unknown aggregate {fn!r}")
        return Frame(out)

    key_arrays = [frame[k] for k in keys]
    if n == 0:
        cols = {k: frame[k] for k in keys}
        for name, fn, _ in aggs:
            cols[name] = np.empty(0, dtype=np.int64)
        return Frame(cols)
    codes, first = factorize(key_arrays)
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(sorted_codes)) + 1))
    counts = np.diff(np.concatenate((starts, [n])))
    rep = order[starts]
    cols = {k: arr[rep] for k, arr in zip(keys, key_arrays)}
    for name, fn, vals in aggs:
        if fn == "count":
            cols[name] = counts.astype(np.int64)
            continue
        sv = vals[order]
        if fn == "sum":
            _guard_sum(sv)
            cols[name] = np.add.reduceat(sv, starts)
        elif fn == "min":
            cols[name] = np.minimum.reduceat(sv, starts)
        elif fn == "max":
            cols[name] = np.maximum.reduceat(sv, starts)
        else:
            raise PlanError(f"unknown aggregate {fn!r}")
    return Frame(cols)


def _guard_sum(vals: np.ndarray) -> None:
    if len(vals) == 0 or vals.dtype.kind not in "iu":
        return
    peak = max(abs(int(vals.max())), abs(int(vals.min())))
    if peak and peak > _SUM_GUARD // len(vals):
        raise PlanError("sum would overflow int64; reduce scale factor")


def _checked_sum(vals: np.ndarray) -> int:
    if len(vals) == 0:
        return 0
    # chunked python-int accumulation: exact at any magnitude
    total = 0
    step = 1 << 20
    for lo in range(0, len(vals), step):
        part = vals[lo : lo + step]
        _guard_sum(part)
        total += int(part.sum())
    return total


def _combine_keys(frame: Frame, keys: list[str]) -> np.ndarray:
    if len(keys) == 1:
        arr = frame[keys[0]]
        if arr.dtype.kind not in "iu":
            raise PlanError("join keys must be integer columns")
        return arr
    hi, lo = frame[keys[0]], frame[keys[1]]
    if len(keys) != 2:
        raise PlanError("joins support at most two key columns")
    if len(hi) and (int(hi.min()) < 0 or int(lo.min()) < 0 or int(hi.max()) >= 1 << 31 or int(lo.max()) >= 1 << 31):
        raise PlanError("composite join keys must fit in 31 bits each")
    return (hi.astype(np.int64) << 32) | lo.astype(np.int64)


def hash_join(
    left: Frame,
    right: Frame,
    left_keys: list[str],
    right_keys: list[str],
    how: str = "inner",
    fill: dict[str, int] | None = None,
) -> Frame:
    """Equi-join; output = left columns + right non-key columns.

    ``semi``/``anti`` return filtered left rows.  ``left`` keeps unmatched
    left rows, filling right columns from ``fill`` (0 by default).
    """
    lk = _combine_keys(left, left_keys)
    rk = _combine_keys(right, right_keys)
    right_payload = [c for c in right.names if c not in right_keys]
    dup = set(right_payload) & set(left.names)
    if dup and how in ("inner", "left"):
        raise PlanError(f"join would duplicate columns {sorted(dup)}")

    perm = np.argsort(rk, kind="stable")
    rs = rk[perm]
    lo = np.searchsorted(rs, lk, side="left")
    hi = np.searchsorted(rs, lk, side="right")
    counts = hi - lo

    if how == "semi":
        return left.mask(counts > 0)
    if how == "anti":
        return left.mask(counts == 0)

    total = int(counts.sum())
    lidx = np.repeat(np.arange(left.n), counts)
    if total:
        shift = np.repeat(np.cumsum(counts) - counts, counts)
        offsets = np.arange(total) - shift
        ridx = perm[np.repeat(lo, counts) + offsets]
    else:
        ridx = np.empty(0, dtype=np.int64)

    if how == "inner":
        out = {n: a[lidx] for n, a in left.cols.items()}
        for n in right_payload:
            out[n] = right[n][ridx]
        return Frame(out)

    if how == "left":
        fill = fill or {}
        unmatched = np.flatnonzero(counts == 0)
        out = {}
        for n, a in left.cols.items():
            out[n] = np.concatenate((a[lidx], a[unmatched]))
        for n in right_payload:
            arr = right[n]
            if arr.dtype.kind in "iu":
                pad = np.full(len(unmatched), fill.get(n, 0), dtype=np.int64)
            else:
                pad = np.full(len(unmatched), fill.get(n, ""), dtype=arr.dtype)
            out[n] = np.concatenate((arr[ridx], pad))
        return Frame(out)

    raise PlanError(f"unknown join type {how!r}")


def split_by_node(
    frame: Frame, key: str, bucket_count: int, serving: dict[int, int]
) -> dict[int, Frame]:
    """Partition rows by hash bucket of ``key`` onto their serving nodes."""
    from ..cluster import buckets_of_np

    buckets = buckets_of_np(frame[key], bucket_count)
    node_of = np.empty(bucket_count, dtype=np.int64)
    for b, n in serving.items():
        node_of[b] = n
    nodes = node_of[buckets]
    return {
        int(n): frame.mask(nodes == n) for n in np.unique(nodes)
    }
