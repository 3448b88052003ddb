"""Distributed plan executor.

Distributed subtrees evaluate as one frame per serving node, the per-node
work running concurrently on each node's worker thread; the coordinator
awaits all partials before the next stage and merges in node-id order, so
results are deterministic.  Wall time is measured coordinator-side at
millisecond resolution and includes the final merge.
"""

from __future__ import annotations

import time

import numpy as np

from ..cluster import Cluster
from ..errors import PlanError
from ..frame import Frame
from .expr import evaluate
from .kernels import group_aggregate, hash_join, split_by_node
from .plans import (
    COORD,
    DIST,
    Filter,
    FinalMerge,
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
    check_plan,
)
from .results import ResultSet

DistFrames = dict[int, Frame]  # node id -> partition


class Engine:
    def __init__(self, cluster: Cluster):
        self.cluster = cluster

    def run(self, plan: FinalMerge) -> tuple[ResultSet, float]:
        """Execute and time a checked plan; raises if the cluster is unsafe."""
        check_plan(plan)
        self.cluster.check_safe()
        t0 = time.monotonic()
        rs = self._final(plan)
        seconds = max(round(time.monotonic() - t0, 3), 0.001)
        return rs, seconds

    def execute(self, plan: FinalMerge) -> ResultSet:
        return self.run(plan)[0]

    # -- evaluation --

    def _final(self, plan: FinalMerge) -> ResultSet:
        frame = self._coord(plan.child)
        names = [n for n, _ in plan.output]
        rows = _frame_rows(frame, names)
        return ResultSet(columns=tuple(plan.output), rows=rows)

    def _serving(self) -> dict[int, list[int]]:
        return self.cluster.serving_plan()

    def _coord(self, plan: PlanNode) -> Frame:
        if isinstance(plan, Gather):
            parts = self._dist(plan.child)
            return Frame.concat([parts[n] for n in sorted(parts)])
        if isinstance(plan, Filter):
            f = self._coord(plan.child)
            return f.mask(evaluate(plan.cond, f).astype(bool))
        if isinstance(plan, Project):
            f = self._coord(plan.child)
            return _project(f, plan.outputs)
        if isinstance(plan, HashJoin):
            left = self._coord(plan.left)
            right = self._coord(plan.right)
            return hash_join(
                left, right, list(plan.left_keys), list(plan.right_keys), plan.how, dict(plan.fill)
            )
        if isinstance(plan, HashAggregate):
            f = self._coord(plan.child)
            return _aggregate(f, plan)
        if isinstance(plan, ScalarAttach):
            f = self._coord(plan.child)
            s = self._coord(plan.sub)
            if s.n != 1:
                raise PlanError(f"scalar subplan produced {s.n} rows")
            out = dict(f.cols)
            for name, arr in s.cols.items():
                if arr.dtype.kind in "iu":
                    out[name] = np.full(f.n, int(arr[0]), dtype=np.int64)
                else:
                    out[name] = np.full(f.n, arr[0], dtype=arr.dtype)
            return Frame(out)
        if isinstance(plan, Sort):
            return _sort(self._coord(plan.child), plan.keys)
        if isinstance(plan, Limit):
            f = self._coord(plan.child)
            return Frame({n: a[: plan.n] for n, a in f.cols.items()})
        raise PlanError(f"{type(plan).__name__} cannot run on the coordinator")

    def _dist(self, plan: PlanNode) -> DistFrames:
        cluster = self.cluster
        if isinstance(plan, SegmentScan):
            parts = cluster.scan_distributed(plan.table, list(plan.columns), list(plan.preds))
            return {n: f for n, f in parts}
        if isinstance(plan, Filter):
            parts = self._dist(plan.child)
            return self._map_nodes(
                parts, lambda f: f.mask(evaluate(plan.cond, f).astype(bool))
            )
        if isinstance(plan, Project):
            parts = self._dist(plan.child)
            return self._map_nodes(parts, lambda f: _project(f, plan.outputs))
        if isinstance(plan, HashAggregate):
            parts = self._dist(plan.child)
            return self._map_nodes(parts, lambda f: _aggregate(f, plan))
        if isinstance(plan, HashJoin):
            if plan.broadcast:
                right = self._coord(plan.right)
                parts = self._dist(plan.left)
                return self._map_nodes(
                    parts,
                    lambda f: hash_join(
                        f, right, list(plan.left_keys), list(plan.right_keys), plan.how, dict(plan.fill)
                    ),
                )
            left = self._dist(plan.left)
            right = self._dist(plan.right)
            if set(left) != set(right):
                raise PlanError("co-partitioned join: partition sets differ")
            futures = {}
            for n in sorted(left):
                node = cluster.nodes[n]
                futures[n] = node.request(
                    hash_join,
                    left[n],
                    right[n],
                    list(plan.left_keys),
                    list(plan.right_keys),
                    plan.how,
                    dict(plan.fill),
                )
            return {n: f.result() for n, f in futures.items()}
        if isinstance(plan, Repartition):
            parts = self._dist(plan.child)
            serving = {
                b: n for n, bs in self._serving().items() for b in bs
            }
            bucket_count = cluster.segmap.bucket_count
            futures = {}
            for n in sorted(parts):
                node = cluster.nodes[n]
                futures[n] = node.request(
                    split_by_node, parts[n], plan.key, bucket_count, serving
                )
            splits = [f.result() for _, f in sorted(futures.items())]
            out: DistFrames = {}
            schema_frame = next(iter(parts.values()))
            for dest in sorted(set(serving.values())):
                pieces = [s[dest] for s in splits if dest in s]
                if pieces:
                    out[dest] = Frame.concat(pieces)
                else:
                    out[dest] = Frame(
                        {n: a[:0] for n, a in schema_frame.cols.items()}
                    )
            return out
        raise PlanError(f"{type(plan).__name__} cannot run distributed")

    def _map_nodes(self, parts: DistFrames, fn) -> DistFrames:
        futures = {
            n: self.cluster.nodes[n].request(fn, parts[n]) for n in sorted(parts)
        }
        return {n: f.result() for n, f in futures.items()}


def _project(frame: Frame, outputs) -> Frame:
    return Frame({name: np.asarray(evaluate(expr, frame)) for name, expr in outputs})


def _aggregate(frame: Frame, plan: HashAggregate) -> Frame:
    aggs = []
    for name, fn, expr in plan.aggs:
        vals = None if expr is None else np.asarray(evaluate(expr, frame))
        aggs.append((name, fn, vals))
    return group_aggregate(frame, list(plan.keys), aggs)


def _sort(frame: Frame, keys) -> Frame:
    n = frame.n
    if n <= 1:
        return frame
    idx = list(range(n))
    all_cols = [frame[name].tolist() for name in frame.names]
    idx.sort(key=lambda i: tuple(col[i] for col in all_cols))
    for name, asc in reversed(keys):
        col = frame[name].tolist()
        idx.sort(key=lambda i: col[i], reverse=not asc)
    take = np.array(idx, dtype=np.int64)
    return frame.take(take)


def _frame_rows(frame: Frame, names: list[str]) -> list[tuple]:
    arrays = [frame[n] for n in names]
    pylists = [a.tolist() for a in arrays]
    return [tuple(col[i] for col in pylists) for i in range(frame.n)]
