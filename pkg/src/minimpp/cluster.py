"""Multi-node layout: hash segmentation, ring-buddy replication, recovery.

Rows hash by their table's segmentation key into B buckets; bucket b lives on
nodes (b, b+1, ..., b+K) mod N, the first replica being the primary.  The
cluster survives any K simultaneous node failures: reads for a bucket go to
its first serving replica.

Nodes are independent workers inside one process.  Each owns a private
storage directory and catalog and runs requests on its own single worker
thread; all cross-node interaction is request/response through the
coordinator, merged in node-id order.
"""

from __future__ import annotations

import os
import shutil
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ClusterStateError, ClusterUnsafeError, MinimppError
from .frame import Frame
from .rng import splitmix64, splitmix64_np
from .schema import table
from .storage import Pred, TableCatalog, DEFAULT_WOS_BUDGET

UP = "up"
DOWN = "down"
NEEDS_RECOVERY = "needs_recovery"

DEFAULT_NODES = 5
DEFAULT_K_SAFETY = 2
DEFAULT_BUCKETS = 40

TOPOLOGY_FILE = "topology.conf"
STATE_FILE = "cluster.state"


@dataclass(frozen=True)
class SegmentationMap:
    node_count: int
    k_safety: int
    bucket_count: int
    assignment: tuple[tuple[int, ...], ...]  # bucket -> (primary, buddies...)

    def replicas(self, bucket: int) -> tuple[int, ...]:
        return self.assignment[bucket]

    def primary_counts(self) -> list[int]:
        counts = [0] * self.node_count
        for reps in self.assignment:
            counts[reps[0]] += 1
        return counts

    def buckets_of(self, node: int) -> list[int]:
        return [b for b, reps in enumerate(self.assignment) if node in reps]


def build_segmentation(node_count: int, k_safety: int, bucket_count: int) -> SegmentationMap:
    """Ring-offset buddy placement; deterministic for equal inputs."""
    if node_count < 1:
        raise MinimppError("node_count must be >= 1")
    if k_safety < 0:
        raise MinimppError("k_safety must be >= 0")
    if node_count <= k_safety:
        raise MinimppError(
            f"cannot satisfy K-safety: need node_count > k_safety, got N={node_count} K={k_safety}"
        )
    if bucket_count < node_count:
        raise MinimppError("bucket_count must be >= node_count")
    assignment = tuple(
        tuple((b + j) % node_count for j in range(k_safety + 1))
        for b in range(bucket_count)
    )
    return SegmentationMap(node_count, k_safety, bucket_count, assignment)


def bucket_of(key: int, bucket_count: int) -> int:
    return splitmix64(int(key)) % bucket_count


def buckets_of_np(keys: np.ndarray, bucket_count: int) -> np.ndarray:
    h = splitmix64_np(keys.astype(np.uint64))
    return (h % np.uint64(bucket_count)).astype(np.int64)


def route_key(segmap: SegmentationMap, key: int) -> tuple[int, tuple[int, ...]]:
    """(bucket, ordered replica list) for a row key; stable within one map."""
    b = bucket_of(key, segmap.bucket_count)
    return b, segmap.replicas(b)


class Node:
    """One simulated worker: private catalog, single-threaded request loop."""

    def __init__(self, node_id: int, data_dir: str | None, wos_budget: int):
        self.id = node_id
        self.data_dir = data_dir
        self.catalog = TableCatalog(data_dir=data_dir, wos_budget=wos_budget)
        self._pool = ThreadPoolExecutor(max_workers=1, thread_name_prefix=f"node{node_id}")

    def request(self, fn, *args, **kwargs) -> Future:
        """Send a request message; the future is the response channel."""
        return self._pool.submit(fn, *args, **kwargs)

    def call(self, fn, *args, **kwargs):
        return self.request(fn, *args, **kwargs).result()

    def wipe(self) -> None:
        """Simulate disk loss: drop catalog state and files."""
        if self.data_dir and os.path.isdir(self.data_dir):
            shutil.rmtree(self.data_dir)
        self.catalog = TableCatalog(data_dir=self.data_dir, wos_budget=self.catalog.wos_budget)

    def close(self) -> None:
        self._pool.shutdown(wait=True)


class Cluster:
    """Coordinator view over N node workers plus replica routing."""

    def __init__(
        self,
        node_count: int = DEFAULT_NODES,
        k_safety: int = DEFAULT_K_SAFETY,
        bucket_count: int = DEFAULT_BUCKETS,
        data_dir: str | None = None,
        wos_budget: int = DEFAULT_WOS_BUDGET,
    ):
        self.segmap = build_segmentation(node_count, k_safety, bucket_count)
        self.data_dir = data_dir
        self.nodes: list[Node] = []
        self.status: list[str] = [UP] * node_count
        self.refresh_ledger: list[dict] = []  # batches inserted by RF1, pending RF2
        for i in range(node_count):
            nd = os.path.join(data_dir, f"node{i}") if data_dir else None
            self.nodes.append(Node(i, nd, wos_budget))
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            self.save_topology()
            state_path = os.path.join(data_dir, STATE_FILE)
            if os.path.exists(state_path):
                self._load_state(state_path)
            else:
                self._save_state()

    # -- topology / state files --

    def save_topology(self) -> None:
        path = os.path.join(self.data_dir, TOPOLOGY_FILE)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"nodes={self.segmap.node_count}\n")
            fh.write(f"k_safety={self.segmap.k_safety}\n")
            fh.write(f"buckets={self.segmap.bucket_count}\n")
            for n in self.nodes:
                fh.write(f"node{n.id}.dir={n.data_dir}\n")

    @staticmethod
    def read_topology(data_dir: str) -> dict:
        path = os.path.join(data_dir, TOPOLOGY_FILE)
        out = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and "=" in line:
                    k, v = line.split("=", 1)
                    out[k] = v
        return out

    @classmethod
    def open(cls, data_dir: str, wos_budget: int = DEFAULT_WOS_BUDGET) -> "Cluster":
        topo = cls.read_topology(data_dir)
        return cls(
            node_count=int(topo["nodes"]),
            k_safety=int(topo["k_safety"]),
            bucket_count=int(topo["buckets"]),
            data_dir=data_dir,
            wos_budget=wos_budget,
        )

    def _save_state(self) -> None:
        if not self.data_dir:
            return
        with open(os.path.join(self.data_dir, STATE_FILE), "w", encoding="utf-8") as fh:
            for i, s in enumerate(self.status):
                fh.write(f"node{i}={s}\n")

    def _load_state(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and "=" in line:
                    k, v = line.split("=", 1)
                    self.status[int(k.removeprefix("node"))] = v

    # -- state machine --

    @property
    def safe(self) -> bool:
        """True iff every bucket retains at least one serving replica."""
        return all(
            any(self.status[r] == UP for r in reps) for reps in self.segmap.assignment
        )

    def set_node_state(self, node: int, up: bool) -> None:
        """Kill a node or bring it back; a revived node serves nothing until
        recover_node completes."""
        if not 0 <= node < len(self.nodes):
            raise ClusterStateError(f"no node {node}")
        if up:
            if self.status[node] == DOWN:
                self.status[node] = NEEDS_RECOVERY
        else:
            self.status[node] = DOWN
        self._save_state()

    def kill(self, node: int) -> None:
        self.set_node_state(node, up=False)

    def serving_node(self, bucket: int) -> int:
        for r in self.segmap.replicas(bucket):
            if self.status[r] == UP:
                return r
        raise ClusterUnsafeError(f"bucket {bucket} has no serving replica")

    def serving_plan(self) -> dict[int, list[int]]:
        """node id -> buckets it serves for reads under the current state."""
        plan: dict[int, list[int]] = {}
        for b in range(self.segmap.bucket_count):
            plan.setdefault(self.serving_node(b), []).append(b)
        return plan

    def check_safe(self) -> None:
        if not self.safe:
            raise ClusterUnsafeError("cluster unsafe: some bucket lost all replicas")

    # -- writes --

    def route_rows(self, table_name: str, rows: list[tuple]) -> tuple[np.ndarray, list[tuple]]:
        tdef = table(table_name)
        ki = tdef.index_of(tdef.segment_key)
        keys = np.fromiter((r[ki] for r in rows), dtype=np.int64, count=len(rows))
        return buckets_of_np(keys, self.segmap.bucket_count), rows

    def ingest(self, table_name: str, rows: list[tuple]) -> int:
        """Route a batch to every live replica of each row's bucket."""
        rows = list(rows)
        if not rows:
            return 0
        self.check_safe()
        buckets, rows = self.route_rows(table_name, rows)
        per_node: dict[int, tuple[list, list]] = {}
        for b in np.unique(buckets):
            idx = np.flatnonzero(buckets == b)
            for r in self.segmap.replicas(int(b)):
                if self.status[r] != UP:
                    continue
                lst = per_node.setdefault(r, ([], []))
                lst[0].extend(rows[i] for i in idx)
                lst[1].extend([int(b)] * len(idx))
        futures = [
            self.nodes[n].request(self.nodes[n].catalog.ingest_rows, table_name, rws, bks)
            for n, (rws, bks) in sorted(per_node.items())
        ]
        for f in futures:
            f.result()
        return len(rows)

    def moveout_all(self, table_name: str | None = None) -> None:
        names = [table_name] if table_name else None
        futures = []
        for n in self.nodes:
            if self.status[n.id] != UP:
                continue
            for t in names or list(n.catalog.stores):
                futures.append(n.request(n.catalog.moveout, t))
        for f in futures:
            f.result()

    def delete_rows(self, table_name: str, preds: list[Pred]) -> int:
        """Delete on every live replica; count = logical rows removed (one
        serving copy per bucket)."""
        self.check_safe()
        plan = self.serving_plan()
        counts: dict[int, Future] = {}
        extra: list[Future] = []
        for n in self.nodes:
            if self.status[n.id] != UP:
                continue
            serving = plan.get(n.id, [])
            owned = self.segmap.buckets_of(n.id)
            if serving:
                counts[n.id] = n.request(n.catalog.delete_rows, table_name, preds, serving)
            rest = [b for b in owned if b not in set(serving)]
            if rest:
                extra.append(n.request(n.catalog.delete_rows, table_name, preds, rest))
        total = sum(f.result() for f in counts.values())
        for f in extra:
            f.result()
        return total

    # -- reads --

    def scan_distributed(
        self,
        table_name: str,
        columns: list[str],
        preds: list[Pred] | None = None,
        restrict_buckets: dict[int, list[int]] | None = None,
    ) -> list[tuple[int, Frame]]:
        """One frame per serving node, ordered by node id."""
        self.check_safe()
        plan = restrict_buckets if restrict_buckets is not None else self.serving_plan()
        futures = []
        for n_id in sorted(plan):
            node = self.nodes[n_id]
            futures.append(
                (n_id, node.request(node.catalog.scan, table_name, columns, preds, plan[n_id]))
            )
        return [(n_id, f.result()) for n_id, f in futures]

    def scan_all(self, table_name: str, columns: list[str], preds=None) -> Frame:
        parts = [f for _, f in self.scan_distributed(table_name, columns, preds)]
        str_cols = {
            c.name for c in table(table_name).columns if c.kind == "str"
        }
        if not parts:
            return Frame.empty(columns, str_cols)
        return Frame.concat(parts)

    def logical_rows(self, table_name: str) -> int:
        total = 0
        for n_id, buckets in self.serving_plan().items():
            node = self.nodes[n_id]
            f = node.call(
                node.catalog.scan, table_name, [table(table_name).segment_key], None, buckets
            )
            total += f.n
        return total

    # -- recovery --

    def recover_node(self, node: int, on_bucket=None) -> int:
        """Repopulate a revived node by copying containers from live buddies.

        Returns the number of buckets copied.  ``on_bucket`` is a test hook
        invoked after each bucket transfer (fault injection).
        """
        if self.status[node] == UP:
            return 0
        if self.status[node] == DOWN:
            raise ClusterStateError(f"node {node} is down; bring it up first")
        self.check_safe()
        target = self.nodes[node]
        copied = 0
        for b in self.segmap.buckets_of(node):
            src_frame = None
            last_err = None
            for r in self.segmap.replicas(b):
                if r == node or self.status[r] != UP:
                    continue
                src = self.nodes[r]
                try:
                    src_frame = src.call(self._snapshot_bucket, src, b)
                    break
                except Exception as e:  # source failed mid-copy: try next buddy
                    last_err = e
            if src_frame is None:
                raise ClusterUnsafeError(
                    f"bucket {b}: no live source replica for recovery"
                ) from last_err
            target.call(self._install_bucket, target, b, src_frame)
            copied += 1
            if on_bucket is not None:
                on_bucket(b)
        self.status[node] = UP
        self._save_state()
        return copied

    @staticmethod
    def _snapshot_bucket(src: Node, bucket: int) -> dict:
        snap: dict[str, dict] = {}
        for tname, st in src.catalog.stores.items():
            conts = [c.copy() for c in st.containers if c.segment_id == bucket]
            wos = [
                (r, b)
                for r, b in zip(st.wos.rows, st.wos.buckets)
                if b == bucket
            ]
            if conts or wos:
                snap[tname] = {"containers": conts, "wos": wos}
        return snap

    @staticmethod
    def _install_bucket(target: Node, bucket: int, snap: dict) -> None:
        for tname, payload in snap.items():
            st = target.catalog.store(tname)
            # replace any stale copy of this bucket wholesale
            stale = [c for c in st.containers if c.segment_id == bucket]
            for c in stale:
                if c.path and os.path.exists(c.path):
                    os.unlink(c.path)
                    dpath = c.path[:-4] + ".del"
                    if os.path.exists(dpath):
                        os.unlink(dpath)
            st.containers = [c for c in st.containers if c.segment_id != bucket]
            keep = [
                (r, b) for r, b in zip(st.wos.rows, st.wos.buckets) if b != bucket
            ]
            st.wos.rows = [r for r, _ in keep]
            st.wos.buckets = [b for _, b in keep]
            for cont in payload["containers"]:
                dup = cont.copy()
                if target.data_dir:
                    seg_dir = os.path.join(target.data_dir, tname, f"seg{bucket:05d}")
                    os.makedirs(seg_dir, exist_ok=True)
                    dup.save(os.path.join(seg_dir, f"c{st._next_id:06d}.ros"))
                st._next_id += 1
                st.containers.append(dup)
            if payload["wos"]:
                st.wos.append([r for r, _ in payload["wos"]], [b for _, b in payload["wos"]])

    def close(self) -> None:
        for n in self.nodes:
            n.close()

    def __enter__(self) -> "Cluster":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
