"""The two refresh functions: batch insert of new orders, batch delete of old.

RF1 inserts 1500*sf fresh orders plus their lineitems through the normal WOS
ingest path; RF2 deletes the oldest not-yet-deleted inserted batch, restoring
exact logical row counts.  The cluster keeps the insert ledger for the run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .. import datagen as dg
from ..cluster import Cluster
from ..errors import ClusterStateError
from ..storage import Pred


@dataclass(frozen=True)
class RefreshSpec:
    rf_id: int  # 1 = insert, 2 = delete

    @property
    def label(self) -> str:
        return f"RF{self.rf_id}"


def run_refresh(
    cluster: Cluster, rf_id: int, sf, seed: int = dg.DEFAULT_SEED
) -> tuple[dict[str, int], float]:
    """Execute one refresh function; returns (affected row counts, seconds)."""
    if rf_id == 1:
        return _rf1(cluster, sf, seed)
    if rf_id == 2:
        return _rf2(cluster)
    raise ClusterStateError(f"no refresh function RF{rf_id}")


def _rf1(cluster: Cluster, sf, seed: int) -> tuple[dict[str, int], float]:
    batch_index = len(cluster.refresh_ledger)
    t0 = time.monotonic()
    orders_rows, line_rows = dg.generate_refresh_batch(sf, seed, batch_index)
    cluster.ingest("orders", orders_rows)
    cluster.ingest("lineitem", line_rows)
    seconds = max(round(time.monotonic() - t0, 3), 0.001)
    cluster.refresh_ledger.append(
        {
            "batch_index": batch_index,
            "orderkeys": tuple(r[0] for r in orders_rows),
            "lineitem_count": len(line_rows),
            "deleted": False,
        }
    )
    return {"orders": len(orders_rows), "lineitem": len(line_rows)}, seconds


def _rf2(cluster: Cluster) -> tuple[dict[str, int], float]:
    pending = [b for b in cluster.refresh_ledger if not b["deleted"]]
    if not pending:
        raise ClusterStateError("RF2 has no inserted batch left to delete")
    batch = pending[0]
    keys = tuple(batch["orderkeys"])
    t0 = time.monotonic()
    orders_deleted = cluster.delete_rows("orders", [Pred("o_orderkey", "isin", keys)])
    lineitem_deleted = cluster.delete_rows("lineitem", [Pred("l_orderkey", "isin", keys)])
    seconds = max(round(time.monotonic() - t0, 3), 0.001)
    batch["deleted"] = True
    return {"orders": orders_deleted, "lineitem": lineitem_deleted}, seconds
