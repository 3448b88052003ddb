"""A minimal in-memory column batch passed between storage, nodes and operators.

Columns are numpy arrays: ``int64`` for int/dec/date values, unicode dtype for
strings.  Frames are treated as immutable by convention; operators build new
ones.
"""

from __future__ import annotations

import numpy as np


class Frame:
    __slots__ = ("cols",)

    def __init__(self, cols: dict[str, np.ndarray]):
        self.cols = cols

    @property
    def n(self) -> int:
        for arr in self.cols.values():
            return len(arr)
        return 0

    @property
    def names(self) -> list[str]:
        return list(self.cols)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.cols[name]

    def select(self, names: list[str]) -> "Frame":
        return Frame({n: self.cols[n] for n in names})

    def mask(self, m: np.ndarray) -> "Frame":
        return Frame({n: a[m] for n, a in self.cols.items()})

    def take(self, idx: np.ndarray) -> "Frame":
        return Frame({n: a[idx] for n, a in self.cols.items()})

    def with_col(self, name: str, arr: np.ndarray) -> "Frame":
        cols = dict(self.cols)
        cols[name] = arr
        return Frame(cols)

    def rows(self) -> list[tuple]:
        """Materialize python row tuples (column order as stored)."""
        arrays = [self.cols[n] for n in self.cols]
        return [tuple(a[i].item() if hasattr(a[i], "item") else a[i] for a in arrays) for i in range(self.n)]

    @staticmethod
    def empty(names: list[str], str_cols: set[str] | None = None) -> "Frame":
        str_cols = str_cols or set()
        return Frame(
            {n: np.empty(0, dtype="U1" if n in str_cols else np.int64) for n in names}
        )

    @staticmethod
    def concat(frames: list["Frame"]) -> "Frame":
        frames = [f for f in frames if f is not None]
        if not frames:
            raise ValueError("cannot concat zero frames")
        if len(frames) == 1:
            return frames[0]
        names = frames[0].names
        out = {}
        for n in names:
            out[n] = np.concatenate([f.cols[n] for f in frames])
        return Frame(out)

    @staticmethod
    def from_rows(names: list[str], kinds: list[str], rows: list[tuple]) -> "Frame":
        cols = {}
        if not rows:
            return Frame.empty(names, {n for n, k in zip(names, kinds) if k == "str"})
        transposed = list(zip(*rows))
        for name, kind, vals in zip(names, kinds, transposed):
            if kind == "str":
                cols[name] = np.array(vals, dtype=np.str_)
            else:
                cols[name] = np.array(vals, dtype=np.int64)
        return Frame(cols)

    def __repr__(self) -> str:
        return f"Frame({self.n} rows, cols={self.names})"
