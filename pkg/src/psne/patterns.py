"""Anonymous walks and LCSS-based pattern weights for graph edges."""
from __future__ import annotations

from typing import Sequence

import numpy as np


def anonymize(walk: Sequence) -> tuple[int, ...]:
    """Re-encode a walk by order of first occurrence, starting at 1.

    >>> anonymize(["a", "b", "c", "b", "c"])
    (1, 2, 3, 2, 3)
    """
    if len(walk) == 0:
        raise ValueError("cannot anonymize an empty walk")
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen) + 1) for x in walk)


def anonymize_batch(walks: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Row-wise ``anonymize`` for a padded ``(B, L)`` array of walks.

    Slots at or beyond each row's length are set to 0.
    """
    B, L = walks.shape
    out = np.zeros((B, L), dtype=np.int8 if L < 127 else np.int32)
    if L == 0:
        return out
    out[:, 0] = 1
    top = np.ones(B, dtype=out.dtype)
    for i in range(1, L):
        code = np.zeros(B, dtype=out.dtype)
        # scan backwards so the earliest matching position wins
        for k in range(i - 1, -1, -1):
            hit = walks[:, k] == walks[:, i]
            code = np.where(hit, out[:, k], code)
        fresh = code == 0
        top = top + fresh
        out[:, i] = np.where(fresh, top, code)
    out[np.arange(L)[None, :] >= lengths[:, None]] = 0
    return out


def lcss(a: Sequence[int], b: Sequence[int]) -> int:
    """Length of the longest common subsequence of ``a`` and ``b``."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        left = 0
        for j, y in enumerate(b):
            if x == y:
                left = prev[j] + 1
            elif prev[j + 1] > left:
                left = prev[j + 1]
            cur.append(left)
        prev = cur
    return prev[-1]


def lcss_batch(a: np.ndarray, la: np.ndarray, b: np.ndarray, lb: np.ndarray) -> np.ndarray:
    """``lcss`` over rows of two padded integer arrays with given lengths."""
    B, La = a.shape
    Lb = b.shape[1]
    dp = np.zeros((La + 1, Lb + 1, B), dtype=np.int32)
    for i in range(1, La + 1):
        ai = a[:, i - 1]
        for j in range(1, Lb + 1):
            dp[i, j] = np.where(ai == b[:, j - 1], dp[i - 1, j - 1] + 1,
                                np.maximum(dp[i - 1, j], dp[i, j - 1]))
    return dp[la, lb, np.arange(B)]


def pair_score(a: Sequence[int], b: Sequence[int]) -> float:
    """LCSS normalised by the longer trajectory, in ``[0, 1]``."""
    return lcss(a, b) / max(len(a), len(b))


class PatternTable:
    """Per-edge store of trajectory similarity samples.

    At most ``s_cap`` scores are kept per edge; later samples are ignored.
    Scores are stored individually so that tables filled by separate
    workers merge exactly, in worker order.
    """

    def __init__(self, n_edges: int, s_cap: int = 8, edge_lookup=None):
        if s_cap < 1:
            raise ValueError("s_cap must be >= 1")
        self.s_cap = s_cap
        self.scores = np.zeros((n_edges, s_cap))
        self.counts = np.zeros(n_edges, dtype=np.int64)
        self._lookup = edge_lookup

    @classmethod
    def for_graph(cls, g, s_cap: int = 8) -> "PatternTable":
        return cls(g.m, s_cap, edge_lookup=g.edge_id)

    @property
    def n_edges(self) -> int:
        return len(self.counts)

    def record_pair(self, edge, a: Sequence[int], b: Sequence[int]) -> None:
        """Add one trajectory-pair score for ``edge`` (an id or a node pair)."""
        eid = self._resolve(edge)
        if self.counts[eid] < self.s_cap:
            self.scores[eid, self.counts[eid]] = pair_score(a, b)
            self.counts[eid] += 1

    def _resolve(self, edge) -> int:
        if isinstance(edge, tuple):
            if self._lookup is None:
                raise KeyError("table has no node-pair lookup")
            return self._lookup(*edge)
        eid = int(edge)
        if not 0 <= eid < self.n_edges:
            raise KeyError(f"unknown edge id {eid}")
        return eid

    def open_slots(self, edge_ids: np.ndarray) -> np.ndarray:
        """Mask of the samples in ``edge_ids`` that would still be stored."""
        order = np.argsort(edge_ids, kind="stable")
        sorted_ids = edge_ids[order]
        starts = np.r_[True, sorted_ids[1:] != sorted_ids[:-1]]
        first = np.maximum.accumulate(np.where(starts, np.arange(len(order)), 0))
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order)) - first
        return self.counts[edge_ids] + rank < self.s_cap

    def record_batch(self, edge_ids: np.ndarray, scores: np.ndarray) -> None:
        """Record many scores in order; samples beyond the per-edge cap are dropped."""
        keep = self.open_slots(edge_ids)
        edge_ids, scores = edge_ids[keep], scores[keep]
        order = np.argsort(edge_ids, kind="stable")
        sorted_ids = edge_ids[order]
        starts = np.r_[True, sorted_ids[1:] != sorted_ids[:-1]]
        first = np.maximum.accumulate(np.where(starts, np.arange(len(order)), 0))
        slot = self.counts[sorted_ids] + np.arange(len(order)) - first
        self.scores[sorted_ids, slot] = scores[order]
        np.add.at(self.counts, sorted_ids, 1)

    def merge(self, other: "PatternTable") -> None:
        """Append ``other``'s samples after this table's, re-applying the cap."""
        for eid in np.flatnonzero(other.counts):
            room = self.s_cap - self.counts[eid]
            take = min(room, other.counts[eid])
            if take > 0:
                c = self.counts[eid]
                self.scores[eid, c:c + take] = other.scores[eid, :take]
                self.counts[eid] += take

    def finalize(self) -> np.ndarray:
        """Mean score per edge; edges never sampled get weight 1."""
        sums = np.where(np.arange(self.s_cap)[None, :] < self.counts[:, None], self.scores, 0.0).sum(axis=1)
        wp = np.ones(self.n_edges)
        seen = self.counts > 0
        wp[seen] = sums[seen] / self.counts[seen]
        return np.clip(wp, 0.0, 1.0)
