"""Undirected weighted graphs in compressed adjacency form.

Node ids read from edge lists are compacted to ``0..n-1`` in order of first
appearance; the original ids are kept on the graph for writing results back.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp


class GraphFormatError(ValueError):
    """Raised for malformed or unsupported graph input."""


@dataclass(frozen=True, eq=False)
class Graph:
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    # edge id of every CSR slot, so both directions address the same edge
    slot_edge: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    node_ids: np.ndarray
    degrees: np.ndarray = field(init=False)
    # running weight sum over all CSR slots, used to draw weighted neighbors
    _cumw: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        deg = np.add.reduceat(self.weights, self.indptr[:-1]) if self.weights.size else np.zeros(0)
        object.__setattr__(self, "degrees", np.asarray(deg, dtype=np.float64))
        object.__setattr__(self, "_cumw", np.cumsum(self.weights))
        for arr in (self.indptr, self.indices, self.weights, self.slot_edge,
                    self.edge_u, self.edge_v, self.edge_w, self.node_ids, self.degrees):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.edge_u)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def weight(self, u: int, v: int) -> float:
        slot = self._slot(u, v)
        return 0.0 if slot < 0 else float(self.weights[slot])

    def edge_id(self, u: int, v: int) -> int:
        slot = self._slot(u, v)
        if slot < 0:
            raise KeyError(f"no edge between {u} and {v}")
        return int(self.slot_edge[slot])

    def _slot(self, u, v) -> int:
        if not (0 <= u < self.n and 0 <= v < self.n):
            return -1
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        if pos < hi and self.indices[pos] == v:
            return int(pos)
        return -1

    def adjacency(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.weights, self.indices, self.indptr), shape=(self.n, self.n))

    def total_weight(self) -> float:
        return float(self.edge_w.sum())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.m == other.m
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.node_ids, other.node_ids))

    __hash__ = None


def from_edges(u, v, w=None, node_ids=None) -> Graph:
    """Build a graph from compacted endpoint arrays.

    Duplicate pairs are merged by summing their weights.  Self-loops,
    nonpositive weights and isolated nodes raise ``GraphFormatError``.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.ones(len(u)) if w is None else np.asarray(w, dtype=np.float64)
    n = int(max(u.max(initial=-1), v.max(initial=-1)) + 1) if node_ids is None else len(node_ids)
    if node_ids is None:
        node_ids = np.arange(n, dtype=np.int64)
    if np.any(u == v):
        raise GraphFormatError(f"self-loop on node {node_ids[u[u == v][0]]}")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise GraphFormatError("edge weights must be finite and strictly positive")

    lo, hi = np.minimum(u, v), np.maximum(u, v)
    upper = sp.coo_matrix((w, (lo, hi)), shape=(n, n)).tocsr()
    upper.sum_duplicates()
    upper.sort_indices()
    coo = upper.tocoo()
    edge_u, edge_v, edge_w = coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()
    m = len(edge_u)

    rows = np.concatenate([edge_u, edge_v])
    cols = np.concatenate([edge_v, edge_u])
    eids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((cols, rows))
    rows, cols, eids = rows[order], cols[order], eids[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    if np.any(np.diff(indptr) == 0):
        iso = int(np.flatnonzero(np.diff(indptr) == 0)[0])
        raise GraphFormatError(f"isolated node {node_ids[iso]}")
    return Graph(indptr=indptr, indices=cols, weights=edge_w[eids], slot_edge=eids,
                 edge_u=edge_u, edge_v=edge_v, edge_w=edge_w,
                 node_ids=np.asarray(node_ids, dtype=np.int64))


def load_edge_list(stream: TextIO | Iterable[str]) -> Graph:
    """Parse ``u v [w]`` lines; ``#`` lines and blank lines are skipped."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    remap: dict[int, int] = {}
    us, vs, ws = [], [], []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'u v [w]', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
            wt = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"line {lineno}: cannot parse {line!r}") from None
        if a < 0 or b < 0:
            raise GraphFormatError(f"line {lineno}: negative node id")
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop on node {a}")
        if not wt > 0 or wt == float("inf"):
            raise GraphFormatError(f"line {lineno}: nonpositive weight {parts[2]}")
        us.append(remap.setdefault(a, len(remap)))
        vs.append(remap.setdefault(b, len(remap)))
        ws.append(wt)
    if not us:
        raise GraphFormatError("edge list is empty")
    return from_edges(us, vs, ws, node_ids=np.fromiter(remap, dtype=np.int64, count=len(remap)))


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return load_edge_list(fh)


def serialize(g: Graph) -> str:
    """Edge-list text that ``load_edge_list`` maps back to an equal graph.

    Edges are emitted so that node first appearances follow the compacted
    order; weights are written only when some edge is not unit weight.
    """
    weighted = bool(np.any(g.edge_w != 1.0))
    # emit edges ordered by the later-appearing endpoint so first appearances
    # follow compacted order
    key = np.maximum(g.edge_u, g.edge_v)
    order = np.lexsort((np.minimum(g.edge_u, g.edge_v), key))
    ids = g.node_ids
    out = []
    for e in order:
        a, b = ids[g.edge_u[e]], ids[g.edge_v[e]]
        if weighted:
            out.append(f"{a} {b} {float(g.edge_w[e])!r}")
        else:
            out.append(f"{a} {b}")
    return "\n".join(out) + "\n"


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(g))


def random_step(g: Graph, u: int, rng: np.random.Generator) -> int:
    """One weighted random-walk step from ``u``."""
    lo, hi = g.indptr[u], g.indptr[u + 1]
    w = g.weights[lo:hi]
    x = rng.random() * g.degrees[u]
    k = min(int(np.searchsorted(np.cumsum(w), x, side="right")), hi - lo - 1)
    return int(g.indices[lo + k])


def random_steps(g: Graph, nodes: np.ndarray, rng: np.random.Generator):
    """Vectorised ``random_step`` for many walkers at once.

    Returns the next nodes and the weights of the traversed edges.
    """
    lo = g.indptr[nodes]
    hi = g.indptr[nodes + 1]
    before = np.where(lo > 0, g._cumw[lo - 1], 0.0)
    target = before + rng.random(len(nodes)) * g.degrees[nodes]
    slot = np.searchsorted(g._cumw, target, side="right")
    np.clip(slot, lo, hi - 1, out=slot)
    return g.indices[slot], g.weights[slot]


def read_labels(stream: TextIO | Iterable[str], g: Graph) -> list[set[int]]:
    """Parse ``node label1 label2 ...`` lines into per-node label sets.

    Nodes are addressed by their original ids; label ids are kept as given.
    A node may appear on several lines; its labels accumulate.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    index = {int(x): i for i, x in enumerate(g.node_ids)}
    labels: list[set[int]] = [set() for _ in range(g.n)]
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            node = int(parts[0])
            labs = [int(p) for p in parts[1:]]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: cannot parse {line!r}") from None
        if node not in index:
            raise GraphFormatError(f"line {lineno}: node {node} is not in the graph")
        labels[index[node]].update(labs)
    return labels
