"""Synthetic Erdos-Renyi and Barabasi-Albert graphs."""
from __future__ import annotations

import networkx as nx
import numpy as np

from .graph import Graph, from_edges


def _to_graph(nxg: nx.Graph, rng: np.random.Generator) -> Graph:
    n = nxg.number_of_nodes()
    edges = np.array(sorted(nxg.edges()), dtype=np.int64).reshape(-1, 2)
    deg = np.bincount(edges.ravel(), minlength=n)
    extra = []
    # isolated nodes get one edge to a uniformly drawn other node
    for iso in np.flatnonzero(deg == 0):
        other = int(rng.integers(n - 1))
        extra.append((int(iso), other + (other >= iso)))
    if extra:
        edges = np.vstack([edges, np.array(extra, dtype=np.int64)])
    return from_edges(edges[:, 0], edges[:, 1], node_ids=np.arange(n))


def generate_er(n: int, p: float, seed: int) -> Graph:
    """G(n, p) random graph; isolated nodes are attached to a random node."""
    if n < 2:
        raise ValueError("ER graph needs n >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("edge probability must lie in (0, 1]")
    rng = np.random.default_rng([seed, 1])
    if p >= 1.0:
        nxg = nx.complete_graph(n)
    else:
        nxg = nx.fast_gnp_random_graph(n, p, seed=int(rng.integers(2**63)))
    return _to_graph(nxg, rng)


def generate_ba(n: int, m_attach: int, seed: int) -> Graph:
    """Preferential-attachment graph with ``m_attach`` edges per new node."""
    if m_attach < 1 or m_attach >= n:
        raise ValueError("BA graph needs 1 <= m_attach < n")
    rng = np.random.default_rng([seed, 2])
    nxg = nx.barabasi_albert_graph(n, m_attach, seed=int(rng.integers(2**63)))
    return _to_graph(nxg, rng)
