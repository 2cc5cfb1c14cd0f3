"""Loaders for labelled benchmark graphs stored as MATLAB ``.mat`` files.

The common layout keeps a sparse symmetric adjacency under ``network`` and a
sparse node-by-label indicator under ``group``.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse as sp

from .graph import Graph, GraphFormatError, from_edges

DATA_ENV = "PSNE_DATA_DIR"


def load_mat(path) -> tuple[Graph, list[set[int]]]:
    """Return the graph and per-node label sets.

    One-sided entries are mirrored and diagonal entries are dropped.
    """
    mat = scipy.io.loadmat(path)
    if "network" not in mat or "group" not in mat:
        raise GraphFormatError(f"{path}: expected 'network' and 'group' variables")
    adj = sp.csr_matrix(mat["network"], dtype=np.float64)
    upper = sp.triu(adj.maximum(adj.T), k=1).tocoo()
    g = from_edges(upper.row, upper.col, upper.data, node_ids=np.arange(adj.shape[0]))
    group = sp.csr_matrix(mat["group"])
    labels = [set(group.indices[group.indptr[i]:group.indptr[i + 1]].tolist()) for i in range(g.n)]
    return g, labels


def find_dataset(name: str, data_dir=None) -> Path | None:
    """Locate ``<name>.mat`` under ``data_dir`` or ``$PSNE_DATA_DIR``."""
    base = data_dir or os.environ.get(DATA_ENV)
    if not base:
        return None
    path = Path(base) / f"{name}.mat"
    return path if path.exists() else None
