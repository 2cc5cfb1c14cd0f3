"""Multiple-perspective re-weighting of a proximity matrix.

Row ``i`` of the result blends row ``i`` of ``S`` with the rows of ``i``'s
neighbours::

    M[i, j] = sum_{h in N(i)} lam[h, i] S[h, j] + lam[i, i] S[i, j]
    lam[h, i] = wp[h, i] / sqrt((d_h + 1)(d_i + 1)),  lam[i, i] = 1 / (d_i + 1)
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .graph import Graph

DUST = 1e-12


def mp_coefficients(g: Graph, wp: np.ndarray) -> sp.csr_matrix:
    """Sparse ``n x n`` matrix whose row ``i`` holds the coefficients of row ``i`` of M."""
    wp = np.asarray(wp, dtype=np.float64)
    if wp.shape != (g.m,):
        raise ValueError(f"need one pattern weight per edge ({g.m}), got shape {wp.shape}")
    d1 = g.degrees + 1.0
    rows = np.repeat(np.arange(g.n), np.diff(g.indptr))
    off = wp[g.slot_edge] / np.sqrt(d1[rows] * d1[g.indices])
    lam = sp.csr_matrix((off, g.indices, g.indptr), shape=(g.n, g.n))
    lam = (lam + sp.diags(1.0 / d1)).tocsr()
    lam.sort_indices()
    return lam


def mp_apply(s, g: Graph, wp: np.ndarray) -> sp.csr_matrix:
    """Apply the multiple-perspective transform to proximity matrix ``s``.

    The product with the coefficient matrix is a row gather: each output
    row touches only the ``d_i + 1`` contributing rows of ``s``.  Entries
    smaller than 1e-12 in magnitude are dropped.
    """
    if s.shape != (g.n, g.n):
        raise ValueError(f"proximity matrix shape {s.shape} does not match graph with n={g.n}")
    lam = mp_coefficients(g, wp)
    m = (lam @ sp.csr_matrix(s)).tocsr()
    m.data[np.abs(m.data) < DUST] = 0.0
    m.eliminate_zeros()
    m.sort_indices()
    return m
