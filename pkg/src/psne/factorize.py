"""Log filtering and randomized SVD of the proximity matrix."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def log_filter(m, mu: float, n: int) -> sp.csr_matrix:
    """Replace each stored entry ``x`` by ``max(0, log(x n mu))``.

    Implicit zeros stay zero, which is exact since the filter vanishes as
    ``x -> 0+``.  Entries that map to zero are removed from storage.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    out = sp.csr_matrix(m, dtype=np.float64, copy=True)
    x = out.data
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.log(np.where(x > 0, x * (n * mu), 1.0))
    out.data = np.maximum(y, 0.0)
    out.eliminate_zeros()
    return out


def _orth(y: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(y)
    return q


def rsvd(m, k: int, oversample: int = 10, power_iters: int = 8, rng=None):
    """Rank-``k`` randomized SVD with subspace iteration.

    Returns ``U`` (n x k), singular values (k,) in decreasing order, and
    ``V`` (n_cols x k).
    """
    n_rows, n_cols = m.shape
    if not 1 <= k <= min(n_rows, n_cols):
        raise ValueError(f"k={k} out of range for a {n_rows}x{n_cols} matrix")
    width = k + oversample
    if width > min(n_rows, n_cols):
        raise ValueError(f"k + oversample = {width} exceeds matrix size {min(n_rows, n_cols)}")
    rng = np.random.default_rng(rng)
    a = sp.csr_matrix(m) if sp.issparse(m) else np.asarray(m, dtype=np.float64)
    at = a.T.tocsr() if sp.issparse(a) else a.T

    omega = rng.standard_normal((n_cols, width))
    q = _orth(a @ omega)
    for _ in range(power_iters):
        q = _orth(at @ q)
        q = _orth(a @ q)
    b = np.asarray((at @ q).T)
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub[:, :k]
    return u, s[:k], vt[:k].T


def embed(u: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Scale the columns of ``u`` by the square roots of ``sigma``."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(sigma < 0):
        raise ValueError("singular values must be nonnegative")
    return np.asarray(u) * np.sqrt(sigma)[None, :]
