"""Path-sampling sparsifier of the truncated PPR matrix.

Each sample picks an edge uniformly, draws a path length ``r`` with
probability proportional to ``alpha (1-alpha)^r``, extends the edge into a
length-``r`` walk and adds weight ``2 r m / (N Z)`` between the walk's
endpoints, where ``Z`` sums ``2 / A`` over the walk's edges.  The resulting
graph's Laplacian is an unbiased estimate of the random-walk matrix
polynomial, which gives the sparse PPR estimate

    Pi~ = alpha I + alpha_sum (I - D^-1 L~)

with ``D`` the degree matrix of the input graph.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .config import PsneConfig, alpha_sum
from .graph import Graph, random_step, random_steps
from .patterns import PatternTable, anonymize, anonymize_batch, lcss_batch

log = logging.getLogger(__name__)

BATCH = 1 << 18


@dataclass(frozen=True)
class SparsifierOutput:
    pi_tilde: sp.csr_matrix
    l_tilde: sp.csr_matrix
    pattern_table: PatternTable
    alpha_sum: float
    n_samples: int
    n_dropped: int


def length_distribution(alpha: float, T: int) -> np.ndarray:
    """Probabilities of path lengths ``1..T``."""
    r = np.arange(1, T + 1)
    p = alpha * (1.0 - alpha) ** r
    return p / p.sum()


def sample_path_length(alpha: float, T: int, rng: np.random.Generator, size=None):
    p = length_distribution(alpha, T)
    r = rng.choice(np.arange(1, T + 1), size=size, p=p)
    return int(r) if size is None else r


def path_sampling(g: Graph, edge: tuple[int, int], r: int, rng: np.random.Generator):
    """Extend ``edge`` into a random length-``r`` path.

    The edge sits at a uniformly chosen position ``j`` of the path.
    Returns ``(n_0, n_r, Z, (traj_u, traj_v))`` where the trajectories are
    the anonymised walks grown out of ``u`` and ``v``.
    """
    u, v = edge
    j = int(rng.integers(1, r + 1))
    z = 2.0 / g.weight(u, v)
    walk_u = [u]
    for _ in range(j - 1):
        nxt = random_step(g, walk_u[-1], rng)
        z += 2.0 / g.weight(walk_u[-1], nxt)
        walk_u.append(nxt)
    walk_v = [v]
    for _ in range(r - j):
        nxt = random_step(g, walk_v[-1], rng)
        z += 2.0 / g.weight(walk_v[-1], nxt)
        walk_v.append(nxt)
    return walk_u[-1], walk_v[-1], z, (anonymize(walk_u), anonymize(walk_v))


def _walk_side(g, start, steps, max_steps, rng, keep_traj):
    """Walk ``steps[i]`` hops from ``start[i]``; returns ends, sum of 2/A, trajectories."""
    cur = start.copy()
    z = np.zeros(len(start))
    traj = None
    if keep_traj is not None:
        traj = np.full((keep_traj.size, max_steps + 1), -1, dtype=np.int64)
        traj[:, 0] = start[keep_traj]
        # sample positions of the recorded walks
        rec_pos = np.full(len(start), -1, dtype=np.int64)
        rec_pos[keep_traj] = np.arange(keep_traj.size)
    for s in range(max_steps):
        active = np.flatnonzero(steps > s)
        if active.size == 0:
            break
        nxt, w = random_steps(g, cur[active], rng)
        cur[active] = nxt
        z[active] += 2.0 / w
        if traj is not None:
            pos = rec_pos[active]
            sel = pos >= 0
            traj[pos[sel], s + 1] = nxt[sel]
    return cur, z, traj


def _sample_chunk(g: Graph, cfg: PsneConfig, n_total: int, n_chunk: int, seed_seq, table: PatternTable):
    """Draw ``n_chunk`` samples; returns an upper-triangular weight matrix and drop count."""
    rng = np.random.default_rng(seed_seq)
    p_len = length_distribution(cfg.alpha, cfg.T)
    lengths = np.arange(1, cfg.T + 1)
    acc = sp.csr_matrix((g.n, g.n))
    dropped = 0
    done = 0
    while done < n_chunk:
        b = min(BATCH, n_chunk - done)
        done += b
        eid = rng.integers(g.m, size=b)
        r = rng.choice(lengths, size=b, p=p_len)
        j = rng.integers(1, r + 1)
        u, v = g.edge_u[eid], g.edge_v[eid]
        rec = np.flatnonzero(table.open_slots(eid))
        end_u, z_u, traj_u = _walk_side(g, u, j - 1, cfg.T - 1, rng, rec)
        end_v, z_v, traj_v = _walk_side(g, v, r - j, cfg.T - 1, rng, rec)
        z = 2.0 / g.edge_w[eid] + z_u + z_v

        if rec.size:
            la, lb = j[rec], r[rec] - j[rec] + 1
            ca = anonymize_batch(traj_u, la)
            cb = anonymize_batch(traj_v, lb)
            score = lcss_batch(ca, la, cb, lb) / np.maximum(la, lb)
            table.record_batch(eid[rec], score)

        w = 2.0 * r * g.m / (n_total * z)
        ok = end_u != end_v
        dropped += int(b - ok.sum())
        a, c = np.minimum(end_u, end_v)[ok], np.maximum(end_u, end_v)[ok]
        batch = sp.coo_matrix((w[ok], (a, c)), shape=(g.n, g.n)).tocsr()
        acc = acc + batch
    return acc, dropped


def build_sparsifier(g: Graph, cfg: PsneConfig) -> SparsifierOutput:
    """Sample ``N = c T m`` paths and assemble ``L~`` and ``Pi~``.

    Samples whose walk closes on itself carry no Laplacian weight and are
    dropped.  Work is split into ``cfg.threads`` chunks with independent
    random streams; output is reproducible for a fixed seed and thread count.
    """
    n_total = cfg.n_samples(g.m)
    workers = cfg.threads
    sizes = [n_total // workers + (i < n_total % workers) for i in range(workers)]
    streams = np.random.SeedSequence(cfg.seed).spawn(workers)
    tables = [PatternTable(g.m, cfg.s_cap) for _ in range(workers)]

    if workers == 1:
        results = [_sample_chunk(g, cfg, n_total, sizes[0], streams[0], tables[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sample_chunk, g, cfg, n_total, sizes[i], streams[i], tables[i])
                       for i in range(workers)]
            results = [f.result() for f in futures]

    upper = results[0][0]
    for acc, _ in results[1:]:
        upper = upper + acc
    dropped = sum(d for _, d in results)
    table = tables[0]
    for t in tables[1:]:
        table.merge(t)
    table._lookup = g.edge_id

    a_tilde = (upper + upper.T).tocsr()
    a_tilde.sum_duplicates()
    a_tilde.sort_indices()
    d_tilde = np.asarray(a_tilde.sum(axis=1)).ravel()
    l_tilde = (sp.diags(d_tilde) - a_tilde).tocsr()
    l_tilde.sort_indices()

    asum = alpha_sum(cfg.alpha, cfg.T)
    pi = pi_from_laplacian(l_tilde, g.degrees, cfg.alpha, asum)
    log.info("sparsifier: N=%d dropped=%d nnz(L~)=%d nnz(Pi~)=%d", n_total, dropped, l_tilde.nnz, pi.nnz)
    return SparsifierOutput(pi_tilde=pi, l_tilde=l_tilde, pattern_table=table,
                            alpha_sum=asum, n_samples=n_total, n_dropped=dropped)


def pi_from_laplacian(lap, degrees: np.ndarray, alpha: float, asum: float) -> sp.csr_matrix:
    """``alpha I + alpha_sum (I - D^-1 L)`` for a sparse Laplacian ``L``."""
    n = lap.shape[0]
    eye = sp.identity(n, format="csr")
    pi = (alpha + asum) * eye - asum * (sp.diags(1.0 / degrees) @ lap)
    pi = sp.csr_matrix(pi)
    pi.sum_duplicates()
    pi.sort_indices()
    return pi
