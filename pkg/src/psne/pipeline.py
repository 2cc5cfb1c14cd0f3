"""End-to-end embedding: sparsify, re-weight, filter, factorize."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .config import PsneConfig
from .factorize import embed, log_filter, rsvd
from .graph import Graph
from .mp import mp_apply
from .sparsifier import build_sparsifier

log = logging.getLogger(__name__)


@dataclass
class EmbeddingResult:
    vectors: np.ndarray
    node_ids: np.ndarray
    singular_values: np.ndarray
    timings: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)


def psne_embed(g: Graph, cfg: PsneConfig, use_mp: bool = True) -> EmbeddingResult:
    cfg.check_graph(g.n)
    timings, stats = {}, {}
    t0 = time.perf_counter()
    sparse = build_sparsifier(g, cfg)
    timings["sparsify"] = time.perf_counter() - t0
    stats.update(n=g.n, m=g.m, samples=sparse.n_samples, dropped=sparse.n_dropped,
                 nnz_l_tilde=sparse.l_tilde.nnz, nnz_pi_tilde=sparse.pi_tilde.nnz)

    t0 = time.perf_counter()
    prox = sparse.pi_tilde
    if use_mp:
        wp = sparse.pattern_table.finalize()
        prox = mp_apply(prox, g, wp)
        stats.update(wp_mean=float(wp.mean()), nnz_mp=prox.nnz)
    timings["multi_perspective"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    filtered = log_filter(prox, cfg.mu, g.n)
    timings["filter"] = time.perf_counter() - t0
    stats["nnz_filtered"] = filtered.nnz

    t0 = time.perf_counter()
    oversample = min(cfg.oversample, g.n - cfg.k)
    rng = np.random.default_rng([cfg.seed, 7])
    u, s, _ = rsvd(filtered, cfg.k, oversample=oversample, power_iters=cfg.power_iters, rng=rng)
    vectors = embed(u, s)
    timings["rsvd"] = time.perf_counter() - t0
    if not np.all(np.isfinite(vectors)):
        raise FloatingPointError("embedding contains non-finite values")
    for stage, sec in timings.items():
        log.info("stage %s: %.3fs", stage, sec)
    return EmbeddingResult(vectors=vectors, node_ids=g.node_ids, singular_values=s,
                           timings=timings, stats=stats)
