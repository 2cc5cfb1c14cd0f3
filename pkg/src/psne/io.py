"""Embedding and matrix file formats."""
from __future__ import annotations

import struct

import numpy as np
import scipy.sparse as sp

MAGIC = b"PSNE"


def write_embedding_tsv(path, node_ids, vectors) -> None:
    with open(path, "w") as fh:
        for nid, row in zip(node_ids, np.asarray(vectors)):
            fh.write(str(int(nid)) + "\t" + "\t".join(f"{x:.9g}" for x in row) + "\n")


def read_embedding_tsv(path):
    ids, rows = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split("\t")
            if not parts or parts == [""]:
                continue
            try:
                ids.append(int(parts[0]))
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed embedding row") from None
    if len({len(r) for r in rows}) > 1:
        raise ValueError(f"{path}: rows have differing dimensions")
    return np.array(ids, dtype=np.int64), np.array(rows, dtype=np.float64)


def write_embedding_binary(path, vectors) -> None:
    """Header ``PSNE``, u64 n, u64 k, then n*k little-endian float64, row-major."""
    v = np.ascontiguousarray(vectors, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC + struct.pack("<QQ", *v.shape))
        fh.write(v.tobytes())


def read_embedding_binary(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(20)
        if head[:4] != MAGIC:
            raise ValueError(f"{path}: bad magic")
        n, k = struct.unpack("<QQ", head[4:])
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n * k:
        raise ValueError(f"{path}: expected {n * k} values, found {data.size}")
    return data.reshape(n, k).astype(np.float64)


def write_triplets(path, matrix) -> None:
    """``row col value`` lines in row-major order."""
    coo = sp.csr_matrix(matrix).tocoo()
    with open(path, "w") as fh:
        for r, c, x in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {float(x)!r}\n")


def read_triplets(path, shape) -> sp.csr_matrix:
    data = np.loadtxt(path, ndmin=2)
    if data.size == 0:
        return sp.csr_matrix(shape)
    return sp.csr_matrix((data[:, 2], (data[:, 0].astype(int), data[:, 1].astype(int))), shape=shape)


def write_pattern_weights(path, g, wp) -> None:
    with open(path, "w") as fh:
        for e in range(g.m):
            fh.write(f"{g.node_ids[g.edge_u[e]]} {g.node_ids[g.edge_v[e]]} {wp[e]:.9g}\n")
