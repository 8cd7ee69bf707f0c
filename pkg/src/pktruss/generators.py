"""Seeded synthetic graph generators producing raw edge streams.

Outputs are ``(k, 2)`` int64 label arrays, exactly what an edge-list file
would hold; feed them through :func:`pktruss.graph_core.canonicalize`.
"""
from __future__ import annotations

import numpy as np

RMAT_DEFAULT_PROBS = (0.57, 0.19, 0.19, 0.05)
RMAT_DEFAULT_EDGE_FACTOR = 16


def erdos_renyi(n: int, p: float, seed: int = 0) -> np.ndarray:
    """G(n, p): every pair ``i < j`` independently with probability ``p``.

    Pairs are emitted row by row in ascending ``(i, j)`` order.
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n - 1):
        hit = np.flatnonzero(rng.random(n - i - 1) < p)
        if hit.size:
            block = np.empty((hit.size, 2), dtype=np.int64)
            block[:, 0] = i
            block[:, 1] = hit + i + 1
            rows.append(block)
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(rows)


def rmat(
    scale: int,
    edge_factor: int = RMAT_DEFAULT_EDGE_FACTOR,
    probs=RMAT_DEFAULT_PROBS,
    seed: int = 0,
) -> np.ndarray:
    """Recursive-matrix (Kronecker) generator over ``2**scale`` vertex labels.

    Draws exactly ``edge_factor * 2**scale`` raw edges; duplicates and
    self-loops are left in for the canonicalizer to remove.
    """
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    if edge_factor < 1:
        raise ValueError(f"edge_factor must be >= 1, got {edge_factor}")
    a, b, c, d = (float(x) for x in probs)
    if min(a, b, c, d) < 0 or abs(a + b + c + d - 1.0) > 1e-9:
        raise ValueError(f"RMAT probabilities must be nonnegative and sum to 1, got {probs}")
    rng = np.random.default_rng(seed)
    k = edge_factor << scale
    src = np.zeros(k, dtype=np.int64)
    dst = np.zeros(k, dtype=np.int64)
    for bit in range(scale):
        r = rng.random(k)
        # quadrants: a -> (0,0), b -> (0,1), c -> (1,0), d -> (1,1)
        down = r >= a + b
        right = ((r >= a) & (r < a + b)) | (r >= a + b + c)
        src |= down.astype(np.int64) << bit
        dst |= right.astype(np.int64) << bit
    return np.stack([src, dst], axis=1)
