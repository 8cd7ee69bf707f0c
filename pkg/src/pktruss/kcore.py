"""Vertex coreness: bucket-sort peeling (serial) and level-synchronous peeling (parallel)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .atomics import fetch_add, fetch_sub
from .frontier import BUFFER_CAPACITY, flush, push
from .graph_core import CsrGraph
from .parallel import WorkerTeam

VERTEX_CHUNK = 4


@dataclass
class CorenessResult:
    core: np.ndarray
    c_max: int

    @classmethod
    def from_array(cls, core: np.ndarray) -> "CorenessResult":
        core = np.asarray(core, dtype=np.int64)
        return cls(core, int(core.max()) if core.size else 0)


@njit(cache=True)
def _bz(offsets, neighbors, n):
    deg = np.empty(n, dtype=np.int64)
    md = 0
    for v in range(n):
        deg[v] = offsets[v + 1] - offsets[v]
        if deg[v] > md:
            md = deg[v]
    bins = np.zeros(md + 1, dtype=np.int64)
    for v in range(n):
        bins[deg[v]] += 1
    start = 0
    for d in range(md + 1):
        cnt = bins[d]
        bins[d] = start
        start += cnt
    vert = np.empty(n, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    if md >= 0 and n > 0:
        bins[0] = 0
    for i in range(n):
        v = vert[i]
        for j in range(offsets[v], offsets[v + 1]):
            u = neighbors[j]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] -= 1
    return deg


def kcore_serial(g: CsrGraph) -> CorenessResult:
    """Exact coreness by bucket-ordered peeling with constant-time bucket moves."""
    return CorenessResult.from_array(_bz(g.offsets, g.neighbors, g.n))


@njit(nogil=True, cache=True)
def _scan_vertices(wid, workers, deg, level, curr, curr_tail, buffers):
    n = deg.shape[0]
    lo = n * wid // workers
    hi = n * (wid + 1) // workers
    buff = buffers[wid]
    fill = 0
    for v in range(lo, hi):
        if deg[v] == level:
            fill = push(buff, fill, v, curr, curr_tail)
    flush(buff, fill, curr, curr_tail)


@njit(nogil=True, cache=True)
def _process_vertices(
    wid, curr, curr_len, offsets, neighbors, deg, level, nxt, next_tail, buffers, cursor, chunk
):
    buff = buffers[wid]
    fill = 0
    while True:
        start = fetch_add(cursor, 0, chunk)
        if start >= curr_len:
            break
        stop = min(start + chunk, curr_len)
        for i in range(start, stop):
            v = curr[i]
            for j in range(offsets[v], offsets[v + 1]):
                u = neighbors[j]
                if deg[u] > level:
                    before = fetch_sub(deg, u, 1)
                    if before == level + 1:
                        fill = push(buff, fill, u, nxt, next_tail)
                    if before <= level:
                        fetch_add(deg, u, 1)
    flush(buff, fill, nxt, next_tail)


def kcore_parallel(g: CsrGraph, workers: int = 1, team: Optional[WorkerTeam] = None) -> CorenessResult:
    """Level-synchronous peeling over vertex frontiers.

    Level ``l`` scans for vertices whose residual degree is ``l``; each
    sub-level decrements the degrees of their neighbors (never below ``l``)
    and collects the ones that land on ``l`` into the next frontier.
    """
    own = team is None
    if own:
        team = WorkerTeam(workers)
    try:
        n = g.n
        deg = g.degrees().astype(np.int32)
        curr = np.zeros(n, dtype=np.uint32)
        nxt = np.zeros(n, dtype=np.uint32)
        curr_tail = np.zeros(1, dtype=np.int64)
        next_tail = np.zeros(1, dtype=np.int64)
        buffers = np.zeros((team.workers, BUFFER_CAPACITY), dtype=np.uint32)
        cursor = np.zeros(1, dtype=np.int64)
        todo = n
        level = 0
        while todo > 0:
            curr_tail[0] = 0
            team.run(_scan_vertices, team.workers, deg, level, curr, curr_tail, buffers)
            while curr_tail[0] > 0:
                todo -= int(curr_tail[0])
                cursor[0] = 0
                next_tail[0] = 0
                team.run(
                    _process_vertices, curr, int(curr_tail[0]), g.offsets, g.neighbors,
                    deg, level, nxt, next_tail, buffers, cursor, VERTEX_CHUNK,
                )
                curr, nxt = nxt, curr
                curr_tail, next_tail = next_tail, curr_tail
            level += 1
        return CorenessResult.from_array(deg)
    finally:
        if own:
            team.close()


def coreness_order(res: CorenessResult) -> np.ndarray:
    """``perm[v]`` = new id of ``v`` when sorting by (coreness, original id)."""
    order = np.argsort(res.core, kind="stable")
    perm = np.empty_like(order)
    perm[order] = np.arange(order.size, dtype=order.dtype)
    return perm.astype(np.int64)
