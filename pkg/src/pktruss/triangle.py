"""Per-edge support (triangle membership counts) and triangle counting.

Two parallel kernels compute the same support array:

* ``support_am4`` -- vertex-pivot kernel over the oriented graph. Pivot ``u``
  marks its higher neighbors, then for every lower neighbor ``v`` walks the
  higher neighbors of ``v`` from the top down until they drop below ``u``.
  Every triangle ``v < u < w`` is found once, at its middle vertex, and bumps
  its three edges with atomic adds.
* ``support_ros`` -- edge-based kernel intersecting the full adjacencies of
  both endpoints; no atomics since each edge owns its counter, but roughly
  ``2 * sum d(v)^2`` work instead of ``sum d+(v)^2``.

``triangle_oracle`` is a dense brute-force reference for small graphs.
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from numba import njit

from .atomics import fetch_add
from .graph_core import CsrGraph, TrussGraph
from .parallel import WorkerTeam

SUPPORT_DTYPE = np.int32
PIVOT_CHUNK = 10
ORACLE_MAX_N = 512


class OracleTooLarge(ValueError):
    pass


def _mark_scratch(workers: int, n: int) -> np.ndarray:
    # one row per worker; slot index + 1, zero meaning unmarked
    return np.zeros((workers, max(n, 1)), dtype=np.uint32)


@njit(nogil=True, cache=True)
def _am4_worker(wid, offsets, neighbors, eid, eo, s, scratch, cursor, chunk, debug, dirty):
    n = eo.shape[0]
    x = scratch[wid]
    while True:
        start = fetch_add(cursor, 0, chunk)
        if start >= n:
            break
        stop = min(start + chunk, n)
        for u in range(start, stop):
            for j in range(eo[u], offsets[u + 1]):
                x[neighbors[j]] = j + 1
            for j in range(offsets[u], eo[u]):
                v = neighbors[j]
                e_vu = eid[j]
                k = np.int64(offsets[v + 1]) - 1
                lo = np.int64(eo[v])
                while k >= lo:
                    w = neighbors[k]
                    if w < u:
                        break
                    mark = x[w]
                    if mark != 0:
                        fetch_add(s, eid[k], 1)
                        fetch_add(s, e_vu, 1)
                        fetch_add(s, eid[mark - 1], 1)
                    k -= 1
            for j in range(eo[u], offsets[u + 1]):
                x[neighbors[j]] = 0
            if debug:
                for i in range(x.shape[0]):
                    if x[i] != 0:
                        dirty[0] = 1


@njit(nogil=True, cache=True)
def _ros_worker(wid, offsets, neighbors, el, s, scratch, cursor, chunk, debug, dirty):
    m = el.shape[0]
    x = scratch[wid]
    while True:
        start = fetch_add(cursor, 0, chunk)
        if start >= m:
            break
        stop = min(start + chunk, m)
        for e in range(start, stop):
            u = el[e, 0]
            v = el[e, 1]
            for j in range(offsets[u], offsets[u + 1]):
                x[neighbors[j]] = j + 1
            count = 0
            for j in range(offsets[v], offsets[v + 1]):
                w = neighbors[j]
                if w != u and x[w] != 0:
                    count += 1
            s[e] = count
            for j in range(offsets[u], offsets[u + 1]):
                x[neighbors[j]] = 0
            if debug:
                for i in range(x.shape[0]):
                    if x[i] != 0:
                        dirty[0] = 1


@njit(nogil=True, cache=True)
def _count_worker(wid, offsets, neighbors, eo, scratch, cursor, chunk, counts):
    n = eo.shape[0]
    x = scratch[wid]
    local = 0
    while True:
        start = fetch_add(cursor, 0, chunk)
        if start >= n:
            break
        stop = min(start + chunk, n)
        for u in range(start, stop):
            for j in range(eo[u], offsets[u + 1]):
                x[neighbors[j]] = 1
            for j in range(offsets[u], eo[u]):
                v = neighbors[j]
                k = np.int64(offsets[v + 1]) - 1
                lo = np.int64(eo[v])
                while k >= lo:
                    w = neighbors[k]
                    if w < u:
                        break
                    local += x[w]
                    k -= 1
            for j in range(eo[u], offsets[u + 1]):
                x[neighbors[j]] = 0
    counts[wid] = local


def _run(kernel_args, kernel, workers, team):
    own = team is None
    if own:
        team = WorkerTeam(workers)
    try:
        team.run(kernel, *kernel_args(team.workers))
    finally:
        if own:
            team.close()


def support_am4(
    tg: TrussGraph, workers: int = 1, team: Optional[WorkerTeam] = None, debug: bool = False
) -> np.ndarray:
    """Exact support per edge id using the oriented vertex-pivot kernel.

    ``debug=True`` rescans each worker's whole mark array after every pivot
    and raises if anything was left marked; only sensible on tiny graphs.
    """
    s = np.zeros(tg.m, dtype=SUPPORT_DTYPE)
    dirty = np.zeros(1, dtype=np.int64)
    cursor = np.zeros(1, dtype=np.int64)
    _run(
        lambda w: (tg.offsets, tg.neighbors, tg.eid, tg.eo, s, _mark_scratch(w, tg.n),
                   cursor, PIVOT_CHUNK, debug, dirty),
        _am4_worker, workers, team,
    )
    if dirty[0]:
        raise AssertionError("mark scratch not cleared between pivots")
    return s


def support_ros(
    tg: TrussGraph, workers: int = 1, team: Optional[WorkerTeam] = None, debug: bool = False
) -> np.ndarray:
    """Exact support per edge id by intersecting both endpoint adjacencies."""
    s = np.zeros(tg.m, dtype=SUPPORT_DTYPE)
    dirty = np.zeros(1, dtype=np.int64)
    cursor = np.zeros(1, dtype=np.int64)
    _run(
        lambda w: (tg.offsets, tg.neighbors, tg.el, s, _mark_scratch(w, tg.n),
                   cursor, PIVOT_CHUNK, debug, dirty),
        _ros_worker, workers, team,
    )
    if dirty[0]:
        raise AssertionError("mark scratch not cleared between edges")
    return s


def triangle_count(tg: TrussGraph, workers: int = 1, team: Optional[WorkerTeam] = None) -> int:
    """Number of triangles; per-worker tallies, no shared per-edge writes."""
    holder = {}

    def args(w):
        holder["counts"] = np.zeros(w, dtype=np.int64)
        return (tg.offsets, tg.neighbors, tg.eo, _mark_scratch(w, tg.n),
                np.zeros(1, dtype=np.int64), PIVOT_CHUNK, holder["counts"])

    _run(args, _count_worker, workers, team)
    return int(holder["counts"].sum())


def triangle_oracle(g: CsrGraph, max_n: int = ORACLE_MAX_N):
    """Brute force over all vertex triples via the dense adjacency matrix.

    Returns ``(triangle_count, support)`` with support indexed by the edge
    ids :func:`~pktruss.graph_core.build_truss_graph` assigns (ascending
    ``(u, v)``, ``u < v``).
    """
    n = g.n
    if n > max_n:
        raise OracleTooLarge(f"oracle limited to n <= {max_n}, got n={n}")
    if n == 0:
        return 0, np.zeros(0, dtype=SUPPORT_DTYPE)
    a = np.zeros((n, n), dtype=np.float64)
    edges = g.edges()
    a[edges[:, 0], edges[:, 1]] = 1.0
    a[edges[:, 1], edges[:, 0]] = 1.0
    common = a @ a  # common[u, v] = #w adjacent to both
    support = np.rint(common[edges[:, 0], edges[:, 1]]).astype(SUPPORT_DTYPE)
    count = int(np.rint(np.trace(common @ a))) // 6
    return count, support
