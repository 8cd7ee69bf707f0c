"""Serial truss decomposition, a brute-force peeling oracle, and k-truss extraction."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit, types
from numba.typed import Dict

from .graph_core import CsrGraph, TrussGraph
from .triangle import ORACLE_MAX_N, OracleTooLarge

TRUSS_DTYPE = np.int32


@dataclass
class TrussnessResult:
    truss: np.ndarray
    t_max: int
    kclass_sizes: dict = field(default_factory=dict)

    @classmethod
    def from_truss(cls, truss) -> "TrussnessResult":
        truss = np.asarray(truss, dtype=TRUSS_DTYPE)
        if truss.size == 0:
            return cls(truss, 0, {})
        levels, counts = np.unique(truss, return_counts=True)
        sizes = {int(k): int(c) for k, c in zip(levels, counts)}
        return cls(truss, int(truss.max()), sizes)

    @classmethod
    def from_support(cls, s) -> "TrussnessResult":
        return cls.from_truss(np.asarray(s, dtype=np.int64) + 2)


# --------------------------------------------------------------------------- bucket order


@njit(cache=True)
def _bucket_build(s):
    """Counting sort of edge ids by support; ties stay in id order."""
    m = s.shape[0]
    smax = 0
    for e in range(m):
        if s[e] > smax:
            smax = s[e]
    start = np.zeros(smax + 2, dtype=np.int64)
    for e in range(m):
        start[s[e] + 1] += 1
    for k in range(1, smax + 2):
        start[k] += start[k - 1]
    fill = start.copy()
    order = np.empty(m, dtype=np.int64)
    pos = np.empty(m, dtype=np.int64)
    for e in range(m):
        p = fill[s[e]]
        order[p] = e
        pos[e] = p
        fill[s[e]] += 1
    return order, pos, start


@njit(cache=True)
def _bucket_decrement(s, order, pos, start, e):
    """Move ``e`` from bucket ``s[e]`` to ``s[e] - 1`` in O(1)."""
    k = s[e]
    first = start[k]
    f = order[first]
    p = pos[e]
    if f != e:
        order[first] = e
        pos[e] = first
        order[p] = f
        pos[f] = p
    start[k] += 1
    s[e] = k - 1


@dataclass
class EdgeBucketOrder:
    """Edges kept sorted by current support with constant-time decrements.

    ``order`` is the sorted edge array, ``pos[e]`` the index of ``e`` in it
    and ``start[k]`` the index where the support-``k`` bucket begins.
    """

    support: np.ndarray
    order: np.ndarray
    pos: np.ndarray
    start: np.ndarray

    @classmethod
    def build(cls, s) -> "EdgeBucketOrder":
        s = np.array(s, dtype=np.int64)
        order, pos, start = _bucket_build(s)
        return cls(s, order, pos, start)

    def decrement(self, e: int) -> None:
        if self.support[e] <= 0:
            raise ValueError(f"support of edge {e} is already 0")
        _bucket_decrement(self.support, self.order, self.pos, self.start, e)

    def check(self) -> None:
        s = self.support[self.order]
        assert np.all(np.diff(s) >= 0), "order not sorted by support"
        assert np.array_equal(self.pos[self.order], np.arange(self.order.size)), "pos/order mismatch"
        for k in range(self.start.size - 1):
            lo, hi = self.start[k], self.start[k + 1]
            assert lo <= hi, "bucket starts decrease"
            assert np.all(s[lo:hi] == k), f"bucket {k} holds wrong supports"


# --------------------------------------------------------------------------- WC


@njit(cache=True)
def _wc(offsets, neighbors, eid, el, s):
    m = el.shape[0]
    table = Dict.empty(key_type=types.int64, value_type=types.int64)
    for e in range(m):
        table[(np.int64(el[e, 0]) << 32) | np.int64(el[e, 1])] = e
    deleted = np.zeros(m, dtype=np.bool_)
    order, pos, start = _bucket_build(s)
    for i in range(m):
        e = order[i]
        u = np.int64(el[e, 0])
        v = np.int64(el[e, 1])
        k = s[e]
        for j in range(offsets[u], offsets[u + 1]):
            w = np.int64(neighbors[j])
            if w == v:
                continue
            e_uw = eid[j]
            if deleted[e_uw]:
                continue
            if v < w:
                key = (v << 32) | w
            else:
                key = (w << 32) | v
            if key not in table:
                continue
            e_vw = table[key]
            if deleted[e_vw]:
                continue
            if s[e_uw] > k:
                _bucket_decrement(s, order, pos, start, e_uw)
            if s[e_vw] > k:
                _bucket_decrement(s, order, pos, start, e_vw)
        deleted[e] = True
    return s


def truss_wc(tg: TrussGraph, s0) -> TrussnessResult:
    """Serial bottom-up peeling in ascending support order.

    Triangle closure is checked through a vertex-pair -> edge-id map; edges
    are deleted by flag. ``s0`` is not modified.
    """
    s0 = np.asarray(s0)
    if s0.shape != (tg.m,):
        raise ValueError(f"support has shape {s0.shape}, graph has m={tg.m}")
    s = _wc(tg.offsets, tg.neighbors, tg.eid, tg.el, s0.astype(np.int64))
    return TrussnessResult.from_support(s)


# --------------------------------------------------------------------------- oracle


def truss_oracle(g: CsrGraph, max_n: int = ORACLE_MAX_N) -> TrussnessResult:
    """Naive peeling with supports recomputed from scratch after every sweep.

    At level ``k`` every surviving edge in at most ``k - 2`` surviving
    triangles is removed and assigned trussness ``k``; the sweep repeats
    until nothing changes, then ``k`` increases.
    """
    n = g.n
    if n > max_n:
        raise OracleTooLarge(f"oracle limited to n <= {max_n}, got n={n}")
    edges = g.edges()
    m = edges.shape[0]
    truss = np.zeros(m, dtype=TRUSS_DTYPE)
    alive = np.ones(m, dtype=bool)
    k = 2
    while alive.any():
        while True:
            a = np.zeros((n, n), dtype=np.float64)
            live = edges[alive]
            a[live[:, 0], live[:, 1]] = 1.0
            a[live[:, 1], live[:, 0]] = 1.0
            support = np.rint((a @ a)[edges[:, 0], edges[:, 1]])
            doomed = alive & (support <= k - 2)
            if not doomed.any():
                break
            truss[doomed] = k
            alive &= ~doomed
        k += 1
    return TrussnessResult.from_truss(truss)


# --------------------------------------------------------------------------- k-truss subgraphs


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _component_roots(n, edges, keep):
    parent = np.arange(n)
    rank = np.zeros(n, dtype=np.int64)
    for e in range(edges.shape[0]):
        if not keep[e]:
            continue
        a = _find(parent, edges[e, 0])
        b = _find(parent, edges[e, 1])
        if a == b:
            continue
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        if rank[a] == rank[b]:
            rank[a] += 1
    roots = np.full(edges.shape[0], -1, dtype=np.int64)
    for e in range(edges.shape[0]):
        if keep[e]:
            roots[e] = _find(parent, edges[e, 0])
    return roots


def ktruss_subgraphs(g: CsrGraph, truss: TrussnessResult, k: int) -> list:
    """Maximal k-trusses as arrays of edge ids, ordered by smallest member id.

    Components come from union-find over the edges with trussness >= ``k``.
    """
    if truss.truss.shape != (g.m,):
        raise ValueError(f"trussness array has shape {truss.truss.shape}, graph has m={g.m}")
    if not 2 <= k <= truss.t_max:
        raise ValueError(f"k must lie in [2, {truss.t_max}], got {k}")
    edges = g.edges()
    keep = truss.truss >= k
    roots = _component_roots(g.n, edges, keep)
    ids = np.flatnonzero(keep)
    if ids.size == 0:
        return []
    # stable sort keeps edge ids ascending inside each component
    by_root = ids[np.argsort(roots[ids], kind="stable")]
    cuts = np.flatnonzero(np.diff(roots[by_root])) + 1
    parts = np.split(by_root, cuts)
    parts.sort(key=lambda p: int(p[0]))
    return parts
