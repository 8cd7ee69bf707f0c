"""Graph canonicalization and the augmented CSR layout shared by every engine.

Raw edge streams are relabeled densely, stripped of self-loops and duplicate
edges, and stored as a symmetric CSR with sorted adjacency lists. On top of
that, :class:`TrussGraph` adds per-slot edge ids, the edge list and the
offset of the first higher-id neighbor of every vertex.
"""
from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from numba import njit

ID_DTYPE = np.uint32
ID_LIMIT = int(np.iinfo(ID_DTYPE).max)


class EdgeListError(ValueError):
    """A record in an edge-list input could not be parsed."""

    def __init__(self, message: str, record: Optional[int] = None, text: Optional[str] = None):
        self.record = record
        self.text = text
        where = f"record {record}" if record is not None else "input"
        detail = f": {text!r}" if text is not None else ""
        super().__init__(f"{where}{detail}: {message}")


class GraphTooLarge(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Simple undirected graph in compressed sparse row form.

    ``labels[v]`` is the original input label of dense vertex ``v``; it
    follows the vertex through :func:`reorder`.
    """

    offsets: np.ndarray
    neighbors: np.ndarray
    labels: np.ndarray

    @property
    def n(self) -> int:
        return self.offsets.shape[0] - 1

    @property
    def m(self) -> int:
        return self.neighbors.shape[0] // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets.astype(np.int64))

    def adj(self, u: int) -> np.ndarray:
        return self.neighbors[self.offsets[u] : self.offsets[u + 1]]

    def edges(self) -> np.ndarray:
        """(m, 2) array of ``(u, v)`` with ``u < v`` in ascending scan order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        dst = self.neighbors.astype(np.int64)
        keep = src < dst
        return np.stack([src[keep], dst[keep]], axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CsrGraph):
            return NotImplemented
        return (
            np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
            and np.array_equal(self.labels, other.labels)
        )

    def same_structure(self, other: "CsrGraph") -> bool:
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(
            self.neighbors, other.neighbors
        )

    def validate(self) -> None:
        off = self.offsets.astype(np.int64)
        nbr = self.neighbors.astype(np.int64)
        n = self.n
        assert off[0] == 0 and off[-1] == nbr.size, "offsets do not span neighbors"
        assert nbr.size % 2 == 0, "odd adjacency length"
        assert np.all(np.diff(off) >= 0), "offsets decrease"
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(off))
        assert np.all(nbr < n), "neighbor id out of range"
        assert not np.any(src == nbr), "self-loop"
        same_row = src[1:] == src[:-1]
        assert np.all(nbr[1:][same_row] > nbr[:-1][same_row]), "adjacency not strictly ascending"
        fwd = np.sort(src * n + nbr)
        rev = np.sort(nbr * n + src)
        assert np.array_equal(fwd, rev), "adjacency not symmetric"


@dataclass(frozen=True, eq=False)
class TrussGraph:
    """Augmented CSR: ``eid`` per adjacency slot, edge list ``el``, and ``eo``.

    ``eo[u]`` is the first slot of ``adj(u)`` holding a neighbor greater than
    ``u``, so ``neighbors[offsets[u]:eo[u]]`` are the lower neighbors and
    ``neighbors[eo[u]:offsets[u+1]]`` the higher ones.
    """

    csr: CsrGraph
    eid: np.ndarray
    el: np.ndarray
    eo: np.ndarray

    @property
    def n(self) -> int:
        return self.csr.n

    @property
    def m(self) -> int:
        return self.csr.m

    @property
    def offsets(self) -> np.ndarray:
        return self.csr.offsets

    @property
    def neighbors(self) -> np.ndarray:
        return self.csr.neighbors

    def core_array_bytes(self, support_itemsize: int = 4) -> dict:
        """Bytes held by the six arrays PKT works on.

        ``offsets`` is counted as ``n`` entries: its trailing sentinel always
        equals ``2m`` and is not part of the layout's accounting, which comes
        to ``28m + 8n`` bytes at 4-byte width.
        """
        item = self.neighbors.itemsize
        return {
            "neighbors": self.neighbors.nbytes,
            "offsets": self.n * item,
            "eid": self.eid.nbytes,
            "el": self.el.nbytes,
            "eo": self.eo.nbytes,
            "support": self.m * support_itemsize,
        }

    def validate(self) -> None:
        self.csr.validate()
        n, m = self.n, self.m
        off = self.offsets.astype(np.int64)
        nbr = self.neighbors.astype(np.int64)
        eid = self.eid.astype(np.int64)
        el = self.el.astype(np.int64)
        assert self.eid.shape == (2 * m,) and self.el.shape == (m, 2) and self.eo.shape == (n,)
        assert np.array_equal(np.bincount(eid, minlength=m), np.full(m, 2)), "eid not 2-to-1 onto 0..m-1"
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(off))
        assert np.array_equal(el[eid, 0], np.minimum(src, nbr)), "el/eid mismatch"
        assert np.array_equal(el[eid, 1], np.maximum(src, nbr)), "el/eid mismatch"
        for u in range(n):
            lo, hi = off[u], off[u + 1]
            expect = lo + np.searchsorted(nbr[lo:hi], u, side="right")
            assert self.eo[u] == expect, f"eo[{u}] wrong"


@dataclass
class GraphStats:
    n: int
    m: int
    d_max: int
    wedge_count: int
    sum_deg_sq: int
    sum_dplus_sq: int
    triangle_count: Optional[int] = None
    c_max: Optional[int] = None
    t_max: Optional[int] = None


# --------------------------------------------------------------------------- construction


def _check_width(n: int, m: int) -> None:
    if n > ID_LIMIT or 2 * m > ID_LIMIT:
        raise GraphTooLarge(
            f"graph with n={n}, m={m} does not fit 4-byte ids (need n and 2m <= {ID_LIMIT})"
        )


def _csr_from_directed(n: int, src: np.ndarray, dst: np.ndarray, labels: np.ndarray) -> CsrGraph:
    """``src``/``dst`` must already hold both orientations of every edge once."""
    _check_width(n, src.size // 2)
    order = np.lexsort((dst, src))
    counts = np.bincount(src, minlength=n) if n else np.zeros(0, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=ID_DTYPE)
    np.cumsum(counts, out=offsets[1:])
    neighbors = dst[order].astype(ID_DTYPE)
    return CsrGraph(_frozen(offsets), _frozen(neighbors), _frozen(np.asarray(labels, dtype=np.int64)))


def from_pairs(n: int, pairs, labels=None) -> CsrGraph:
    """Build a graph on vertices ``0..n-1`` from already-dense vertex pairs.

    Self-loops and repeated pairs are dropped. Unlike :func:`canonicalize`
    no relabeling happens, so isolated vertices and the empty graph are fine.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise ValueError(f"vertex id out of range for n={n}")
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    keep = lo != hi
    key = np.unique(lo[keep].astype(np.uint64) * np.uint64(max(n, 1)) + hi[keep].astype(np.uint64))
    lo = (key // np.uint64(max(n, 1))).astype(np.int64)
    hi = (key % np.uint64(max(n, 1))).astype(np.int64)
    if labels is None:
        labels = np.arange(n, dtype=np.int64)
    return _csr_from_directed(n, np.concatenate([lo, hi]), np.concatenate([hi, lo]), labels)


def canonicalize(raw) -> CsrGraph:
    """Turn a raw ``(u, v)`` label stream into a simple undirected :class:`CsrGraph`.

    Dense ids follow first appearance in the stream (``u`` before ``v``
    within a record). Vertices whose only edges are self-loops survive as
    isolated vertices.
    """
    raw = np.asarray(raw)
    if raw.size == 0:
        raise EdgeListError("edge list is empty")
    if raw.ndim != 2 or raw.shape[1] != 2:
        raise EdgeListError(f"expected (k, 2) label pairs, got shape {raw.shape}")
    if not np.issubdtype(raw.dtype, np.integer):
        raise EdgeListError(f"labels must be integers, got {raw.dtype}")
    raw = raw.astype(np.int64)
    bad = np.flatnonzero((raw < 0).any(axis=1))
    if bad.size:
        i = int(bad[0])
        raise EdgeListError("negative vertex label", record=i, text=f"{raw[i, 0]} {raw[i, 1]}")
    flat = raw.ravel()
    uniq, first = np.unique(flat, return_index=True)
    order = np.argsort(first, kind="stable")
    labels = uniq[order]
    dense_of_uniq = np.empty(uniq.size, dtype=np.int64)
    dense_of_uniq[order] = np.arange(uniq.size, dtype=np.int64)
    ids = dense_of_uniq[np.searchsorted(uniq, flat)].reshape(-1, 2)
    n = int(uniq.size)
    _check_width(n, 0)
    return from_pairs(n, ids, labels=labels)


@njit(cache=True)
def _assign_edge_ids(offsets, neighbors, n, m):
    eid = np.empty(neighbors.shape[0], dtype=np.uint32)
    el = np.empty((m, 2), dtype=np.uint32)
    eo = np.empty(n, dtype=np.uint32)
    cursor = offsets[:-1].astype(np.int64)
    next_id = 0
    for u in range(n):
        lo = offsets[u]
        hi = offsets[u + 1]
        j = lo
        while j < hi and neighbors[j] < u:
            j += 1
        eo[u] = j
        for k in range(j, hi):
            v = neighbors[k]
            eid[k] = next_id
            el[next_id, 0] = u
            el[next_id, 1] = v
            # u is the next not-yet-seen lower neighbor in adj(v)
            eid[cursor[v]] = next_id
            cursor[v] += 1
            next_id += 1
    return eid, el, eo


def build_truss_graph(g: CsrGraph) -> TrussGraph:
    """Attach edge ids (ascending ``(u, v)``, ``u < v`` scan order), ``el`` and ``eo``."""
    eid, el, eo = _assign_edge_ids(g.offsets, g.neighbors, g.n, g.m)
    return TrussGraph(g, _frozen(eid), _frozen(el), _frozen(eo))


def reorder(g: CsrGraph, perm) -> CsrGraph:
    """Relabel vertex ``v`` as ``perm[v]`` and re-sort every adjacency list."""
    perm = np.asarray(perm)
    n = g.n
    if perm.shape != (n,) or not np.issubdtype(perm.dtype, np.integer):
        raise ValueError(f"perm must be an integer array of length {n}")
    perm = perm.astype(np.int64)
    if n and (perm.min() < 0 or perm.max() >= n or np.any(np.bincount(perm, minlength=n) != 1)):
        raise ValueError("perm is not a bijection on 0..n-1")
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    dst = g.neighbors.astype(np.int64)
    labels = np.empty(n, dtype=np.int64)
    labels[perm] = g.labels
    return _csr_from_directed(n, perm[src], perm[dst], labels)


def inverse_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=np.int64)
    return inv


def out_degrees(g: CsrGraph) -> np.ndarray:
    """``d+(v)``: neighbors with a higher id under the current ordering."""
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees())
    higher = g.neighbors.astype(np.int64) > src
    return np.bincount(src[higher], minlength=g.n)


def stats(g: CsrGraph) -> GraphStats:
    deg = g.degrees()
    sum_deg_sq = int(np.sum(deg * deg))
    dplus = out_degrees(g)
    return GraphStats(
        n=g.n,
        m=g.m,
        d_max=int(deg.max()) if g.n else 0,
        wedge_count=(sum_deg_sq - 2 * g.m) // 2,
        sum_deg_sq=sum_deg_sq,
        sum_dplus_sq=int(np.sum(dplus * dplus)),
    )


# --------------------------------------------------------------------------- text I/O


def _open_text(path):
    path = os.fspath(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def parse_edge_lines(lines: Iterable[str]) -> np.ndarray:
    """Parse edge-list text lines into a ``(k, 2)`` int64 label array.

    Blank lines and lines starting with ``#`` or ``%`` are skipped. Extra
    columns after the two endpoints (weights, timestamps) are ignored.
    """
    us = []
    vs = []
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) < 2:
            raise EdgeListError("expected two vertex labels", record=lineno, text=s)
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise EdgeListError("vertex label is not an integer", record=lineno, text=s) from None
        if u < 0 or v < 0:
            raise EdgeListError("negative vertex label", record=lineno, text=s)
        if u > 2**63 - 1 or v > 2**63 - 1:
            raise EdgeListError("vertex label exceeds 64-bit range", record=lineno, text=s)
        us.append(u)
        vs.append(v)
    out = np.empty((len(us), 2), dtype=np.int64)
    out[:, 0] = us
    out[:, 1] = vs
    return out


def read_edge_list(path) -> np.ndarray:
    """Read a (optionally gzip-compressed) text edge list; see :func:`parse_edge_lines`."""
    with _open_text(path) as fh:
        return parse_edge_lines(fh)


def load_graph(path) -> CsrGraph:
    return canonicalize(read_edge_list(path))


def write_edge_list(path, edges, header: Optional[str] = None) -> None:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    opener = gzip.open if os.fspath(path).endswith(".gz") else open
    with opener(path, "wt", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        buf = io.StringIO()
        np.savetxt(buf, edges, fmt="%d", delimiter=" ")
        fh.write(buf.getvalue())
