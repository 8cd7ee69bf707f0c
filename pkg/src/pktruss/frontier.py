"""Edge/vertex frontiers shared by the level-synchronous engines.

Workers never append to a shared frontier one element at a time. Each stages
ids in a private buffer and, when it fills, reserves a contiguous range of the
target with a single atomic add on the tail, then copies. That cuts the
atomic traffic from one per element to one per ``capacity`` elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .atomics import fetch_add

BUFFER_CAPACITY = 2048


@njit(nogil=True, cache=True)
def flush(buff, fill, target, tail):
    if fill > 0:
        start = fetch_add(tail, 0, fill)
        for i in range(fill):
            target[start + i] = buff[i]
    return 0


@njit(nogil=True, cache=True)
def push(buff, fill, item, target, tail):
    """Stage ``item``; returns the new fill level of ``buff``."""
    buff[fill] = item
    fill += 1
    if fill == buff.shape[0]:
        fill = flush(buff, fill, target, tail)
    return fill


@njit(nogil=True, cache=True)
def _push_all(buff, fill, items, target, tail):
    for i in range(items.shape[0]):
        fill = push(buff, fill, items[i], target, tail)
    return fill


class BufferedAppender:
    """Per-worker staging buffers in front of one shared array.

    ``extend(wid, items)`` may be called concurrently from different workers
    (each with its own ``wid``); ``flush_all`` must run after they have
    joined. ``len(self)`` is the number of elements committed so far.
    """

    def __init__(self, target: np.ndarray, workers: int, capacity: int = BUFFER_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.target = target
        self.tail = np.zeros(1, dtype=np.int64)
        self.buffers = np.zeros((workers, capacity), dtype=target.dtype)
        self.fills = np.zeros(workers, dtype=np.int64)

    def extend(self, wid: int, items) -> None:
        items = np.asarray(items, dtype=self.target.dtype)
        self.fills[wid] = _push_all(
            self.buffers[wid], self.fills[wid], items, self.target, self.tail
        )

    def flush_all(self) -> None:
        for wid in range(self.buffers.shape[0]):
            self.fills[wid] = flush(self.buffers[wid], self.fills[wid], self.target, self.tail)

    def __len__(self) -> int:
        return int(self.tail[0])

    def committed(self) -> np.ndarray:
        return self.target[: len(self)]


@dataclass
class LevelFrontier:
    """Frontier state for level-synchronous edge peeling.

    ``curr``/``next`` are fixed-capacity id arrays whose live prefixes are
    given by ``curr_tail[0]``/``next_tail[0]``; the tails are the atomic
    reservation counters the buffered appends bump.
    """

    curr: np.ndarray
    next: np.ndarray
    in_curr: np.ndarray
    in_next: np.ndarray
    processed: np.ndarray
    curr_tail: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.int64))
    next_tail: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.int64))
    todo: int = 0
    level: int = 0

    @classmethod
    def empty(cls, m: int) -> "LevelFrontier":
        return cls(
            curr=np.zeros(m, dtype=np.uint32),
            next=np.zeros(m, dtype=np.uint32),
            in_curr=np.zeros(m, dtype=np.bool_),
            in_next=np.zeros(m, dtype=np.bool_),
            processed=np.zeros(m, dtype=np.bool_),
            todo=m,
        )

    @property
    def curr_len(self) -> int:
        return int(self.curr_tail[0])

    @property
    def next_len(self) -> int:
        return int(self.next_tail[0])

    def curr_edges(self) -> np.ndarray:
        return self.curr[: self.curr_len]

    def next_edges(self) -> np.ndarray:
        return self.next[: self.next_len]

    def swap(self) -> None:
        """Promote ``next`` to ``curr``. Single owner, between phases.

        Requires ``in_curr`` to be all-false already (the retire phase clears
        it), so after the swap ``in_next`` starts out empty.
        """
        self.curr, self.next = self.next, self.curr
        self.in_curr, self.in_next = self.in_next, self.in_curr
        self.curr_tail, self.next_tail = self.next_tail, self.curr_tail
        self.next_tail[0] = 0

    def check(self) -> None:
        """Assert the membership invariants; O(m), for tests and debugging."""
        curr = self.curr_edges()
        nxt = self.next_edges()
        in_curr = np.zeros_like(self.in_curr)
        in_curr[curr] = True
        in_next = np.zeros_like(self.in_next)
        in_next[nxt] = True
        assert np.unique(curr).size == curr.size, "duplicate edge in curr"
        assert np.unique(nxt).size == nxt.size, "duplicate edge in next"
        assert np.array_equal(in_curr, self.in_curr), "in_curr out of sync with curr"
        assert np.array_equal(in_next, self.in_next), "in_next out of sync with next"
        assert not np.any(in_curr & in_next), "curr and next overlap"
        assert not np.any(self.processed & (in_curr | in_next)), "processed edge in a frontier"
