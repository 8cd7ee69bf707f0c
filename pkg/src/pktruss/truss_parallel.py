"""PKT: level-synchronous parallel truss decomposition.

Level ``l`` handles the edges whose support settles at ``l`` (trussness
``l + 2``). A Scan phase gathers every unprocessed edge with support ``l``
into ``curr``; then sub-levels repeat until ``curr`` is empty:

1. process -- every ``curr`` edge walks the triangles it still closes and
   decrements the other two edges, never below ``l``; an edge whose support
   lands on ``l`` goes into ``next``;
2. retire -- ``curr`` edges are marked processed and leave ``in_curr``;
3. swap -- ``next`` becomes ``curr`` (single owner, between phases).

A triangle with two ``curr`` edges is handled only by the lower edge id, so
the third edge is decremented once. Concurrent decrements that overshoot
below ``l`` are undone with an atomic increment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .atomics import fetch_add, fetch_sub
from .frontier import BUFFER_CAPACITY, LevelFrontier, flush, push
from .graph_core import TrussGraph
from .parallel import WorkerTeam
from .timing import PhaseTimer
from .triangle import support_am4
from .truss_serial import TrussnessResult

EDGE_CHUNK = 4


@dataclass
class SubLevelTrace:
    """``nsl[l]`` sub-levels ran at level ``l``; ``barriers`` counts phase joins."""

    nsl: list = field(default_factory=list)
    barriers: int = 0
    frontier_sizes: list = field(default_factory=list)

    def expected_barriers(self, t_max: int) -> int:
        return t_max + 2 * sum(self.nsl)


# --------------------------------------------------------------------------- kernels


@njit(nogil=True, cache=True)
def _scan_kernel(wid, workers, s, level, processed, curr, curr_tail, in_curr, buffers):
    m = s.shape[0]
    lo = m * wid // workers
    hi = m * (wid + 1) // workers
    buff = buffers[wid]
    fill = 0
    for e in range(lo, hi):
        if s[e] == level and not processed[e]:
            in_curr[e] = True
            fill = push(buff, fill, e, curr, curr_tail)
    flush(buff, fill, curr, curr_tail)


@njit(nogil=True, cache=True)
def _decrement(s, e, level, in_next, buff, fill, nxt, next_tail):
    if s[e] > level:
        before = fetch_sub(s, e, 1)
        if before == level + 1:
            in_next[e] = True
            fill = push(buff, fill, e, nxt, next_tail)
        if before <= level:
            fetch_add(s, e, 1)
    return fill


@njit(nogil=True, cache=True)
def _process_kernel(
    wid, curr, curr_len, offsets, neighbors, eid, el, s, level,
    nxt, next_tail, in_curr, in_next, processed, scratch, buffers, cursor, chunk,
):
    x = scratch[wid]
    buff = buffers[wid]
    fill = 0
    while True:
        start = fetch_add(cursor, 0, chunk)
        if start >= curr_len:
            break
        stop = min(start + chunk, curr_len)
        for i in range(start, stop):
            e1 = np.int64(curr[i])
            u = el[e1, 0]
            v = el[e1, 1]
            for j in range(offsets[u], offsets[u + 1]):
                x[neighbors[j]] = j + 1
            for j in range(offsets[v], offsets[v + 1]):
                mark = x[neighbors[j]]
                if mark == 0:
                    continue
                e2 = np.int64(eid[j])
                e3 = np.int64(eid[mark - 1])
                if processed[e2] or processed[e3]:
                    continue
                c2 = in_curr[e2]
                c3 = in_curr[e3]
                if c2 and c3:
                    continue
                if c2:
                    if e1 < e2:
                        fill = _decrement(s, e3, level, in_next, buff, fill, nxt, next_tail)
                elif c3:
                    if e1 < e3:
                        fill = _decrement(s, e2, level, in_next, buff, fill, nxt, next_tail)
                else:
                    fill = _decrement(s, e2, level, in_next, buff, fill, nxt, next_tail)
                    fill = _decrement(s, e3, level, in_next, buff, fill, nxt, next_tail)
            for j in range(offsets[u], offsets[u + 1]):
                x[neighbors[j]] = 0
    flush(buff, fill, nxt, next_tail)


@njit(nogil=True, cache=True)
def _retire_kernel(wid, workers, curr, curr_len, processed, in_curr):
    lo = curr_len * wid // workers
    hi = curr_len * (wid + 1) // workers
    for i in range(lo, hi):
        e = curr[i]
        processed[e] = True
        in_curr[e] = False


# --------------------------------------------------------------------------- phases


def _team(workers, team):
    return (team, False) if team is not None else (WorkerTeam(workers), True)


def scan(s, level: int, frontier: LevelFrontier, workers: int = 1,
         team: Optional[WorkerTeam] = None, buffers: Optional[np.ndarray] = None) -> LevelFrontier:
    """Collect every unprocessed edge with support ``level`` into ``frontier.curr``.

    Order inside ``curr`` depends on worker interleaving.
    """
    if frontier.curr_len:
        raise ValueError("scan requires an empty curr frontier")
    team, own = _team(workers, team)
    try:
        if buffers is None:
            buffers = np.zeros((team.workers, BUFFER_CAPACITY), dtype=np.uint32)
        team.run(_scan_kernel, team.workers, s, level, frontier.processed,
                 frontier.curr, frontier.curr_tail, frontier.in_curr, buffers)
        frontier.level = level
        return frontier
    finally:
        if own:
            team.close()


def process_sublevel(frontier: LevelFrontier, tg: TrussGraph, s, level: int, workers: int = 1,
                     team: Optional[WorkerTeam] = None, scratch: Optional[np.ndarray] = None,
                     buffers: Optional[np.ndarray] = None) -> LevelFrontier:
    """Peel every edge in ``curr``: decrement triangle partners, fill ``next``, retire ``curr``.

    Leaves ``curr`` in place (all processed, ``in_curr`` cleared); the caller
    swaps frontiers.
    """
    team, own = _team(workers, team)
    try:
        if scratch is None:
            scratch = np.zeros((team.workers, max(tg.n, 1)), dtype=np.uint32)
        if buffers is None:
            buffers = np.zeros((team.workers, BUFFER_CAPACITY), dtype=np.uint32)
        curr_len = frontier.curr_len
        cursor = np.zeros(1, dtype=np.int64)
        team.run(
            _process_kernel, frontier.curr, curr_len, tg.offsets, tg.neighbors, tg.eid, tg.el,
            s, level, frontier.next, frontier.next_tail, frontier.in_curr, frontier.in_next,
            frontier.processed, scratch, buffers, cursor, EDGE_CHUNK,
        )
        team.run(_retire_kernel, team.workers, frontier.curr, curr_len,
                 frontier.processed, frontier.in_curr)
        return frontier
    finally:
        if own:
            team.close()


def pkt(tg: TrussGraph, workers: int = 1, team: Optional[WorkerTeam] = None,
        timer: Optional[PhaseTimer] = None):
    """Trussness of every edge. Returns ``(TrussnessResult, SubLevelTrace)``.

    With a ``timer``, laps are recorded as ``support``, ``scan`` and
    ``processing`` (process + retire + swap).
    """
    team, own = _team(workers, team)
    try:
        trace = SubLevelTrace()
        m = tg.m
        if m == 0:
            return TrussnessResult.from_truss(np.zeros(0, dtype=np.int32)), trace
        barriers0 = team.barriers
        timer = timer if timer is not None else PhaseTimer()
        timer.restart()
        s = support_am4(tg, team=team)
        frontier = LevelFrontier.empty(m)
        scratch = np.zeros((team.workers, max(tg.n, 1)), dtype=np.uint32)
        buffers = np.zeros((team.workers, BUFFER_CAPACITY), dtype=np.uint32)
        timer.lap("support")
        level = 0
        while frontier.todo > 0:
            scan(s, level, frontier, team=team, buffers=buffers)
            timer.lap("scan")
            rounds = 0
            sizes = []
            while frontier.curr_len > 0:
                sizes.append(frontier.curr_len)
                frontier.todo -= frontier.curr_len
                process_sublevel(frontier, tg, s, level, team=team, scratch=scratch, buffers=buffers)
                frontier.swap()
                rounds += 1
            timer.lap("processing")
            trace.nsl.append(rounds)
            trace.frontier_sizes.append(sizes)
            level += 1
        trace.barriers = team.barriers - barriers0
        return TrussnessResult.from_support(s), trace
    finally:
        if own:
            team.close()
