"""Contiguous phase timing: consecutive laps tile the measured interval."""
from __future__ import annotations

import time
from collections import defaultdict


class PhaseTimer:
    def __init__(self):
        self.totals = defaultdict(float)
        self._mark = time.perf_counter()

    def restart(self) -> None:
        self._mark = time.perf_counter()

    def lap(self, phase: str) -> float:
        now = time.perf_counter()
        dt = now - self._mark
        self.totals[phase] += dt
        self._mark = now
        return dt

    def as_dict(self) -> dict:
        return dict(self.totals)
