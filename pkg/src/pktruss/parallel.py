"""Fork-join worker team.

Kernels are numba functions compiled with ``nogil=True``; running them from
Python threads gives real shared-memory parallelism. Each :meth:`WorkerTeam.run`
is one parallel phase and its join is one barrier.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "PKT_THREADS"


def default_workers() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{ENV_THREADS} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


class WorkerTeam:
    """A fixed set of ``workers`` threads executing phases in lockstep."""

    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.barriers = 0
        self._pool = ThreadPoolExecutor(max_workers=workers - 1) if workers > 1 else None

    def run(self, kernel, *args):
        """Call ``kernel(wid, *args)`` for every worker id and wait for all of them."""
        if self._pool is None:
            kernel(0, *args)
        else:
            futures = [self._pool.submit(kernel, wid, *args) for wid in range(1, self.workers)]
            kernel(0, *args)
            for f in futures:
                f.result()
        self.barriers += 1

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
