"""Cross-engine agreement harness over seeded random graph suites."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .generators import erdos_renyi, rmat
from .graph_core import CsrGraph, build_truss_graph, canonicalize, from_pairs
from .triangle import support_am4
from .truss_parallel import pkt
from .truss_serial import truss_oracle, truss_wc

DEFAULT_WORKERS = (1, 2, 4, 8)


@dataclass
class SuiteGraph:
    name: str
    graph: CsrGraph


def random_suite(count: int, max_n: int = 256, seed: int = 0) -> Iterator[SuiteGraph]:
    """Mixed ER / RMAT graphs, reproducible from ``seed``.

    ER: n uniform in [4, max_n], p uniform in [0.02, 0.5]. RMAT: scale in
    [4, 8] capped so that ``2**scale <= max_n``, edge factor in [2, 16].
    """
    rng = np.random.default_rng(seed)
    max_scale = min(8, int(np.log2(max(max_n, 16))))
    for i in range(count):
        gseed = int(rng.integers(0, 2**31))
        if i % 3 == 2 and max_scale >= 4:
            scale = int(rng.integers(4, max_scale + 1))
            ef = int(rng.integers(2, 17))
            raw = rmat(scale, ef, seed=gseed)
            name = f"rmat(scale={scale}, ef={ef}, seed={gseed})"
        else:
            n = int(rng.integers(4, max(max_n, 4) + 1))
            p = float(rng.uniform(0.02, 0.5))
            raw = erdos_renyi(n, p, seed=gseed)
            name = f"er(n={n}, p={p:.4f}, seed={gseed})"
        g = canonicalize(raw) if raw.size else from_pairs(0, [])
        yield SuiteGraph(name, g)


def _pkt_engine(workers: int) -> Callable:
    def run(g, tg):
        return pkt(tg, workers)[0].truss

    return run


def default_engines(workers=DEFAULT_WORKERS) -> dict:
    engines = {"wc": lambda g, tg: truss_wc(tg, support_am4(tg)).truss}
    for w in workers:
        engines[f"pkt@{w}"] = _pkt_engine(w)
    return engines


@dataclass
class Divergence:
    graph_name: str
    engine: str
    edge_id: Optional[int]
    expected: Optional[int]
    got: Optional[int]
    edges: list
    reference: list
    result: list

    def describe(self) -> str:
        lines = [
            f"divergence on {self.graph_name}: engine {self.engine}",
            f"  first differing edge id {self.edge_id}: expected trussness {self.expected}, got {self.got}",
            f"  edges ({len(self.edges)}): {self.edges}",
            f"  oracle:  {self.reference}",
            f"  {self.engine}: {self.result}",
        ]
        return "\n".join(lines)


@dataclass
class ValidationSummary:
    graphs: int = 0
    comparisons: int = 0
    divergence: Optional[Divergence] = None
    names: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.divergence is None

    def describe(self) -> str:
        if self.ok:
            return f"all engines agree: {self.graphs} graphs, {self.comparisons} comparisons"
        return self.divergence.describe()


def validate(suite: Iterable[SuiteGraph], engines: Optional[dict] = None) -> ValidationSummary:
    """Compare every engine with the brute-force oracle; stop at the first mismatch."""
    engines = default_engines() if engines is None else engines
    summary = ValidationSummary()
    for item in suite:
        g = item.graph
        tg = build_truss_graph(g)
        ref = truss_oracle(g).truss
        summary.graphs += 1
        summary.names.append(item.name)
        for name, engine in engines.items():
            got = np.asarray(engine(g, tg))
            summary.comparisons += 1
            if got.shape != ref.shape or not np.array_equal(got, ref):
                if got.shape == ref.shape:
                    bad = int(np.flatnonzero(got != ref)[0])
                    exp, val = int(ref[bad]), int(got[bad])
                else:
                    bad, exp, val = None, None, None
                summary.divergence = Divergence(
                    item.name, name, bad, exp, val,
                    g.edges().tolist(), ref.tolist(), got.tolist(),
                )
                return summary
    return summary
