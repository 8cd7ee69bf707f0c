"""End-to-end decomposition pipeline, run reports and benchmarking."""
from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import graph_core
from .graph_core import CsrGraph, TrussGraph, build_truss_graph
from .kcore import coreness_order, kcore_parallel
from .parallel import WorkerTeam
from .timing import PhaseTimer
from .triangle import support_am4, triangle_count
from .truss_parallel import pkt
from .truss_serial import TrussnessResult, truss_oracle, truss_wc

ALGORITHMS = ("pkt", "wc", "oracle")
REORDERS = ("kcore", "natural")
DECOMPOSITION_PHASES = ("support", "scan", "processing")
PHASES = ("kcore", "reorder", "support", "scan", "processing")

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "algorithm", "workers", "reorder", "n", "m", "wedge_count", "triangle_count",
        "t_max", "c_max", "timings", "decomposition_seconds", "decomposition_wall_seconds",
        "gweps", "nsl", "nsl_total", "barriers", "memory_bytes", "pinning",
    ],
    "properties": {
        "algorithm": {"enum": list(ALGORITHMS)},
        "workers": {"type": "integer", "minimum": 1},
        "reorder": {"enum": list(REORDERS)},
        "n": {"type": "integer", "minimum": 0},
        "m": {"type": "integer", "minimum": 0},
        "wedge_count": {"type": "integer", "minimum": 0},
        "triangle_count": {"type": "integer", "minimum": 0},
        "t_max": {"type": "integer", "minimum": 0},
        "c_max": {"type": "integer", "minimum": 0},
        "timings": {
            "type": "object",
            "required": list(PHASES),
            "additionalProperties": {"type": "number", "minimum": 0},
        },
        "decomposition_seconds": {"type": "number", "minimum": 0},
        "decomposition_wall_seconds": {"type": "number", "minimum": 0},
        "gweps": {"type": "number", "minimum": 0},
        "nsl": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "nsl_total": {"type": "integer", "minimum": 0},
        "barriers": {"type": "integer", "minimum": 0},
        "memory_bytes": {"type": "integer", "minimum": 0},
        "pinning": {"type": "string"},
    },
}


@dataclass
class DecompositionReport:
    algorithm: str
    workers: int
    reorder: str
    n: int
    m: int
    wedge_count: int
    triangle_count: int
    t_max: int
    c_max: int
    timings: dict
    decomposition_seconds: float
    decomposition_wall_seconds: float
    gweps: float
    nsl: list = field(default_factory=list)
    nsl_total: int = 0
    barriers: int = 0
    memory_bytes: int = 0
    pinning: str = "runtime default (unpinned)"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "DecompositionReport":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "DecompositionReport":
        return cls.from_dict(json.loads(text))


def gweps(wedges: int, seconds: float) -> float:
    """Giga-wedges per second."""
    return wedges / (seconds * 1e9) if seconds > 0 else 0.0


@dataclass
class Decomposition:
    """Result of :func:`run_decomposition`.

    ``edges`` holds the original labels ``(a, b)`` with ``a < b`` of every
    edge id of the working graph, ``truss`` its trussness.
    """

    edges: np.ndarray
    truss: TrussnessResult
    report: DecompositionReport
    graph: CsrGraph
    truss_graph: TrussGraph


def run_decomposition(
    g: CsrGraph,
    algorithm: str = "pkt",
    workers: int = 1,
    reorder: str = "kcore",
    team: Optional[WorkerTeam] = None,
    oracle_max_n: Optional[int] = None,
) -> Decomposition:
    """k-core -> optional coreness reordering -> augmented CSR -> trussness."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if reorder not in REORDERS:
        raise ValueError(f"unknown reorder {reorder!r}; choose from {', '.join(REORDERS)}")
    own = team is None
    if own:
        team = WorkerTeam(workers)
    try:
        timer = PhaseTimer()
        core = kcore_parallel(g, team=team)
        timer.lap("kcore")
        work = graph_core.reorder(g, coreness_order(core)) if reorder == "kcore" else g
        timer.lap("reorder")
        tg = build_truss_graph(work)
        timer.lap("build")

        barriers0 = team.barriers
        nsl: list = []
        dec_start = time.perf_counter()
        timer.restart()
        if algorithm == "pkt":
            result, trace = pkt(tg, team=team, timer=timer)
            nsl = trace.nsl
        elif algorithm == "wc":
            s0 = support_am4(tg, workers=1)
            timer.lap("support")
            result = truss_wc(tg, s0)
            timer.lap("processing")
        else:
            kw = {} if oracle_max_n is None else {"max_n": oracle_max_n}
            result = truss_oracle(work, **kw)
            timer.lap("processing")
        dec_wall = time.perf_counter() - dec_start
        barriers = team.barriers - barriers0

        triangles = triangle_count(tg, team=team)
        timings = {p: float(timer.totals.get(p, 0.0)) for p in PHASES}
        timings["build"] = float(timer.totals.get("build", 0.0))
        dec_seconds = sum(timings[p] for p in DECOMPOSITION_PHASES)
        st = graph_core.stats(work)
        report = DecompositionReport(
            algorithm=algorithm,
            workers=team.workers,
            reorder=reorder,
            n=work.n,
            m=work.m,
            wedge_count=st.wedge_count,
            triangle_count=triangles,
            t_max=result.t_max,
            c_max=core.c_max,
            timings=timings,
            decomposition_seconds=dec_seconds,
            decomposition_wall_seconds=dec_wall,
            gweps=gweps(st.wedge_count, dec_seconds),
            nsl=list(nsl),
            nsl_total=int(sum(nsl)),
            barriers=barriers,
            memory_bytes=int(sum(tg.core_array_bytes().values())),
        )
        el = tg.el.astype(np.int64)
        lab = work.labels[el]
        edges = np.stack([lab.min(axis=1), lab.max(axis=1)], axis=1) if el.size else el.reshape(0, 2)
        return Decomposition(edges, result, report, work, tg)
    finally:
        if own:
            team.close()


# --------------------------------------------------------------------------- formatting


def format_tsv(dec: Decomposition) -> str:
    lines = [
        f"{e}\t{a}\t{b}\t{t}"
        for e, ((a, b), t) in enumerate(zip(dec.edges.tolist(), dec.truss.truss.tolist()))
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def format_histogram(truss: TrussnessResult) -> str:
    return "".join(f"{k}\t{c}\n" for k, c in sorted(truss.kclass_sizes.items()))


def format_json(dec: Decomposition) -> str:
    doc = {
        "report": dec.report.to_dict(),
        "edges": [
            {"edge_id": e, "u": a, "v": b, "trussness": t}
            for e, ((a, b), t) in enumerate(zip(dec.edges.tolist(), dec.truss.truss.tolist()))
        ],
    }
    return json.dumps(doc, indent=1)


# --------------------------------------------------------------------------- bench


def bench(g: CsrGraph, workers_list, repeats: int = 3, reorder: str = "kcore") -> dict:
    """Repeated PKT runs per worker count; medians, speedups vs. the first count, GWeps."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    workers_list = list(workers_list)
    if not workers_list:
        raise ValueError("need at least one worker count")
    rows = []
    for w in workers_list:
        samples = []
        with WorkerTeam(w) as team:
            for _ in range(repeats):
                rep = run_decomposition(g, "pkt", reorder=reorder, team=team).report
                samples.append({
                    **{p: rep.timings[p] for p in PHASES},
                    "decomposition": rep.decomposition_seconds,
                })
        median = {k: statistics.median(s[k] for s in samples) for k in samples[0]}
        rows.append({
            "workers": w,
            "samples": samples,
            "median": median,
            "wedge_count": rep.wedge_count,
            "gweps": gweps(rep.wedge_count, median["decomposition"]),
            "t_max": rep.t_max,
        })
    base = rows[0]["median"]
    for row in rows:
        row["speedup"] = {
            k: (base[k] / v if v > 0 else None) for k, v in row["median"].items()
        }
    return {"n": g.n, "m": g.m, "repeats": repeats, "reorder": reorder, "runs": rows}


def format_bench_table(result: dict) -> str:
    cols = ("support", "scan", "processing", "decomposition")
    head = "workers " + " ".join(f"{c:>12}" for c in cols) + f" {'speedup':>8} {'proc.spd':>8} {'GWeps':>8}"
    out = [head, "-" * len(head)]
    for row in result["runs"]:
        med = row["median"]
        spd = row["speedup"]["decomposition"] or 0.0
        pspd = row["speedup"]["processing"] or 0.0
        out.append(
            f"{row['workers']:>7} "
            + " ".join(f"{med[c]:>12.4f}" for c in cols)
            + f" {spd:>8.2f} {pspd:>8.2f} {row['gweps']:>8.4f}"
        )
    return "\n".join(out)
