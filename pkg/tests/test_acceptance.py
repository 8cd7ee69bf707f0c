"""Acceptance criteria, one test per criterion.

Each test records a single PASS / FAIL / WARN / SKIP line, printed in the
"acceptance criteria" section of the pytest summary.
"""
import os
import warnings
from pathlib import Path

import numpy as np
import pytest

from pktruss.graph_core import build_truss_graph, load_graph, reorder, stats
from pktruss.kcore import coreness_order, kcore_parallel, kcore_serial
from pktruss.report import run_decomposition
from pktruss.triangle import support_am4, support_ros, triangle_count, triangle_oracle
from pktruss.truss_parallel import pkt
from pktruss.truss_serial import truss_oracle, truss_wc
from pktruss.validate import random_suite

from .acceptance_log import record
from .graphs import complete, cycle, rmat_graph, star

WORKERS = (1, 2, 4, 8)
SUITE_SIZE = 200
DATASET_ENV = "PKT_DATASET_DIR"
SCALING_ENV = "PKT_SCALING_CORES"


def _check(number, ok, text):
    record(number, "PASS" if ok else "FAIL", text)
    assert ok, text


@pytest.fixture(scope="module")
def suite():
    """Every suite graph with its oracle, WC and per-worker PKT outputs."""
    rows = []
    for item in random_suite(SUITE_SIZE, max_n=256, seed=0):
        tg = build_truss_graph(item.graph)
        runs = {w: pkt(tg, w) for w in WORKERS}
        rows.append((item, tg, runs))
    return rows


def test_c1_oracle_equivalence(suite):
    bad = []
    for item, tg, runs in suite:
        ref = truss_oracle(item.graph).truss
        outs = {"wc": truss_wc(tg, support_am4(tg)).truss}
        outs.update({f"pkt@{w}": r[0].truss for w, r in runs.items()})
        bad += [f"{item.name}:{k}" for k, t in outs.items() if not np.array_equal(t, ref)]
    _check(1, not bad and len(suite) >= 200,
           f"{len(suite)} graphs, pkt@{{1,2,4,8}} / wc / oracle identical; mismatches={bad[:3]}")


def test_c2_support_correctness(suite):
    bad = []
    for item, tg, _ in suite:
        count, ref = triangle_oracle(item.graph)
        am4, ros = support_am4(tg, 4), support_ros(tg, 4)
        if not (np.array_equal(am4, ref) and np.array_equal(ros, ref)
                and int(am4.sum()) == 3 * count == 3 * triangle_count(tg, 4)):
            bad.append(item.name)
    _check(2, not bad, f"am4 = ros = oracle and sum(s) = 3|T| on {len(suite)} graphs; mismatches={bad[:3]}")


def test_c3_closed_forms():
    cases = [(f"K{n}", complete(n), n) for n in range(3, 9)]
    cases += [(f"C{n}", cycle(n), 2) for n in (4, 5, 9, 30)]
    cases += [(f"star{k}", star(k), 2) for k in (1, 3, 12)]
    bad = []
    for name, g, want in cases:
        tg = build_truss_graph(g)
        outs = [pkt(tg, w)[0].truss for w in WORKERS]
        outs += [truss_wc(tg, support_am4(tg)).truss, truss_oracle(g).truss]
        if not all(np.all(t == want) and t.size == g.m for t in outs):
            bad.append(name)
    _check(3, not bad, f"K3..K8 -> n, cycles -> 2, stars -> 2 ({len(cases)} graphs); failures={bad}")


def test_c4_determinism(suite):
    bad = []
    for item, _, runs in suite:
        ref, tref = runs[1]
        for w in WORKERS[1:]:
            res, trace = runs[w]
            if not (np.array_equal(res.truss, ref.truss) and trace.nsl == tref.nsl):
                bad.append(f"{item.name}@{w}")
    _check(4, not bad, f"trussness and nsl identical across workers {WORKERS}; diffs={bad[:3]}")


def test_c5_ordering_work_reduction():
    g = rmat_graph(14, 16, seed=0)
    ordered = reorder(g, coreness_order(kcore_parallel(g, 2)))
    natural_work = stats(g).sum_dplus_sq
    ordered_work = stats(ordered).sum_dplus_sq
    t_nat = triangle_count(build_truss_graph(g), 2)
    t_ord = triangle_count(build_truss_graph(ordered), 2)
    _check(5, ordered_work < natural_work and t_nat == t_ord,
           f"RMAT(14,16) sum d+^2 coreness={ordered_work} < natural={natural_work}; "
           f"triangles {t_ord} == {t_nat}")


@pytest.mark.slow
def test_c6_parallel_scaling():
    cores = int(os.environ.get(SCALING_ENV, os.cpu_count() or 1))
    g = rmat_graph(18, 16, seed=0)
    proc = {}
    for w in (1, 4):
        proc[w] = run_decomposition(g, "pkt", workers=w).report.timings["processing"]
    speedup = proc[1] / proc[4]
    text = (f"RMAT(18,16) processing 1 worker {proc[1]:.2f}s, 4 workers {proc[4]:.2f}s, "
            f"speedup {speedup:.2f}x (need >= 1.5x) on {cores} core(s)")
    if cores < 4:
        status = "PASS" if speedup >= 1.5 else "WARN"
        record(6, status, text + "; fewer than 4 cores, soft threshold not enforced")
        if speedup < 1.5:
            warnings.warn(f"parallel scaling below threshold on constrained hardware: {text}")
        return
    _check(6, speedup >= 1.5, text)


def test_c7_barrier_accounting(suite):
    bad = []
    for item, _, runs in suite[:20]:
        for w, (res, trace) in runs.items():
            if trace.barriers != res.t_max + 2 * sum(trace.nsl):
                bad.append(f"{item.name}@{w}: {trace.barriers}")
    _check(7, not bad, f"barriers == t_max + 2*sum(nsl) on 20 graphs x {len(WORKERS)} worker counts; bad={bad[:3]}")


def test_c8_memory_accounting(suite):
    bad = []
    for item, tg, _ in suite[:3]:
        got = sum(tg.core_array_bytes().values())
        if got != 28 * tg.m + 8 * tg.n:
            bad.append(f"{item.name}: {got}")
    _check(8, not bad, f"six core arrays == 28m + 8n bytes on 3 graphs; bad={bad}")


DATASETS = {
    "as-skitter": {"t_max": 68, "c_max": 111},
    "soc-pokec": {"t_max": 29},
}


def _find_dataset(root, name):
    for path in sorted(Path(root).glob(f"*{name}*")):
        if path.is_file():
            return path
    return None


@pytest.mark.dataset
def test_c9_datasets():
    root = os.environ.get(DATASET_ENV)
    found = {n: _find_dataset(root, n) for n in DATASETS} if root else {}
    found = {n: p for n, p in found.items() if p is not None}
    if not found:
        record(9, "SKIP", f"no datasets found (set {DATASET_ENV} to a directory holding "
                          "as-skitter / soc-pokec edge lists)")
        pytest.skip("datasets absent")
    notes, ok = [], True
    for name, path in found.items():
        g = load_graph(str(path))
        rep = run_decomposition(g, "pkt", workers=os.cpu_count() or 1).report
        got = {"t_max": rep.t_max, "c_max": rep.c_max}
        for key, want in DATASETS[name].items():
            ok &= got[key] == want
            notes.append(f"{name} {key}={got[key]} (expected {want})")
    missing = sorted(set(DATASETS) - set(found))
    if missing:
        notes.append(f"absent: {', '.join(missing)}")
    _check(9, ok, "; ".join(notes))
