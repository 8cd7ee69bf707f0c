import json

import numpy as np
import pytest

from pktruss.cli import main
from pktruss.graph_core import write_edge_list
from pktruss.validate import SuiteGraph, default_engines, random_suite, validate

from .graphs import complete, from_pairs, wheel_pair


def write(tmp_path, name, edges):
    path = tmp_path / name
    write_edge_list(str(path), np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return str(path)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert main(["gen", "rmat", "--scale", "6", "--seed", "4", "-o", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["gen", "er", "--n", "30", "--p", "0.2", "-o", str(a)]) == 0


def test_gen_rejects_bad_probabilities(capsys):
    rc = main(["gen", "rmat", "--scale", "4", "--a", "0.9"])
    assert rc == 2
    assert "pktruss: error" in capsys.readouterr().err


@pytest.mark.parametrize("algorithm", ["pkt", "wc", "oracle"])
def test_decompose_triangle(tmp_path, capsys, algorithm):
    path = write(tmp_path, "t.txt", [(10, 20), (20, 30), (30, 10)])
    assert main(["decompose", "-i", path, "--algorithm", algorithm, "--threads", "2"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 3 and {r[3] for r in rows} == {"3"}
    assert sorted((int(r[1]), int(r[2])) for r in rows) == [(10, 20), (10, 30), (20, 30)]


def test_decompose_pkt_and_wc_agree(tmp_path):
    main(["gen", "er", "--n", "120", "--p", "0.15", "--seed", "2", "-o", str(tmp_path / "g.txt")])
    outs = []
    for alg in ("pkt", "wc"):
        out = tmp_path / f"{alg}.tsv"
        assert main(["decompose", "-i", str(tmp_path / "g.txt"), "--algorithm", alg, "-o", str(out)]) == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]


def test_decompose_json_and_report(tmp_path, capsys):
    path = write(tmp_path, "k4.txt", complete(4).edges())
    rep = tmp_path / "rep.json"
    assert main(["decompose", "-i", path, "--format", "json", "--report", str(rep)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {e["trussness"] for e in doc["edges"]} == {4}
    assert json.loads(rep.read_text())["t_max"] == 4
    assert main(["decompose", "-i", path, "--format", "hist"]) == 0
    assert capsys.readouterr().out == "4\t6\n"


def test_decompose_reports_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 x\n")
    assert main(["decompose", "-i", str(bad)]) == 2
    assert "record 2" in capsys.readouterr().err
    assert main(["decompose", "-i", str(tmp_path / "missing.txt")]) == 2


def test_oracle_size_guard(tmp_path, capsys):
    path = write(tmp_path, "p.txt", [(i, i + 1) for i in range(20)])
    assert main(["decompose", "-i", path, "--algorithm", "oracle", "--max-n", "5"]) == 2
    assert "oracle" in capsys.readouterr().err


def test_ktruss(tmp_path, capsys, caplog):
    path = write(tmp_path, "two.txt", [(0, 1), (1, 2), (0, 2), (5, 6), (6, 7), (5, 7)])
    assert main(["ktruss", "-i", path, "--k", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("# component") == 2

    g, _ = wheel_pair()
    path = write(tmp_path, "w.txt", g.edges())
    assert main(["ktruss", "-i", path, "--k", "3"]) == 0
    assert capsys.readouterr().out.count("# component") == 2

    path = write(tmp_path, "k5.txt", complete(5).edges())
    assert main(["ktruss", "-i", path, "--k", "6"]) == 0
    assert capsys.readouterr().out == ""
    assert "exceeds t_max=5" in caplog.text
    assert main(["ktruss", "-i", path, "--k", "1"]) == 2


def test_bench(tmp_path, capsys):
    path = write(tmp_path, "k6.txt", complete(6).edges())
    out = tmp_path / "bench.json"
    assert main(["bench", "-i", path, "--threads", "1,2", "--repeats", "3", "-o", str(out)]) == 0
    assert "GWeps" in capsys.readouterr().out
    res = json.loads(out.read_text())
    assert [len(r["samples"]) for r in res["runs"]] == [3, 3]


def test_stats(tmp_path, capsys):
    path = write(tmp_path, "k4.txt", complete(4).edges())
    assert main(["stats", "-i", path]) == 0
    st = json.loads(capsys.readouterr().out)
    assert (st["n"], st["m"], st["wedge_count"]) == (4, 6, 12)


def test_validate_command(capsys):
    assert main(["validate", "--seeds", "6", "--max-n", "40", "--threads", "1,3"]) == 0
    assert "all engines agree: 6 graphs" in capsys.readouterr().out


def test_validate_pinpoints_a_faulty_engine():
    engines = default_engines((2,))

    def faulty(g, tg):
        t = engines["pkt@2"](g, tg).copy()
        if t.size > 3:
            t[3] += 1
        return t

    engines["faulty"] = faulty
    summary = validate(random_suite(5, 40, seed=1), engines)
    assert not summary.ok
    assert summary.divergence.engine == "faulty" and summary.divergence.edge_id == 3
    assert "first differing edge id 3" in summary.describe()


def test_validate_handles_edgeless_graph():
    summary = validate([SuiteGraph("empty", from_pairs(0, [])), SuiteGraph("iso", from_pairs(3, []))])
    assert summary.ok and summary.graphs == 2
