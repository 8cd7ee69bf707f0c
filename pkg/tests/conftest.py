import pytest

from pktruss.graph_core import build_truss_graph

from .graphs import er_graph


@pytest.fixture(scope="session")
def er100():
    g = er_graph(100, 0.15, 2)
    return g, build_truss_graph(g)


def pytest_terminal_summary(terminalreporter):
    from .acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
