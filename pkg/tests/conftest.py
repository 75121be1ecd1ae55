import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from raagkit.graph import Graph, complete_graph, cycle_graph, path_graph

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def path3():
    return path_graph("abc")


@pytest.fixture
def c4():
    return cycle_graph("abcd")


@pytest.fixture
def f2():
    return Graph(["x", "y"])


@pytest.fixture
def edge():
    return Graph(["a", "b"], [["a", "b"]])


@pytest.fixture
def z3():
    return complete_graph("abc")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
