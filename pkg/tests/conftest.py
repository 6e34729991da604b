import sys
from pathlib import Path

import numpy as np
import pytest

from rigidglue.generators import complete_graph, convex_quadrilateral_tensegrity, cycle_graph
from rigidglue.model import Configuration, Framework, TensegrityGraph

FIXTURES = Path(__file__).parent / "fixtures"

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
SQUARE_MATRIX = np.array([[1, -1, 1, -1], [-1, 1, -1, 1], [1, -1, 1, -1], [-1, 1, -1, 1]], dtype=float)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def square_k4() -> Framework:
    return Framework(complete_graph(4), Configuration(UNIT_SQUARE))


@pytest.fixture
def square_c4() -> Framework:
    return Framework(cycle_graph(4), Configuration(UNIT_SQUARE))


@pytest.fixture
def square_tensegrity():
    return convex_quadrilateral_tensegrity(UNIT_SQUARE)


@pytest.fixture
def right_triangle() -> Framework:
    return Framework(complete_graph(3), Configuration([(0, 0), (1, 0), (0, 1)]))


def graph(n, pairs) -> TensegrityGraph:
    return TensegrityGraph.bars(n, pairs)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
