from pathlib import Path

import numpy as np
import pytest

from decdarcy import build_complex, dual_measures
from decdarcy.meshio import generate_structured

DATA = Path(__file__).parent / "data"

SQ3 = np.sqrt(3.0)


def square_mesh(k=2, perturb=0.0, seed=0):
    return build_complex(*generate_structured([0, 0], [1, 1], [k, k], perturb, seed))


def equilateral_pair():
    """Two unit equilateral triangles sharing the edge from (0,0) to (1,0)."""
    verts = [[0, 0], [1, 0], [0.5, SQ3 / 2], [0.5, -SQ3 / 2]]
    return build_complex(verts, [[0, 1, 2], [0, 3, 1]])


def fixture_files(stem):
    return DATA / f"{stem}.node", DATA / f"{stem}.ele"


@pytest.fixture
def square2():
    cx = square_mesh(2)
    return cx, dual_measures(cx)


@pytest.fixture
def tri():
    return build_complex([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
