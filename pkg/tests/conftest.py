import numpy as np
import pytest

from multicover import lincode
from multicover.ffield import gf
from multicover.mctuple import MatrixTuple, ShapeProfile

# The 3x3 binary example code with generators A, B, C.
EX_A = [[1, 1, 1], [1, 0, 0], [1, 0, 0]]
EX_B = [[0, 1, 0], [1, 1, 1], [0, 1, 0]]
EX_C = [[0, 0, 1], [0, 0, 1], [1, 1, 1]]


def example_code():
    shape = ShapeProfile.uniform(3, 3, 1)
    F = gf(2)
    rows = [MatrixTuple(shape, F, (np.array(M),)) for M in (EX_A, EX_B, EX_C)]
    return lincode.code_make(shape, F, rows)


@pytest.fixture
def ex_code():
    return example_code()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call" and outcome == "passed":
                continue
            name = nodeid.split("::")[-1]
            num = int(name.split("_")[2])
            lines[num] = (name, "PASS" if outcome == "passed" else "FAIL")
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            name, verdict = lines[num]
            terminalreporter.write_line(f"criterion {num:2d}: {verdict}  ({name})")
