import os
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mdag import MDag  # noqa: E402
from mdag.textformat import parse_document  # noqa: E402

DATA = Path(__file__).parent / "data"


def load(name):
    return parse_document((DATA / name).read_text())


@pytest.fixture
def data():
    return load


def random_mdag(rng, n, p_edge=0.35, n_faces=None, names=None):
    names = names or [f"v{i}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p_edge]
    k = rng.randint(0, 3) if n_faces is None else n_faces
    faces = []
    for _ in range(k):
        size = rng.randint(2, max(2, min(n, 4)))
        if n >= 2:
            faces.append(rng.sample(names, size))
    return MDag(names, edges, faces)


@pytest.fixture
def rng():
    return random.Random(20261014)


# -- acceptance summary -------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        prev = _acceptance.get(name, "PASS")
        _acceptance[name] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
