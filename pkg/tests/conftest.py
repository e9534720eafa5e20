import json

import pytest

from shiftedmanin.corpus import data_path, load_algebra, load_module
from shiftedmanin.loopyang import sl2


@pytest.fixture(scope="session")
def e1_file():
    return load_algebra(data_path("e1_double_pairs.json"))


@pytest.fixture(scope="session")
def e1_triple(e1_file):
    return e1_file.triple()


@pytest.fixture(scope="session")
def e1_other(e1_file):
    return e1_file.alternate_triples()[0]


@pytest.fixture(scope="session")
def g_sl2():
    return sl2()


@pytest.fixture(scope="session")
def ev2(g_sl2):
    return load_module(data_path("ev2.json"), g_sl2)


def read_data(name):
    return json.loads(data_path(name).read_text("utf-8"))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES):
        terminalreporter.write_line(line)
