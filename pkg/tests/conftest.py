import pytest
from hypothesis import settings

from polycoalg import PAutomaton, QAutomaton, completion_K, make_signature

# single-core CI boxes make per-example timing noisy
settings.register_profile("default", deadline=None)
settings.load_profile("default")

SIG_FG = make_signature({"1": (["f"], ["f1"]), "2": (["g"], ["g1", "g2"])})
DIRS = SIG_FG.dir_names

SIG_FG_TEXT = """\
sig
sort 1
labels f
dirs f1
sort 2
labels g
dirs g1 g2
"""


def sink_row():
    return ("0", None, {d: "bot" for d in DIRS})


def make_a_loop():
    return PAutomaton.from_table(SIG_FG, {"q": ("1", "f", {"f1": "q"})})


def make_a_2loop():
    return PAutomaton.from_table(SIG_FG, {"q1": ("1", "f", {"f1": "q1"}),
                                          "q2": ("1", "f", {"f1": "q2"})})


def make_a_fg():
    return PAutomaton.from_table(SIG_FG, {"p": ("1", "f", {"f1": "r"}),
                                          "r": ("2", "g", {"g1": "p", "g2": "p"})})


def make_b_bad():
    return QAutomaton.from_table(SIG_FG, {"bot": sink_row(),
                                          "x": ("1", "f", {d: "bot" for d in DIRS})})


def make_b3():
    table = {"bot": sink_row(),
             "x": ("1", "f", {d: "bot" for d in DIRS}),
             "y": ("1", "f", {"f1": "x", "g1": "bot", "g2": "bot"})}
    return QAutomaton.from_table(SIG_FG, table)


def make_sink_only():
    return QAutomaton.from_table(SIG_FG, {"bot": sink_row()})


@pytest.fixture
def sig():
    return SIG_FG


@pytest.fixture
def a_loop():
    return make_a_loop()


@pytest.fixture
def a_2loop():
    return make_a_2loop()


@pytest.fixture
def a_fg():
    return make_a_fg()


@pytest.fixture
def k_loop():
    return completion_K(make_a_loop())


@pytest.fixture
def b_bad():
    return make_b_bad()


@pytest.fixture
def b3():
    return make_b3()


@pytest.fixture
def sink_only():
    return make_sink_only()


@pytest.fixture
def empty_p():
    return PAutomaton(SIG_FG, (), {}, {}, {})


# -- acceptance report ------------------------------------------------------------

ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Record one acceptance verdict; printed in the terminal summary."""
    def _record(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
