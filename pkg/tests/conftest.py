import pytest

from vulngraph import build_dual, build_graph

WORKED_RECORDS = [
    ("a", ["1", "2", "3"]),
    ("b", ["1", "2", "4", "7"]),
    ("c", ["4", "7", "8"]),
    ("d", ["1", "3", "8"]),
    ("e", ["3"]),
    ("f", ["1", "4", "6", "7"]),
    ("g", ["5", "6", "8"]),
]

# vulnerability -> hosts, as listed in the worked example
WORKED_ADJACENCY = {
    "1": set("abdf"), "2": set("ab"), "3": set("ade"), "4": set("bcf"),
    "5": set("g"), "6": set("fg"), "7": set("bcf"), "8": set("cdg"),
}

WORKED_DUAL_EDGES = {
    ("1", "2"), ("1", "3"), ("1", "4"), ("1", "6"), ("1", "7"), ("1", "8"),
    ("2", "3"), ("2", "4"), ("2", "7"), ("3", "8"),
    ("4", "6"), ("4", "7"), ("4", "8"), ("5", "6"), ("5", "8"),
    ("6", "7"), ("6", "8"), ("7", "8"),
}


@pytest.fixture
def worked_graph():
    return build_graph(WORKED_RECORDS)


@pytest.fixture
def worked_dual(worked_graph):
    return build_dual(worked_graph)


_acceptance_lines = []


@pytest.fixture
def acceptance():
    """Record a one-line verdict per acceptance criterion for the terminal summary."""

    def record(name, passed, detail=""):
        _acceptance_lines.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _acceptance_lines:
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}" + (f" - {detail}" if detail else ""))
