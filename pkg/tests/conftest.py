from __future__ import annotations

from pathlib import Path as FsPath

import pytest
from hypothesis import settings

from leavitt.generate import exit_pool, no_exit_pool
from leavitt.graph import Graph, parse_graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GRAPH_DIR = FsPath(__file__).resolve().parent.parent / "graphs"


def load(name: str) -> Graph:
    return parse_graph((GRAPH_DIR / f"{name}.json").read_text())


NAMED = {
    "loop": Graph(["v"], [("c", "v", "v")]),
    "a2": Graph(["v", "w"], [("e", "v", "w")]),
    "rose2": Graph(["v"], [("e", "v", "v"), ("f", "v", "v")]),
    "two_cycle": Graph(["v", "w"], [("a", "v", "w"), ("b", "w", "v")]),
    "loop_tail": Graph(["u", "v"], [("t", "u", "v"), ("c", "v", "v")]),
    "tailed_two_cycle": Graph(["u", "v", "w"], [("a", "v", "w"), ("b", "w", "v"), ("t", "u", "v")]),
    # a 2-cycle, a loop and a sink, with parallel edges feeding in
    "mixed": Graph(
        ["s", "v", "w", "x", "z"],
        [("a", "v", "w"), ("b", "w", "v"), ("d", "s", "v"), ("d2", "s", "v"),
         ("h", "s", "z"), ("g", "x", "s"), ("c", "x", "z")],
    ),
    "two_loops": Graph(["u", "v", "w"], [("e", "u", "v"), ("f", "u", "w"), ("c", "v", "v"), ("c2", "w", "w")]),
    "isolated": Graph(["u", "v"], []),
    "a3": Graph(["u", "v", "w"], [("e", "u", "v"), ("f", "v", "w")]),
    "two_into_sink": Graph(["u", "v", "w"], [("e", "u", "w"), ("f", "v", "w"), ("g", "u", "w")]),
}

NO_EXIT = ["loop", "a2", "two_cycle", "loop_tail", "tailed_two_cycle", "mixed", "two_loops", "isolated", "a3", "two_into_sink"]


@pytest.fixture(scope="session")
def pool():
    return no_exit_pool(seed=2024, size=50, max_vertices=6)


@pytest.fixture(scope="session")
def exit_graphs():
    return exit_pool(seed=7, size=40, max_vertices=3)


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
