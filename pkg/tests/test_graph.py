import json
from itertools import product
from random import Random

import pytest
from hypothesis import given, strategies as st

from conftest import NAMED
from leavitt.generate import random_graph, random_no_exit_graph
from leavitt.graph import (
    Graph,
    GraphError,
    Path,
    PathError,
    enumerate_cycles,
    find_exit,
    is_no_exit,
    opposite_graph,
    parse_graph,
    paths_ending_at,
    sinks,
    sources,
)

seeds = st.integers(min_value=0, max_value=2**32)


def brute_cycles(g: Graph):
    """Closed paths with distinct sources, up to rotation, from raw edge sequences."""
    found = set()
    E = g.edges
    for n in range(1, len(E) + 1):
        for seq in product(E, repeat=n):
            if any(seq[i].range != seq[(i + 1) % n].source for i in range(n)):
                continue
            srcs = [e.source for e in seq]
            if len(set(srcs)) != n:
                continue
            # canonical rotation: start at the earliest vertex
            k = min(range(n), key=lambda i: g.vertices.index(srcs[i]))
            found.add(tuple(e.name for e in seq[k:] + seq[:k]))
    return sorted(found, key=lambda c: (len(c), c))


def brute_has_exit(g: Graph) -> bool:
    # exit <=> some vertex on a cycle emits two edges
    on_cycle = {g.s(e) for c in g.cycles for e in c.edges}
    return any(len(g.out_edges[v]) >= 2 for v in on_cycle)


# -- parsing ------------------------------------------------------------------


def test_parse_loop():
    g = parse_graph('{"vertices":["v"],"edges":[["e","v","v"]]}')
    assert g.vertices == ("v",)
    assert [(e.name, e.source, e.range) for e in g.edges] == [("e", "v", "v")]


def test_parse_a2():
    g = parse_graph('{"vertices":["v","w"],"edges":[["e","v","w"]]}')
    assert g.s("e") == "v" and g.r("e") == "w"


@pytest.mark.parametrize("doc", [
    '{"vertices":["v"],"edges":[["e","v","x"]]}',          # dangling
    '{"vertices":["v","v"],"edges":[]}',                   # duplicate vertex
    '{"vertices":["v"],"edges":[["e","v","v"],["e","v","v"]]}',
    '{"vertices":["v"],"edges":[["v","v","v"]]}',          # name clash across kinds
    '{"vertices":["1v"],"edges":[]}',                      # bad name
    '{"vertices":["v"],"edges":[["e","v"]]}',
    '{"vertices":"v","edges":[]}',
    '{"vertices":["v"]}',
    'not json',
    '[]',
])
def test_parse_errors(doc):
    with pytest.raises(GraphError):
        parse_graph(doc)


def test_json_round_trip():
    for g in NAMED.values():
        assert parse_graph(g.to_json()) == g


# -- paths --------------------------------------------------------------------


def test_path_composability():
    g = NAMED["a2"]
    with pytest.raises(PathError):
        g.path("e", "e")
    p = g.path("w")
    assert len(p) == 0 and p.source == p.range == "w"
    assert str(g.path("e")) == "e"


# -- sinks and sources --------------------------------------------------------


def test_sinks_sources():
    assert sinks(NAMED["a2"]) == {"w"} and sources(NAMED["a2"]) == {"v"}
    assert sinks(NAMED["loop"]) == set() and sources(NAMED["loop"]) == set()
    g = Graph(["u"], [])
    assert sinks(g) == {"u"} == sources(g)


# -- cycles -------------------------------------------------------------------


def test_cycle_examples():
    assert [c.edges for c in enumerate_cycles(NAMED["loop"])] == [("c",)]
    assert [c.edges for c in enumerate_cycles(NAMED["rose2"])] == [("e",), ("f",)]
    assert enumerate_cycles(NAMED["a2"]) == []


def test_cycle_canonical_rotation():
    g = Graph(["w", "v"], [("a", "v", "w"), ("b", "w", "v")])
    (c,) = enumerate_cycles(g)
    assert c.edges == ("b", "a") and c.base == "w"


@given(seeds)
def test_cycles_match_brute_force(seed):
    g = random_graph(Random(seed), max_vertices=4, max_edges=6)
    assert [c.edges for c in enumerate_cycles(g)] == brute_cycles(g)


def test_cycles_exhaustive_small():
    # every graph on two vertices with at most four edges
    vs = ["v", "w"]
    pairs = list(product(vs, vs))
    for n in range(5):
        for choice in product(pairs, repeat=n):
            g = Graph(vs, [(f"e{i}", s, r) for i, (s, r) in enumerate(choice)])
            assert [c.edges for c in enumerate_cycles(g)] == brute_cycles(g)


# -- exits --------------------------------------------------------------------


def test_exit_examples():
    g = NAMED["rose2"]
    assert find_exit(g, g.cycles[0]) == ("f", 0)
    assert find_exit(NAMED["loop"], NAMED["loop"].cycles[0]) is None
    h = Graph(["v", "w"], [("a", "v", "w"), ("b", "w", "v"), ("h", "w", "w")])
    two = [c for c in h.cycles if len(c) == 2][0]
    assert find_exit(h, two) == ("h", 1)


def test_no_exit_examples():
    assert is_no_exit(NAMED["loop"])
    assert not is_no_exit(NAMED["rose2"])
    assert is_no_exit(NAMED["a2"])


@given(seeds)
def test_exit_formulations_agree(seed):
    g = random_graph(Random(seed), max_vertices=4, max_edges=6)
    assert is_no_exit(g) == (not brute_has_exit(g))


@given(seeds)
def test_generated_no_exit(seed):
    g = random_no_exit_graph(Random(seed))
    assert is_no_exit(g) and not brute_has_exit(g)


# -- opposite graph -----------------------------------------------------------


def test_opposite_examples():
    op = opposite_graph(NAMED["a2"])
    (e,) = op.edges
    assert (e.source, e.range) == ("w", "v")
    loop = opposite_graph(NAMED["loop"])
    assert len(loop.edges) == 1 and loop.edges[0].source == loop.edges[0].range == "v"


@given(seeds)
def test_opposite_properties(seed):
    g = random_graph(Random(seed), max_vertices=4, max_edges=6)
    op = opposite_graph(g)
    assert op.vertices == g.vertices and len(op.edges) == len(g.edges)
    assert sinks(op) == sources(g) and sources(op) == sinks(g)
    assert opposite_graph(op) == g


# -- path enumeration ---------------------------------------------------------


def test_paths_ending_examples():
    assert [str(p) for p in paths_ending_at(NAMED["a2"], "w")] == ["w", "e"]
    assert [str(p) for p in paths_ending_at(NAMED["loop"], "v")] == ["v"]
    assert [str(p) for p in paths_ending_at(NAMED["tailed_two_cycle"], "v")] == ["v", "t"]


def test_paths_bounded():
    got = [str(p) for p in paths_ending_at(NAMED["loop"], "v", "all-bounded", 3)]
    assert got == ["v", "c", "c c", "c c c"]
    with pytest.raises(ValueError):
        paths_ending_at(NAMED["loop"], "v", "all-bounded", -1)


@given(seeds, st.integers(0, 3))
def test_paths_bounded_brute_force(seed, n):
    g = random_graph(Random(seed), max_vertices=3, max_edges=4)
    for v in g.vertices:
        want = [Path(v)]
        for k in range(1, n + 1):
            for seq in product([e.name for e in g.edges], repeat=k):
                if g.r(seq[-1]) == v and all(g.r(seq[i]) == g.s(seq[i + 1]) for i in range(k - 1)):
                    want.append(g.path(*seq))
        want.sort(key=lambda p: p.sort_key)
        assert paths_ending_at(g, v, "all-bounded", n) == want


@given(seeds)
def test_paths_no_cycle_edges(seed):
    g = random_no_exit_graph(Random(seed))
    cyc = g.cycle_edges
    for v in g.vertices:
        ps = paths_ending_at(g, v)
        assert all(not set(p.edges) & cyc for p in ps)
        assert all(p.range == v for p in ps)
        # every such path is also found by the bounded enumeration
        bounded = paths_ending_at(g, v, "all-bounded", len(g.vertices))
        assert ps == [p for p in bounded if not set(p.edges) & cyc]
