"""Random finite graphs for sampling-based checks."""
from __future__ import annotations

from random import Random
from typing import List

from .graph import Graph, is_no_exit


def random_no_exit_graph(rng: Random, max_vertices: int = 6, max_cycle: int = 3) -> Graph:
    """A random finite graph in which no cycle has an exit.

    Some vertices are grouped into disjoint cycles whose vertices emit only
    their cycle edge; the remaining vertices form a DAG that may feed into
    the cycles.
    """
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    pool = names[:]
    rng.shuffle(pool)
    cycles: List[List[str]] = []
    while pool and rng.random() < 0.5:
        size = rng.randint(1, min(max_cycle, len(pool)))
        cycles.append([pool.pop() for _ in range(size)])
    dag = pool  # topological order
    edges = []
    k = 0

    def new_edge(s, r):
        nonlocal k
        edges.append((f"e{k}", s, r))
        k += 1

    for cyc in cycles:
        for i, v in enumerate(cyc):
            new_edge(v, cyc[(i + 1) % len(cyc)])
    on_cycle = [v for cyc in cycles for v in cyc]
    for i, v in enumerate(dag):
        targets = dag[i + 1:] + on_cycle
        if not targets:
            continue
        for _ in range(rng.choice((0, 1, 1, 2))):
            new_edge(v, rng.choice(targets))
    order = names[:]
    rng.shuffle(order)
    g = Graph(order, edges)
    assert is_no_exit(g)
    return g


def random_graph(rng: Random, max_vertices: int = 3, max_edges: int = 4) -> Graph:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = [(f"e{i}", rng.choice(vs), rng.choice(vs)) for i in range(rng.randint(0, max_edges))]
    return Graph(vs, edges)


def random_exit_graph(rng: Random, max_vertices: int = 3, max_edges: int = 4) -> Graph:
    """A random graph with at least one cycle that has an exit."""
    while True:
        g = random_graph(rng, max_vertices, max_edges)
        if not is_no_exit(g):
            return g


def no_exit_pool(seed: int = 0, size: int = 50, max_vertices: int = 6) -> List[Graph]:
    rng = Random(seed)
    return [random_no_exit_graph(rng, max_vertices) for _ in range(size)]


def exit_pool(seed: int = 0, size: int = 30, max_vertices: int = 3) -> List[Graph]:
    rng = Random(seed)
    return [random_exit_graph(rng, max_vertices) for _ in range(size)]
