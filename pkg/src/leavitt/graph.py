"""Finite directed multigraphs, paths and cycles.

Vertices and edges are named by identifiers; all iteration orders follow the
order of declaration so every result is reproducible.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class GraphError(ValueError):
    """Malformed graph document or inconsistent graph data."""


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    range: str


@dataclass(frozen=True, order=True)
class Path:
    """A path ``e_1 ... e_n``; a length-0 path is the vertex ``start``."""

    start: str
    edges: Tuple[str, ...] = ()
    end: str = ""

    def __post_init__(self):
        if not self.end:
            if self.edges:
                raise PathError("nonempty path needs an explicit end vertex")
            object.__setattr__(self, "end", self.start)
        elif not self.edges and self.end != self.start:
            raise PathError("a length-0 path starts and ends at its vertex")

    @property
    def source(self) -> str:
        return self.start

    @property
    def range(self) -> str:
        return self.end

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def sort_key(self):
        return (len(self.edges), self.edges, self.start)

    def __add__(self, other: Path) -> Path:
        if self.end != other.start:
            raise PathError(f"cannot compose {self} with {other}")
        return Path(self.start, self.edges + other.edges, other.end)

    def startswith(self, other: Path) -> bool:
        return self.start == other.start and self.edges[: len(other.edges)] == other.edges

    def endswith(self, other: Path) -> bool:
        n = len(other.edges)
        return self.end == other.end and (n == 0 or self.edges[-n:] == other.edges)

    def __str__(self):
        return " ".join(self.edges) if self.edges else self.start


@dataclass(frozen=True)
class Cycle:
    """A closed path whose edges have pairwise distinct sources.

    Stored in canonical rotation: it starts at the cycle vertex that comes
    first in the graph's vertex order.
    """

    path: Path

    @property
    def edges(self) -> Tuple[str, ...]:
        return self.path.edges

    @property
    def base(self) -> str:
        return self.path.start

    def __len__(self) -> int:
        return len(self.path)

    def __str__(self):
        return f"({self.path})"


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, vertices: Sequence[str], edges: Sequence):
        vs = tuple(vertices)
        es = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex name")
        names = [e.name for e in es]
        if len(set(names)) != len(names):
            raise GraphError("duplicate edge name")
        clash = set(vs) & set(names)
        if clash:
            raise GraphError(f"names used for both a vertex and an edge: {sorted(clash)}")
        for name in vs + tuple(names):
            if not isinstance(name, str) or not NAME_RE.fullmatch(name):
                raise GraphError(f"invalid name {name!r}")
        for e in es:
            for end in (e.source, e.range):
                if end not in vs:
                    raise GraphError(f"edge {e.name} references unknown vertex {end!r}")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vs)})

    # -- lookups -------------------------------------------------------------

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return {e.name: e for e in self.edges}

    @cached_property
    def out_edges(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e.name)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.range].append(e.name)
        return {v: tuple(es) for v, es in out.items()}

    def s(self, e: str) -> str:
        return self.edge_map[e].source

    def r(self, e: str) -> str:
        return self.edge_map[e].range

    def vertex_index(self, v: str) -> int:
        return self._index[v]

    def is_vertex(self, name: str) -> bool:
        return name in self._index

    def is_edge(self, name: str) -> bool:
        return name in self.edge_map

    def path(self, *items: str) -> Path:
        """Build a path from edge names, or from a single vertex name."""
        if len(items) == 1 and self.is_vertex(items[0]):
            return Path(items[0])
        if not items:
            raise PathError("empty path needs a vertex")
        for e in items:
            if not self.is_edge(e):
                raise PathError(f"unknown edge {e!r}")
        for a, b in zip(items, items[1:]):
            if self.r(a) != self.s(b):
                raise PathError(f"edges {a} and {b} are not composable")
        return Path(self.s(items[0]), tuple(items), self.r(items[-1]))

    def vertex(self, v: str) -> Path:
        if not self.is_vertex(v):
            raise PathError(f"unknown vertex {v!r}")
        return Path(v)

    def edge_path(self, e: str) -> Path:
        return Path(self.s(e), (e,), self.r(e))

    # -- structure -------------------------------------------------------------

    def sinks(self) -> set:
        return {v for v in self.vertices if not self.out_edges[v]}

    def sources(self) -> set:
        return {v for v in self.vertices if not self.in_edges[v]}

    def ordered(self, vs) -> List[str]:
        return sorted(vs, key=self.vertex_index)

    @cached_property
    def cycles(self) -> Tuple[Cycle, ...]:
        return tuple(enumerate_cycles(self))

    @cached_property
    def cycle_edges(self) -> frozenset:
        return frozenset(e for c in self.cycles for e in c.edges)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [[e.name, e.source, e.range] for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self):
        es = ", ".join(f"{e.name}: {e.source}->{e.range}" for e in self.edges)
        return f"Graph(vertices={list(self.vertices)}, edges=[{es}])"


def parse_graph(text: str) -> Graph:
    """Parse the JSON graph document ``{"vertices": [...], "edges": [[name, s, r], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"vertices", "edges"}:
        raise GraphError("graph document must be an object with 'vertices' and 'edges'")
    vertices = doc["vertices"]
    edges = doc["edges"]
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise GraphError("'vertices' and 'edges' must be arrays")
    for e in edges:
        if not isinstance(e, list) or len(e) != 3 or not all(isinstance(x, str) for x in e):
            raise GraphError(f"edge entry must be [name, source, range], got {e!r}")
    return Graph(vertices, [tuple(e) for e in edges])


def sinks(g: Graph) -> set:
    return g.sinks()


def sources(g: Graph) -> set:
    return g.sources()


def enumerate_cycles(g: Graph) -> List[Cycle]:
    """All cycles of ``g`` up to rotation, sorted by (length, edge names)."""
    found: List[Cycle] = []
    for base in g.vertices:
        lo = g.vertex_index(base)

        def walk(v: str, edges: Tuple[str, ...], seen: frozenset):
            for e in g.out_edges[v]:
                w = g.r(e)
                if w == base:
                    found.append(Cycle(Path(base, edges + (e,), base)))
                elif g.vertex_index(w) > lo and w not in seen:
                    walk(w, edges + (e,), seen | {w})

        walk(base, (), frozenset({base}))
    found.sort(key=lambda c: (len(c), c.edges))
    return found


def find_exit(g: Graph, c: Cycle) -> Optional[Tuple[str, int]]:
    """First exit of ``c`` as ``(edge, position)``, scanning positions then edge order."""
    for i, e in enumerate(c.edges):
        for f in g.out_edges[g.s(e)]:
            if f != e:
                return f, i
    return None


def is_no_exit(g: Graph) -> bool:
    return all(find_exit(g, c) is None for c in g.cycles)


def exit_witness(g: Graph) -> Optional[Tuple[Cycle, str, int]]:
    for c in g.cycles:
        ex = find_exit(g, c)
        if ex is not None:
            return c, ex[0], ex[1]
    return None


def rotate(g: Graph, c: Cycle, position: int) -> Path:
    """The closed path of ``c`` started at edge ``position``."""
    es = c.edges[position:] + c.edges[:position]
    v = g.s(es[0])
    return Path(v, es, v)


OPPOSITE_SUFFIX = "_op"


def opposite_graph(g: Graph) -> Graph:
    """Reverse every edge; edge ``e`` becomes ``e_op`` (and ``e_op`` becomes ``e``)."""

    def rename(name: str) -> str:
        if name.endswith(OPPOSITE_SUFFIX):
            return name[: -len(OPPOSITE_SUFFIX)]
        return name + OPPOSITE_SUFFIX

    return Graph(g.vertices, [Edge(rename(e.name), e.range, e.source) for e in g.edges])


def paths_ending_at(g: Graph, v: str, mode: str = "no-cycle-edges", length: Optional[int] = None) -> List[Path]:
    """Paths ending at ``v``.

    ``mode="no-cycle-edges"`` restricts to edges lying on no cycle (always a
    finite set); ``mode="all-bounded"`` returns every path of length at most
    ``length``.
    """
    if mode == "no-cycle-edges":
        allowed = lambda e: e not in g.cycle_edges  # noqa: E731
        bound = None
    elif mode == "all-bounded":
        if length is None or length < 0:
            raise ValueError("all-bounded mode needs a nonnegative length")
        allowed = lambda e: True  # noqa: E731
        bound = length
    else:
        raise ValueError(f"unknown mode {mode!r}")

    out: List[Path] = []

    def back(p: Path):
        out.append(p)
        if bound is not None and len(p) >= bound:
            return
        for e in g.in_edges[p.start]:
            if allowed(e):
                back(Path(g.s(e), (e,) + p.edges, p.end))

    back(g.vertex(v))
    out.sort(key=lambda p: p.sort_key)
    return out


def all_paths(g: Graph, max_length: int) -> Iterator[Path]:
    """Every path of length at most ``max_length`` (vertices first)."""
    frontier = [Path(v) for v in g.vertices]
    for _ in range(max_length + 1):
        yield from frontier
        nxt = []
        for p in frontier:
            for e in g.out_edges[p.end]:
                nxt.append(Path(p.start, p.edges + (e,), g.r(e)))
        frontier = nxt
