"""The graph monoid M_E.

M_E is the commutative monoid on generators ``a_v`` (one per vertex) with a
relation ``a_v = sum_{s(e)=v} a_{r(e)}`` for every non-sink ``v``.  It is
isomorphic to V(L(E)).  For no-exit graphs equality is decided exactly by
rank vectors (counts of path-family members starting at each vertex); for
other graphs only a bounded breadth-first search is available.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .graph import Graph, is_no_exit
from .structure import BlockMatrix, DecompositionData, NotIdempotent, block_ranks, decompose


class IndexMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MonoidElement:
    """Nonnegative coefficients of the generators ``a_v``, in vertex order."""

    counts: Tuple[int, ...]
    vertices: Tuple[str, ...]

    def __post_init__(self):
        if len(self.counts) != len(self.vertices):
            raise IndexMismatch("one coefficient per vertex required")
        if any(c < 0 for c in self.counts):
            raise ValueError("monoid coefficients are nonnegative")

    @classmethod
    def zero(cls, g: Graph) -> MonoidElement:
        return cls((0,) * len(g.vertices), g.vertices)

    @classmethod
    def generator(cls, g: Graph, v: str) -> MonoidElement:
        i = g.vertex_index(v)
        return cls(tuple(int(j == i) for j in range(len(g.vertices))), g.vertices)

    @classmethod
    def from_dict(cls, g: Graph, coeffs: Dict[str, int]) -> MonoidElement:
        unknown = set(coeffs) - set(g.vertices)
        if unknown:
            raise IndexMismatch(f"unknown vertices {sorted(unknown)}")
        return cls(tuple(coeffs.get(v, 0) for v in g.vertices), g.vertices)

    def _check(self, other: MonoidElement):
        if other.vertices != self.vertices:
            raise IndexMismatch("elements over different vertex sets")

    def __add__(self, other: MonoidElement) -> MonoidElement:
        self._check(other)
        return MonoidElement(tuple(a + b for a, b in zip(self.counts, other.counts)), self.vertices)

    def __sub__(self, other: MonoidElement) -> MonoidElement:
        self._check(other)
        return MonoidElement(tuple(a - b for a, b in zip(self.counts, other.counts)), self.vertices)

    def covers(self, other: MonoidElement) -> bool:
        return all(a >= b for a, b in zip(self.counts, other.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __str__(self):
        parts = []
        for v, c in zip(self.vertices, self.counts):
            if c:
                parts.append(f"a_{v}" if c == 1 else f"{c} a_{v}")
        return " + ".join(parts) if parts else "0"


_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?a_([A-Za-z_][A-Za-z0-9_]*)$")


def parse_monoid_element(g: Graph, text: str) -> MonoidElement:
    """Parse ``"a_v + 2 a_w"``; ``"0"`` is the identity."""
    coeffs: Dict[str, int] = {}
    text = text.strip()
    if text == "0":
        return MonoidElement.zero(g)
    for part in text.split("+"):
        m = _TERM.match(part.strip())
        if not m:
            raise ValueError(f"bad monoid term {part.strip()!r}")
        v = m.group(2)
        if not g.is_vertex(v):
            raise IndexMismatch(f"unknown vertex {v!r}")
        coeffs[v] = coeffs.get(v, 0) + int(m.group(1) or 1)
    return MonoidElement.from_dict(g, coeffs)


Relation = Tuple[MonoidElement, MonoidElement]


def relations(g: Graph) -> List[Relation]:
    """``a_v = sum_{e in s^-1(v)} a_{r(e)}`` for each non-sink ``v``, in vertex order."""
    out = []
    for v in g.vertices:
        es = g.out_edges[v]
        if not es:
            continue
        rhs: Dict[str, int] = {}
        for e in es:
            rhs[g.r(e)] = rhs.get(g.r(e), 0) + 1
        out.append((MonoidElement.generator(g, v), MonoidElement.from_dict(g, rhs)))
    return out


def relation_str(rel: Relation) -> str:
    return f"{rel[0]} = {rel[1]}"


RankVector = Tuple[int, ...]


def rank_vector(d: DecompositionData, x: MonoidElement) -> RankVector:
    """Component ``t`` is ``sum_v x[v] * #{p in family t : s(p) = v}``."""
    if x.vertices != d.graph.vertices:
        raise IndexMismatch("monoid element and decomposition use different vertex sets")
    weight = dict(zip(x.vertices, x.counts))
    return tuple(sum(weight[p.start] for p in b.paths) for b in d.blocks)


def eq_no_exit(d: DecompositionData, x: MonoidElement, y: MonoidElement) -> bool:
    """Equality in M_E for a no-exit graph: compare rank vectors."""
    return rank_vector(d, x) == rank_vector(d, y)


def _neighbours(rels: Sequence[Relation], x: MonoidElement) -> Iterator[MonoidElement]:
    for lhs, rhs in rels:
        if x.covers(lhs):
            yield x - lhs + rhs
        if x.covers(rhs):
            yield x - rhs + lhs


@dataclass
class _Closure:
    seen: set
    closed: bool
    hit: bool


def _explore(rels: Sequence[Relation], x: MonoidElement, target: MonoidElement, depth: int,
             max_states: int) -> _Closure:
    seen = {x}
    if x == target:
        return _Closure(seen, False, True)
    frontier = [x]
    for _ in range(depth):
        nxt = []
        for y in frontier:
            for z in _neighbours(rels, y):
                if z in seen:
                    continue
                if z == target:
                    seen.add(z)
                    return _Closure(seen, False, True)
                seen.add(z)
                nxt.append(z)
        if not nxt:
            return _Closure(seen, True, False)
        if len(seen) > max_states:
            return _Closure(seen, False, False)
        frontier = sorted(nxt)
    # one more look: the class is closed if the last layer produces nothing new
    closed = all(z in seen for y in frontier for z in _neighbours(rels, y))
    return _Closure(seen, closed, False)


def eq_bounded(g: Graph, x: MonoidElement, y: MonoidElement, depth: int, *,
               max_states: int = 200_000) -> str:
    """Semi-decide ``x = y`` in M_E with at most ``depth`` relation applications.

    Returns ``"equal"`` when ``y`` is reached from ``x``, ``"distinct"`` when
    the class of ``x`` or of ``y`` is exhausted within the bound without
    meeting the other, and ``"unknown"`` otherwise.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rels = relations(g)
    fwd = _explore(rels, x, y, depth, max_states)
    if fwd.hit:
        return "equal"
    if fwd.closed:
        return "distinct"
    back = _explore(rels, y, x, depth, max_states)
    if back.hit:
        return "equal"
    if back.closed:
        return "distinct"
    return "unknown"


def _elements_up_to(g: Graph, bound: int) -> List[MonoidElement]:
    n = len(g.vertices)
    out = [MonoidElement(c, g.vertices) for c in product(range(bound + 1), repeat=n) if sum(c) <= bound]
    out.sort()
    return out


@dataclass(frozen=True)
class CancellationCounterexample:
    a: MonoidElement
    b: MonoidElement
    c: MonoidElement

    def __str__(self):
        return f"({self.a}) + ({self.c}) = ({self.b}) + ({self.c}) but {self.a} != {self.b}"


def cancellativity_search(g: Graph, bound: int, depth: int = 6) -> Optional[CancellationCounterexample]:
    """First ``(a, b, c)`` with ``a + c = b + c`` and ``a != b``.

    Elements have coefficient sum at most ``bound``; candidates are ordered by
    ``(|a|+|b|+|c|, a, b, c)`` with ``a > b`` (the swapped triple is the same
    counterexample).  No-exit graphs use the exact rank-vector test; other
    graphs need a proof of equality and a proof of distinctness from
    :func:`eq_bounded`.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    elems = _elements_up_to(g, bound)
    if is_no_exit(g):
        return _search_with_invariant(elems, decompose(g))

    memo: Dict[Tuple[MonoidElement, MonoidElement], str] = {}

    def verdict(x, y):
        key = (x, y) if x <= y else (y, x)
        if key not in memo:
            memo[key] = eq_bounded(g, key[0], key[1], depth)
        return memo[key]

    triples = [(a.total + b.total + c.total, a, b, c) for a in elems for b in elems if a > b for c in elems]
    triples.sort()
    for _, a, b, c in triples:
        if verdict(a, b) == "distinct" and verdict(a + c, b + c) == "equal":
            return CancellationCounterexample(a, b, c)
    return None


def _search_with_invariant(elems: List[MonoidElement], d: DecompositionData) -> Optional[CancellationCounterexample]:
    # rank vectors decide equality exactly, so bucket a + c by rank and look
    # for two members of a bucket whose own ranks differ
    rank = {x: rank_vector(d, x) for x in elems}
    best = None
    for c in elems:
        rc = rank[c]
        buckets: Dict[RankVector, List[MonoidElement]] = defaultdict(list)
        for a in elems:
            buckets[tuple(x + y for x, y in zip(rank[a], rc))].append(a)
        for members in buckets.values():
            for a in members:
                for b in members:
                    if a > b and rank[a] != rank[b]:
                        cand = (a.total + b.total + c.total, a, b, c)
                        if best is None or cand < best:
                            best = cand
    return None if best is None else CancellationCounterexample(*best[1:])


def idempotent_rank(d: DecompositionData, e: BlockMatrix) -> RankVector:
    """Per-block rank of an idempotent of the matrix model."""
    if e.sizes != tuple(b.size for b in d.blocks):
        raise IndexMismatch("matrix shape does not match the decomposition")
    if e * e != e:
        raise NotIdempotent("input is not idempotent")
    return block_ranks(e)
