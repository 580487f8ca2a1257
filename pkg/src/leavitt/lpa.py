"""Elements of the Leavitt path algebra L_K(E) in normal form.

Every element is a finite K-linear combination of monomials ``p q*`` with
``r(p) = r(q)``.  The spanning set {p q*} is not linearly independent: the
relation ``v = sum_{s(e)=v} e e*`` lets one monomial be traded for others.
To get a basis we fix for every non-sink vertex ``v`` a *special edge*
``gamma(v)`` (the first edge ``v`` emits) and forbid monomials in which ``p``
and ``q`` both end in the same special edge.  Rewriting

    p0 g (q0 g)*  ->  p0 q0*  -  sum_{f in s^-1(v), f != g} (p0 f)(q0 f)*

(``g = gamma(v)``) removes such monomials.  Each step replaces a monomial of
total length ``n`` by one of length ``n - 2`` and several of length ``n`` that
do not end in ``g`` at that junction, so the pair (total length, number of
special endings) decreases lexicographically and rewriting terminates.  The
monomials that survive form a basis, so equality of elements is equality of
normal forms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Dict, Iterable, List, Optional, Tuple

from .graph import Cycle, Graph, Path, exit_witness, rotate
from .scalar import Field, Gaussian, Scalar

Monomial = Tuple[Path, Path]


class AlgebraMismatch(ValueError):
    pass


class ExpressionError(ValueError):
    pass


def monomial_key(m: Monomial):
    p, q = m
    return (len(p) + len(q), p.sort_key, q.sort_key)


def monomial_degree(m: Monomial) -> int:
    return len(m[0]) - len(m[1])


def monomial_product(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """``(p q*)(u v*)`` using only (P1), (P2) and (CK1); ``None`` means zero."""
    p, q = a
    u, v = b
    if q.start != u.start:
        return None
    n, k = len(q), len(u)
    if n <= k and u.edges[:n] == q.edges:
        tail = u.edges[n:]
        return Path(p.start, p.edges + tail, u.end), v
    if k < n and q.edges[:k] == u.edges:
        tail = q.edges[k:]
        return p, Path(v.start, v.edges + tail, q.end)
    return None


def monomial_str(m: Monomial) -> str:
    p, q = m
    if not p.edges and not q.edges:
        return p.start
    return " ".join(list(p.edges) + [e + "*" for e in reversed(q.edges)])


class LeavittPathAlgebra:
    """L_K(E) for a finite graph ``E`` and a coefficient field ``K``."""

    def __init__(self, graph: Graph, field: Field):
        if not graph.vertices:
            raise ValueError("the graph has no vertices")
        self.graph = graph
        self.field = field

    @cached_property
    def special_edges(self) -> Dict[str, str]:
        """The special edge of each non-sink vertex: its first outgoing edge."""
        return {v: es[0] for v, es in self.graph.out_edges.items() if es}

    def __eq__(self, other):
        return isinstance(other, LeavittPathAlgebra) and self.graph == other.graph and self.field == other.field

    def __hash__(self):
        return hash((self.graph, self.field))

    def __repr__(self):
        return f"L_{self.field}({self.graph})"

    # -- constructors ----------------------------------------------------------

    def element(self, terms: Dict[Monomial, Scalar] | Iterable = (), *, normalize_terms: bool = True) -> Element:
        items = terms.items() if isinstance(terms, dict) else terms
        raw: Dict[Monomial, Scalar] = {}
        for m, c in items:
            c = c if self.field.contains(c) else self.field(c)
            raw[m] = raw[m] + c if m in raw else c
        if normalize_terms:
            return Element(self, normalize(self, raw))
        return Element(self, {m: c for m, c in raw.items() if c})

    @property
    def zero(self) -> Element:
        return Element(self, {})

    def unit(self) -> Element:
        one = self.field.one
        return Element(self, {(Path(v), Path(v)): one for v in self.graph.vertices})

    def vertex(self, v: str) -> Element:
        p = self.graph.vertex(v)
        return Element(self, {(p, p): self.field.one})

    def path(self, p: Path) -> Element:
        return self.element({(p, Path(p.end)): self.field.one})

    def ghost_path(self, q: Path) -> Element:
        return self.element({(Path(q.end), q): self.field.one})

    def edge(self, e: str) -> Element:
        return self.path(self.graph.edge_path(e))

    def ghost(self, e: str) -> Element:
        return self.ghost_path(self.graph.edge_path(e))

    def monomial(self, p: Path, q: Path, coef=1) -> Element:
        if p.end != q.end:
            raise ValueError(f"monomial needs r(p) = r(q), got {p} and {q}")
        return self.element({(p, q): coef})

    def scalar(self, c) -> Element:
        return self.unit() * self.field(c)

    def parse(self, text: str) -> Element:
        return parse_element(self, text)

    def random_element(self, rng: Random, *, terms: int = 3, max_length: int = 2) -> Element:
        raw = {}
        for _ in range(rng.randint(0, terms)):
            p = _random_path_into(self.graph, rng, rng.choice(self.graph.vertices), rng.randint(0, max_length))
            q = _random_path_into(self.graph, rng, p.end, rng.randint(0, max_length))
            raw[(p, q)] = self.field.random(rng, nonzero=True)
        return self.element(raw)


def _random_path_into(g: Graph, rng: Random, v: str, length: int) -> Path:
    p = Path(v)
    for _ in range(length):
        ins = g.in_edges[p.start]
        if not ins:
            break
        e = rng.choice(ins)
        p = Path(g.s(e), (e,) + p.edges, p.end)
    return p


def reducible(alg: LeavittPathAlgebra, m: Monomial) -> bool:
    p, q = m
    if not p.edges or not q.edges:
        return False
    e = p.edges[-1]
    return e == q.edges[-1] and alg.special_edges.get(alg.graph.s(e)) == e


def rewrite(alg: LeavittPathAlgebra, m: Monomial) -> List[Tuple[Monomial, int]]:
    """One (CK2) step on a reducible monomial: returns (monomial, sign) pairs."""
    g = alg.graph
    p, q = m
    gamma = p.edges[-1]
    v = g.s(gamma)
    p0 = Path(p.start, p.edges[:-1], v)
    q0 = Path(q.start, q.edges[:-1], v)
    out = [((p0, q0), 1)]
    for f in g.out_edges[v]:
        if f != gamma:
            rf = g.r(f)
            out.append(((Path(p0.start, p0.edges + (f,), rf), Path(q0.start, q0.edges + (f,), rf)), -1))
    return out


def normalize(alg: LeavittPathAlgebra, raw: Dict[Monomial, Scalar], rng: Optional[Random] = None) -> Dict[Monomial, Scalar]:
    """Rewrite a raw combination into normal form.

    With ``rng`` the next redex is chosen at random; otherwise the largest
    redex (by monomial order) is rewritten first.  Coefficients are combined
    eagerly and zero terms dropped.
    """
    cur: Dict[Monomial, Scalar] = {m: c for m, c in raw.items() if c}
    pending = {m for m in cur if reducible(alg, m)}
    while pending:
        if rng is None:
            m = max(pending, key=monomial_key)
        else:
            m = rng.choice(sorted(pending, key=monomial_key))
        pending.discard(m)
        c = cur.pop(m)
        for m2, sign in rewrite(alg, m):
            c2 = c if sign > 0 else -c
            new = cur[m2] + c2 if m2 in cur else c2
            if new:
                cur[m2] = new
                if reducible(alg, m2):
                    pending.add(m2)
            else:
                cur.pop(m2, None)
                pending.discard(m2)
    return cur


class Element:
    """An element of L_K(E), stored as its normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LeavittPathAlgebra, terms: Dict[Monomial, Scalar]):
        self.algebra = algebra
        self.terms = terms

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def graph(self) -> Graph:
        return self.algebra.graph

    def _check(self, other: Element):
        if not isinstance(other, Element):
            raise TypeError(f"expected an Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, Element):
            return self + self.algebra.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            new = out[m] + c if m in out else c
            if new:
                out[m] = new
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Element:
        c = self.field(c) if not self.field.contains(c) else c
        if not c:
            return self.algebra.zero
        return Element(self.algebra, {m: a * c for m, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        raw: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_product(m1, m2)
                if m is not None:
                    c = c1 * c2
                    raw[m] = raw[m] + c if m in raw else c
        return Element(self.algebra, normalize(self.algebra, raw))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> Element:
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = self.algebra.unit()
        for _ in range(n):
            out = out * self
        return out

    def star(self) -> Element:
        st = self.field.star
        return Element(self.algebra, normalize(self.algebra, {(q, p): st(c) for (p, q), c in self.terms.items()}))

    def degree_components(self) -> Dict[int, Element]:
        out: Dict[int, Dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            out.setdefault(monomial_degree(m), {})[m] = c
        return {d: Element(self.algebra, ts) for d, ts in sorted(out.items())}

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self.terms}) <= 1

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        if isinstance(other, int) or self.field.contains(other):
            return self == self.algebra.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> List[Tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts: List[str] = []
        for m, c in self.sorted_terms():
            parts.append(_term_text(c, monomial_str(m), first=not parts))
        return " ".join(parts)


def _term_text(c: Scalar, mono: str, first: bool) -> str:
    if isinstance(c, Gaussian) and c.re and c.im:
        body = f"({c}) {mono}"
        return body if first else f"+ {body}"
    s = str(c)
    neg = s.startswith("-")
    mag = s[1:] if neg else s
    body = mono if mag == "1" else f"{mag} {mono}"
    if first:
        return f"-{body}" if neg else body
    return f"- {body}" if neg else f"+ {body}"


# -- expression parsing --------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<paren>\([^()]*\))|(?P<num>\d+(?:/\d+)?i?|i(?![A-Za-z0-9_]))"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[+\-*]))"
)


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        yield kind, m.group(kind)


def parse_element(alg: LeavittPathAlgebra, text: str) -> Element:
    """Parse ``term (("+"|"-") term)*`` where a term is an optional scalar
    followed by factors ``name`` or ``name*``.

    Gaussian scalars with two parts must be parenthesised, e.g. ``(1/2+3i) e``.
    A bare ``i`` is the imaginary unit unless the graph has a vertex or edge of
    that name.
    """
    g, field = alg.graph, alg.field
    toks = list(_tokens(text))
    # a bare "i" that names a graph object is a name, not a scalar
    toks = [("name", v) if k == "num" and v == "i" and (g.is_vertex("i") or g.is_edge("i")) else (k, v) for k, v in toks]
    if not toks:
        raise ExpressionError("empty expression")
    i = 0
    total = alg.zero
    sign = 1
    if toks[0] == ("op", "+") or toks[0] == ("op", "-"):
        sign = -1 if toks[0][1] == "-" else 1
        i = 1
    while True:
        coef = field.one
        seen_scalar = False
        while i < len(toks) and toks[i][0] in ("num", "paren"):
            try:
                coef = coef * field.parse(toks[i][1])
            except ValueError as exc:
                raise ExpressionError(str(exc)) from exc
            seen_scalar = True
            i += 1
        factors: List[Element] = []
        while i < len(toks) and toks[i][0] == "name":
            name = toks[i][1]
            i += 1
            ghost = i < len(toks) and toks[i] == ("op", "*")
            if ghost:
                i += 1
            if g.is_vertex(name):
                factors.append(alg.vertex(name))
            elif g.is_edge(name):
                factors.append(alg.ghost(name) if ghost else alg.edge(name))
            else:
                raise ExpressionError(f"unknown vertex or edge {name!r}")
        if not factors and not seen_scalar:
            raise ExpressionError(f"expected a term near token {i}")
        term = alg.unit() if not factors else factors[0]
        for f in factors[1:]:
            term = term * f
        term = term.scale(coef if sign > 0 else -coef)
        total = total + term
        if i == len(toks):
            return total
        kind, val = toks[i]
        if kind != "op" or val not in "+-":
            raise ExpressionError(f"unexpected token {val!r}")
        sign = 1 if val == "+" else -1
        i += 1
        if i == len(toks):
            raise ExpressionError("dangling operator at end of expression")


# -- constructive witnesses ------------------------------------------------------


@dataclass(frozen=True)
class ExitCycle:
    """A cycle rotated so that the chosen exit leaves from its base vertex."""

    cycle: Cycle
    closed_path: Path
    exit_edge: str
    base: str


def exit_cycle(g: Graph) -> Optional[ExitCycle]:
    w = exit_witness(g)
    if w is None:
        return None
    c, f, pos = w
    p = rotate(g, c, pos)
    return ExitCycle(c, p, f, p.start)


@dataclass(frozen=True)
class NonfiniteWitness:
    x: Element
    exit: ExitCycle


def nonfinite_witness(alg: LeavittPathAlgebra) -> Optional[NonfiniteWitness]:
    """An element with ``x* x = 1`` but ``x x* != 1`` when the graph has a cycle with an exit.

    Takes the cycle ``p`` rotated so the exit sits at its base ``v`` and returns
    ``x = p + sum_{w != v} w``.
    """
    ec = exit_cycle(alg.graph)
    if ec is None:
        return None
    x = alg.path(ec.closed_path)
    for w in alg.graph.vertices:
        if w != ec.base:
            x = x + alg.vertex(w)
    return NonfiniteWitness(x, ec)


class NoExitCycle(ValueError):
    pass


def orthogonal_idempotents(alg: LeavittPathAlgebra, n: int) -> List[Element]:
    """The idempotents ``p^k e e* (p*)^k`` for ``k = 1..n``, where ``p`` is a cycle
    with exit ``e`` at its base."""
    if n < 1:
        raise ValueError("need at least one idempotent")
    ec = exit_cycle(alg.graph)
    if ec is None:
        raise NoExitCycle("every cycle of the graph is exit-free")
    g = alg.graph
    e = g.edge_path(ec.exit_edge)
    out = []
    pk = Path(ec.base)
    for _ in range(n):
        pk = pk + ec.closed_path
        pe = pk + e
        out.append(alg.monomial(pe, pe))
    return out
